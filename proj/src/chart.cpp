#include "vldcop/chart.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vldcop {

void ChartSpec::validate() const {
  if (series.empty()) throw std::invalid_argument("chart series must be non-empty");
  std::set<int> mags;
  for (const auto& [label, mag] : series) {
    if (label.empty()) throw std::invalid_argument("empty series label");
    if (!mags.insert(mag).second)
      throw std::invalid_argument("chart magnitudes must be distinct");
  }
}

const char* chart_kind_name(ChartSpec::Kind k) {
  switch (k) {
    case ChartSpec::Kind::Bar: return "bar";
    case ChartSpec::Kind::Line: return "line";
    case ChartSpec::Kind::Histogram: return "histogram";
  }
  return "?";
}

ChartSpec::Kind chart_kind_from_name(const std::string& name) {
  if (name == "bar") return ChartSpec::Kind::Bar;
  if (name == "line") return ChartSpec::Kind::Line;
  if (name == "histogram") return ChartSpec::Kind::Histogram;
  throw std::invalid_argument("unknown chart kind: " + name);
}

std::vector<int> decode_chart(const ChartSpec& spec) {
  spec.validate();
  const std::size_t n = spec.series.size();
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return spec.series[a].second > spec.series[b].second;
  });
  std::vector<int> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = static_cast<int>(r);
  return rank;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_chart(const ChartSpec& spec) {
  spec.validate();
  const int n = static_cast<int>(spec.series.size());
  const int width = 400, height = 300;
  const int left = 50, right = 20, top = 40, bottom = 50;
  const int plot_w = width - left - right;
  const int plot_h = height - top - bottom;
  int max_mag = 0;
  for (const auto& [label, mag] : spec.series) max_mag = std::max(max_mag, mag);
  if (max_mag == 0) max_mag = 1;

  auto x_center = [&](int i) { return left + plot_w * (2 * i + 1) / (2 * n); };
  auto bar_h = [&](int mag) { return plot_h * mag / max_mag; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-size=\"14\">" << escape_xml(spec.title) << "</text>\n";
  // axes
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
      << left + plot_w << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\" font-size=\"11\">" << escape_xml(spec.x_label)
      << "</text>\n";
  svg << "<text x=\"14\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 14 "
      << height / 2 << ")\">" << escape_xml(spec.y_label) << "</text>\n";

  std::string line_points;
  for (int i = 0; i < n; ++i) {
    const auto& [label, mag] = spec.series[i];
    const int cx = x_center(i);
    const int h = bar_h(mag);
    const int y = top + plot_h - h;
    svg << "<g id=\"s" << i << "\">\n";
    if (spec.kind == ChartSpec::Kind::Bar) {
      const int bw = plot_w / (2 * n);
      svg << "  <rect x=\"" << cx - bw / 2 << "\" y=\"" << y << "\" width=\"" << bw
          << "\" height=\"" << h << "\" fill=\"steelblue\"/>\n";
    } else if (spec.kind == ChartSpec::Kind::Histogram) {
      // touching bins
      const int bw = plot_w / n;
      svg << "  <rect x=\"" << left + i * bw << "\" y=\"" << y << "\" width=\""
          << bw << "\" height=\"" << h
          << "\" fill=\"darkseagreen\" stroke=\"black\"/>\n";
    } else {
      svg << "  <circle cx=\"" << cx << "\" cy=\"" << y
          << "\" r=\"4\" fill=\"firebrick\"/>\n";
      if (!line_points.empty()) line_points += " ";
      line_points += std::to_string(cx) + "," + std::to_string(y);
    }
    svg << "  <text x=\"" << cx << "\" y=\"" << top + plot_h + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << escape_xml(label)
        << "</text>\n";
    svg << "</g>\n";
  }
  if (spec.kind == ChartSpec::Kind::Line)
    svg << "<polyline points=\"" << line_points
        << "\" fill=\"none\" stroke=\"firebrick\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace vldcop
