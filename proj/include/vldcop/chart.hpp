#pragma once

#include <string>
#include <utility>
#include <vector>

namespace vldcop {

// A preference rendering: higher magnitude = more preferred. Magnitudes are
// kept distinct so the induced order is total.
struct ChartSpec {
  enum class Kind { Bar, Line, Histogram };

  Kind kind = Kind::Bar;
  std::vector<std::pair<std::string, int>> series;  // (value label, magnitude)
  std::string title;
  std::string x_label;
  std::string y_label;

  // Throws std::invalid_argument on empty series or duplicate magnitudes.
  void validate() const;

  bool operator==(const ChartSpec&) const = default;
};

const char* chart_kind_name(ChartSpec::Kind k);
ChartSpec::Kind chart_kind_from_name(const std::string& name);

// Recovers the rank permutation (rank[i] = rank of series entry i, 0 = most
// preferred = largest magnitude).
std::vector<int> decode_chart(const ChartSpec& spec);

// Standalone SVG document; byte-identical for identical specs. One labeled
// <g> group per series entry.
std::string render_chart(const ChartSpec& spec);

}  // namespace vldcop
