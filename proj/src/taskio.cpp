#include "vldcop/taskio.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vldcop {

std::string escape_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') out += "\\\\";
    else if (c == '\n') out += "\\n";
    else if (c == '|') out += "\\p";
    else out += c;
  }
  return out;
}

std::string unescape_text(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      char n = s[++i];
      if (n == 'n') out += '\n';
      else if (n == 'p') out += '|';
      else out += n;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string serialize_task(const VlTask& task) {
  const DcopInstance& inst = task.instance;
  std::ostringstream out;
  out << "schema_version 1\n";
  out << "benchmark " << task.benchmark << "\n";
  out << "seed " << task.seed << "\n";
  out << "\n[network]\n";
  for (const auto& a : inst.agents) out << "agent " << a << "\n";
  for (std::size_t v = 0; v < inst.variables.size(); ++v) {
    out << "var " << inst.variables[v] << " " << inst.agents[inst.owner[v]];
    for (const auto& d : inst.domains[v]) out << " " << d;
    out << "\n";
  }
  for (auto [i, j] : inst.edges)
    out << "edge " << inst.variables[i] << " " << inst.variables[j] << "\n";
  for (std::size_t v = 0; v < task.participants.size(); ++v) {
    out << "participants " << inst.variables[v];
    for (int p : task.participants[v]) out << " " << inst.agents[p];
    out << "\n";
  }
  out << "\n[ground_truth]\n";
  out << "violation_weight " << task.truth.violation_weight << "\n";
  for (std::size_t v = 0; v < task.truth.rank.size(); ++v) {
    out << "rank " << inst.variables[v];
    for (int r : task.truth.rank[v]) out << " " << r;
    out << "\n";
  }
  for (std::size_t e = 0; e < inst.edges.size(); ++e)
    out << "relation " << inst.variables[inst.edges[e].first] << " "
        << inst.variables[inst.edges[e].second] << " "
        << relation_name(task.truth.relation[e]) << "\n";
  out << "\n[tables]\n";
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    out << "table " << inst.variables[inst.edges[e].first] << " "
        << inst.variables[inst.edges[e].second] << "\n";
    const CostTable& t = inst.tables[e];
    for (int a = 0; a < t.rows; ++a) {
      for (int b = 0; b < t.cols; ++b) {
        if (b) out << " ";
        out << t.at(a, b);
      }
      out << "\n";
    }
  }
  out << "\n[instructions]\n";
  for (std::size_t a = 0; a < task.instructions.size(); ++a) {
    const InstructionDoc& doc = task.instructions[a];
    out << "instruction " << inst.agents[a] << " " << escape_text(doc.text) << "\n";
    if (doc.chart) {
      out << "chart " << inst.agents[a] << " " << chart_kind_name(doc.chart->kind)
          << "|" << escape_text(doc.chart->title) << "|"
          << escape_text(doc.chart->x_label) << "|"
          << escape_text(doc.chart->y_label) << "|";
      for (std::size_t i = 0; i < doc.chart->series.size(); ++i) {
        if (i) out << ",";
        out << escape_text(doc.chart->series[i].first) << ":"
            << doc.chart->series[i].second;
      }
      out << "\n";
    }
    if (doc.machine_block)
      out << "machine_block " << inst.agents[a] << " "
          << escape_text(*doc.machine_block) << "\n";
  }
  return out.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

VlTask parse_task(const std::string& text) {
  VlTask task;
  DcopInstance& inst = task.instance;
  std::map<std::string, int> agent_index, var_index;
  std::vector<std::tuple<int, int, CostTable>> pending_tables;
  CostTable* open_table = nullptr;
  int open_rows_left = 0;

  std::istringstream ss(text);
  std::string line, section;
  bool saw_version = false;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line;
      open_table = nullptr;
      continue;
    }
    if (open_table && open_rows_left > 0) {
      auto nums = split_ws(line);
      if (static_cast<int>(nums.size()) != open_table->cols)
        throw std::runtime_error("table row width mismatch");
      const int row = open_table->rows - open_rows_left;
      for (int b = 0; b < open_table->cols; ++b)
        open_table->at(row, b) = std::stoll(nums[b]);
      if (--open_rows_left == 0) open_table = nullptr;
      continue;
    }
    auto sp = line.find(' ');
    std::string key = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);

    if (key == "schema_version") {
      if (rest != "1") throw std::runtime_error("unsupported schema_version " + rest);
      saw_version = true;
    } else if (key == "benchmark") {
      task.benchmark = rest;
    } else if (key == "seed") {
      task.seed = std::stoull(rest);
    } else if (key == "agent") {
      agent_index[rest] = static_cast<int>(inst.agents.size());
      inst.agents.push_back(rest);
    } else if (key == "var") {
      auto toks = split_ws(rest);
      if (toks.size() < 3) throw std::runtime_error("bad var line");
      var_index[toks[0]] = static_cast<int>(inst.variables.size());
      inst.variables.push_back(toks[0]);
      inst.owner.push_back(agent_index.at(toks[1]));
      inst.domains.emplace_back(toks.begin() + 2, toks.end());
    } else if (key == "edge") {
      auto toks = split_ws(rest);
      inst.edges.emplace_back(var_index.at(toks[0]), var_index.at(toks[1]));
    } else if (key == "participants") {
      auto toks = split_ws(rest);
      const int v = var_index.at(toks[0]);
      if (static_cast<int>(task.participants.size()) <= v)
        task.participants.resize(v + 1);
      for (std::size_t i = 1; i < toks.size(); ++i)
        task.participants[v].push_back(agent_index.at(toks[i]));
    } else if (key == "violation_weight") {
      task.truth.violation_weight = std::stoll(rest);
    } else if (key == "rank") {
      auto toks = split_ws(rest);
      const int v = var_index.at(toks[0]);
      if (static_cast<int>(task.truth.rank.size()) <= v)
        task.truth.rank.resize(inst.variables.size());
      for (std::size_t i = 1; i < toks.size(); ++i)
        task.truth.rank[v].push_back(std::stoi(toks[i]));
    } else if (key == "relation") {
      auto toks = split_ws(rest);
      task.truth.relation.push_back(relation_from_name(toks[2]));
    } else if (key == "table") {
      auto toks = split_ws(rest);
      const int i = var_index.at(toks[0]);
      const int j = var_index.at(toks[1]);
      inst.tables.emplace_back(static_cast<int>(inst.domains[i].size()),
                               static_cast<int>(inst.domains[j].size()));
      open_table = &inst.tables.back();
      open_rows_left = open_table->rows;
    } else if (key == "instruction") {
      auto sp2 = rest.find(' ');
      const int a = agent_index.at(rest.substr(0, sp2));
      if (static_cast<int>(task.instructions.size()) <= a)
        task.instructions.resize(inst.agents.size());
      task.instructions[a].text = unescape_text(rest.substr(sp2 + 1));
    } else if (key == "chart") {
      auto sp2 = rest.find(' ');
      const int a = agent_index.at(rest.substr(0, sp2));
      if (static_cast<int>(task.instructions.size()) <= a)
        task.instructions.resize(inst.agents.size());
      auto fields = split_on(rest.substr(sp2 + 1), '|');
      if (fields.size() != 5) throw std::runtime_error("bad chart line");
      ChartSpec spec;
      spec.kind = chart_kind_from_name(fields[0]);
      spec.title = unescape_text(fields[1]);
      spec.x_label = unescape_text(fields[2]);
      spec.y_label = unescape_text(fields[3]);
      for (const auto& entry : split_on(fields[4], ',')) {
        auto colon = entry.rfind(':');
        if (colon == std::string::npos) throw std::runtime_error("bad chart series");
        spec.series.emplace_back(unescape_text(entry.substr(0, colon)),
                                 std::stoi(entry.substr(colon + 1)));
      }
      spec.validate();
      task.instructions[a].chart = std::move(spec);
    } else if (key == "machine_block") {
      auto sp2 = rest.find(' ');
      const int a = agent_index.at(rest.substr(0, sp2));
      if (static_cast<int>(task.instructions.size()) <= a)
        task.instructions.resize(inst.agents.size());
      task.instructions[a].machine_block = unescape_text(rest.substr(sp2 + 1));
    } else {
      throw std::runtime_error("unknown task line: " + key);
    }
  }
  if (!saw_version) throw std::runtime_error("missing schema_version");
  if (task.instructions.size() < inst.agents.size())
    task.instructions.resize(inst.agents.size());
  inst.finalize();
  return task;
}

void save_task(const VlTask& task, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_task(task);
}

VlTask load_task(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_task(buf.str());
}

void validate_task(const VlTask& task) {
  const DcopInstance& inst = task.instance;
  if (task.instructions.size() != inst.agents.size())
    throw std::runtime_error("instruction count mismatch");

  // oracle-table consistency
  for (std::size_t e = 0; e < inst.edges.size(); ++e)
    if (oracle_table(task.truth, inst.edges, static_cast<int>(e)) != inst.tables[e])
      throw std::runtime_error("tables do not match ground truth on edge " +
                               std::to_string(e));

  // violation dominance: V must exceed the maximum preference sum
  for (std::size_t v = 0; v < inst.domains.size(); ++v) {
    const Cost max_pref = 2 * (static_cast<Cost>(inst.domains[v].size()) - 1);
    if (task.truth.violation_weight <= max_pref)
      throw std::runtime_error("violation weight does not dominate preferences");
  }

  for (std::size_t a = 0; a < inst.agents.size(); ++a) {
    const InstructionDoc& doc = task.instructions[a];
    bool has_edge = false;
    for (int v : inst.owned[a])
      if (!inst.incident[v].empty()) has_edge = true;
    if (has_edge && doc.text.empty())
      throw std::runtime_error("agent " + inst.agents[a] + " has empty instruction");
    if (doc.machine_block) {
      if (parse_machine_block(*doc.machine_block) !=
          local_ground_truth(task, static_cast<int>(a)))
        throw std::runtime_error("machine block mismatch for " + inst.agents[a]);
    }
    if (doc.chart) {
      const std::vector<int> decoded = decode_chart(*doc.chart);
      if (inst.owned[a].size() != 1)
        throw std::runtime_error("chart on multi-variable agent");
      if (decoded != task.truth.rank[inst.owned[a][0]])
        throw std::runtime_error("chart does not decode to rank permutation");
    }
  }

  // ranks are permutations
  for (const auto& ranks : task.truth.rank) {
    std::vector<char> seen(ranks.size(), 0);
    for (int r : ranks) {
      if (r < 0 || r >= static_cast<int>(ranks.size()) || seen[r])
        throw std::runtime_error("rank is not a permutation");
      seen[r] = 1;
    }
  }
}

}  // namespace vldcop
