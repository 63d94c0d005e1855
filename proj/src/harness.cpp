#include "vldcop/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vldcop/agents.hpp"
#include "vldcop/nas.hpp"

namespace vldcop {

using nlohmann::json;

double RunConfig::resolved_epsilon() const {
  if (epsilon >= 0.0) return epsilon;
  if (archetype == "nas" && (adapter.kind == "noisy" || adapter.kind == "remote"))
    return 0.03;
  return 0.1;
}

void RunConfig::validate() const {
  auto one_of = [](const std::string& v, std::initializer_list<const char*> set,
                   const char* what) {
    for (const char* s : set)
      if (v == s) return;
    throw std::invalid_argument(std::string("bad ") + what + ": " + v);
  };
  one_of(benchmark, {"ldgc", "vldgc", "ldms"}, "benchmark");
  one_of(topology, {"random", "scale-free"}, "topology");
  one_of(archetype, {"dsa-oracle", "random", "fmc-dsa", "copa-dsa", "nas"},
         "archetype");
  one_of(adapter.kind, {"scripted", "noisy", "remote"}, "adapter kind");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (benchmark != "ldms" && m < n - 1)
    throw std::invalid_argument("m must allow a connected graph");
  if (domain_size < 2) throw std::invalid_argument("domain size must be >= 2");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (epsilon > 1.0) throw std::invalid_argument("epsilon out of range");
  if (drop < 0.0 || drop > 1.0) throw std::invalid_argument("drop out of range");
  if (max_delay < 0) throw std::invalid_argument("negative delay");
  if (copa_rounds < 1) throw std::invalid_argument("copa rounds must be >= 1");
  if (adapter.noise_p < 0.0 || adapter.noise_p > 1.0)
    throw std::invalid_argument("noise probability out of range");
  if (adapter.retry_budget < 0) throw std::invalid_argument("negative retry budget");
  if (adapter.cost_min > adapter.cost_max)
    throw std::invalid_argument("empty cost range");
}

std::string RunConfig::to_json() const {
  json a{{"kind", adapter.kind},
         {"noise_p", adapter.noise_p},
         {"endpoint", adapter.endpoint},
         {"model", adapter.model},
         {"credentials_env", adapter.credentials_env},
         {"temperature", adapter.temperature},
         {"timeout_ms", adapter.timeout_ms},
         {"retry_budget", adapter.retry_budget},
         {"cost_min", adapter.cost_min},
         {"cost_max", adapter.cost_max},
         {"multimodal", adapter.multimodal},
         {"max_inflight", adapter.max_inflight},
         {"resolve_max", adapter.resolve_max}};
  json j{{"benchmark", benchmark},
         {"topology", topology},
         {"n", n},
         {"m", m},
         {"domain_size", domain_size},
         {"archetype", archetype},
         {"adapter", a},
         {"epsilon", epsilon},
         {"copa_rounds", copa_rounds},
         {"iterations", iterations},
         {"instance_seed", instance_seed},
         {"run_seed", run_seed},
         {"drop", drop},
         {"max_delay", max_delay},
         {"capture", capture},
         {"out_dir", out_dir}};
  return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  RunConfig c;
  c.benchmark = j.value("benchmark", c.benchmark);
  c.topology = j.value("topology", c.topology);
  c.n = j.value("n", c.n);
  c.m = j.value("m", c.m);
  c.domain_size = j.value("domain_size", c.domain_size);
  c.archetype = j.value("archetype", c.archetype);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.copa_rounds = j.value("copa_rounds", c.copa_rounds);
  c.iterations = j.value("iterations", c.iterations);
  c.instance_seed = j.value("instance_seed", c.instance_seed);
  c.run_seed = j.value("run_seed", c.run_seed);
  c.drop = j.value("drop", c.drop);
  c.max_delay = j.value("max_delay", c.max_delay);
  c.capture = j.value("capture", c.capture);
  c.out_dir = j.value("out_dir", c.out_dir);
  if (j.contains("adapter")) {
    const json& a = j["adapter"];
    c.adapter.kind = a.value("kind", c.adapter.kind);
    c.adapter.noise_p = a.value("noise_p", c.adapter.noise_p);
    c.adapter.endpoint = a.value("endpoint", c.adapter.endpoint);
    c.adapter.model = a.value("model", c.adapter.model);
    c.adapter.credentials_env = a.value("credentials_env", c.adapter.credentials_env);
    c.adapter.temperature = a.value("temperature", c.adapter.temperature);
    c.adapter.timeout_ms = a.value("timeout_ms", c.adapter.timeout_ms);
    c.adapter.retry_budget = a.value("retry_budget", c.adapter.retry_budget);
    c.adapter.cost_min = a.value("cost_min", c.adapter.cost_min);
    c.adapter.cost_max = a.value("cost_max", c.adapter.cost_max);
    c.adapter.multimodal = a.value("multimodal", c.adapter.multimodal);
    c.adapter.max_inflight = a.value("max_inflight", c.adapter.max_inflight);
    c.adapter.resolve_max = a.value("resolve_max", c.adapter.resolve_max);
  }
  c.validate();
  return c;
}

namespace {

void snapshot_config(RunRecord& rec, const RunConfig& cfg, const VlTask& task,
                     double eps) {
  rec.benchmark = cfg.benchmark;
  rec.archetype = cfg.archetype;
  rec.topology = cfg.topology;
  if (cfg.archetype == "fmc-dsa" || cfg.archetype == "copa-dsa" ||
      cfg.archetype == "nas") {
    rec.adapter_kind = cfg.adapter.kind;
    rec.noise_p = cfg.adapter.noise_p;
  }
  rec.instance_seed = cfg.instance_seed;
  rec.run_seed = cfg.run_seed;
  rec.epsilon = eps;
  rec.copa_rounds = cfg.copa_rounds;
  rec.iterations = cfg.iterations;
  rec.drop = cfg.drop;
  rec.max_delay = cfg.max_delay;
  rec.n = static_cast<int>(task.instance.agents.size());
  rec.m = static_cast<int>(task.instance.edges.size());
  rec.domain_size = task.instance.domains.empty()
                        ? 0
                        : static_cast<int>(task.instance.domains[0].size());
}

RunRecord trace_record(const VlTask& task, const Trace& trace) {
  RunRecord rec;
  for (std::size_t t = 0; t < trace.assignments.size(); ++t) {
    rec.assignments.push_back(trace.assignments[t]);
    rec.costs.push_back(trace.costs[t]);
    rec.sat.push_back(
        satisfaction(task.instance, trace.assignments[t], task.truth.relation));
  }
  return rec;
}

std::string run_filename(const RunConfig& cfg) {
  std::string adapter = cfg.archetype == "dsa-oracle" || cfg.archetype == "random"
                            ? "none"
                            : cfg.adapter.kind;
  return "run-" + cfg.benchmark + "-" + cfg.archetype + "-" + adapter + "-i" +
         std::to_string(cfg.instance_seed) + "-r" + std::to_string(cfg.run_seed) +
         ".jsonl";
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

RunRecord run_experiment(const RunConfig& cfg) {
  cfg.validate();
  GenOptions gen;
  gen.scale_free = cfg.topology == "scale-free";
  VlTask task = gen_task(cfg.benchmark, cfg.n, cfg.m, cfg.domain_size,
                         cfg.instance_seed, gen);
  const double eps = cfg.resolved_epsilon();

  AdapterConfig acfg = cfg.adapter;
  if (cfg.benchmark == "ldms") {
    // meeting tables can reach V + 2(D-1); widen the advertised range
    const Cost peak = task.truth.violation_weight +
                      2 * (static_cast<Cost>(task.instance.domains[0].size()) - 1);
    acfg.cost_max = std::max(acfg.cost_max, peak);
  }

  RunRecord rec;
  try {
    if (cfg.archetype == "dsa-oracle") {
      rec = trace_record(task,
                         run_dsa(task.instance, eps, cfg.iterations, cfg.run_seed));
    } else if (cfg.archetype == "random") {
      rec = trace_record(task,
                         random_baseline(task.instance, cfg.iterations, cfg.run_seed));
    } else {
      auto adapter = make_adapter(acfg, task, cfg.run_seed);
      AgentRunOptions opt;
      opt.epsilon = eps;
      opt.iterations = cfg.iterations;
      opt.seed = cfg.run_seed;
      opt.drop = cfg.drop;
      opt.max_delay = cfg.max_delay;
      opt.copa_rounds = cfg.copa_rounds;
      opt.capture = cfg.capture;
      opt.cost_min = acfg.cost_min;
      opt.cost_max = acfg.cost_max;
      if (cfg.archetype == "fmc-dsa") {
        rec = fmc_dsa_run(task, *adapter, opt);
      } else if (cfg.archetype == "copa-dsa") {
        rec = copa_dsa_run(task, *adapter, opt);
      } else {
        NasRunOptions nopt;
        static_cast<AgentRunOptions&>(nopt) = opt;
        rec = nas_run(task, *adapter, nopt);
      }
    }
  } catch (const std::exception&) {
    rec.failed = true;
  }
  snapshot_config(rec, cfg, task, eps);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_atomic((std::filesystem::path(cfg.out_dir) / run_filename(cfg)).string(),
                 serialize_run(rec));
  }
  return rec;
}

MetricsSummary metrics(const RunRecord& record) {
  if (record.costs.size() < 2)
    throw std::invalid_argument("record needs at least two iterations");
  const std::size_t len = record.costs.size();
  const std::size_t t = len - 1;               // iterations past the initial point
  const std::size_t window = (t + 1) / 2;      // ceil(T/2) trailing points

  MetricsSummary s;
  double cost_sum = 0.0, sat_sum = 0.0;
  for (std::size_t i = len - window; i < len; ++i) {
    cost_sum += static_cast<double>(record.costs[i]);
    sat_sum += record.sat[i];
  }
  s.mean_cost = cost_sum / window;
  s.sat = sat_sum / window;
  s.anytime_cost = static_cast<double>(
      *std::min_element(record.costs.begin(), record.costs.end()));
  s.anytime_sat = *std::max_element(record.sat.begin(), record.sat.end());
  for (const auto& [key, count] : record.queries) s.total_queries += count;
  s.queries_per_agent =
      record.n > 0 ? static_cast<double>(s.total_queries) / record.n : 0.0;
  s.fallbacks = record.fallbacks;
  s.runtime_seconds = record.wall_seconds;
  return s;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no records");
  for (const auto& r : records)
    if (r.benchmark != records[0].benchmark)
      throw std::invalid_argument("records mix benchmark kinds");

  struct Bucket {
    std::vector<MetricsSummary> ms;
  };
  std::vector<std::pair<std::pair<std::string, std::string>, Bucket>> groups;
  for (const auto& r : records) {
    std::pair<std::string, std::string> key{
        r.archetype, r.adapter_kind.empty() ? "-" : r.adapter_kind};
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == key; });
    if (it == groups.end()) {
      groups.push_back({key, {}});
      it = groups.end() - 1;
    }
    it->second.ms.push_back(metrics(r));
  }

  auto mean_std = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(var / xs.size())};
  };

  std::vector<AggregateRow> rows;
  for (const auto& [key, bucket] : groups) {
    AggregateRow row;
    row.archetype = key.first;
    row.adapter = key.second;
    row.runs = static_cast<int>(bucket.ms.size());
    std::vector<double> cost, anytime, sat, asat;
    for (const auto& m : bucket.ms) {
      cost.push_back(m.mean_cost);
      anytime.push_back(m.anytime_cost);
      sat.push_back(m.sat);
      asat.push_back(m.anytime_sat);
    }
    std::tie(row.cost_mean, row.cost_std) = mean_std(cost);
    std::tie(row.anytime_mean, row.anytime_std) = mean_std(anytime);
    std::tie(row.sat_mean, row.sat_std) = mean_std(sat);
    std::tie(row.anytime_sat_mean, row.anytime_sat_std) = mean_std(asat);
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string fmt(double x, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

}  // namespace

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "archetype,adapter,runs,cost,cost_std,anytime,anytime_std,sat,sat_std,"
         "anytime_sat,anytime_sat_std\n";
  for (const auto& r : rows)
    out << r.archetype << "," << r.adapter << "," << r.runs << ","
        << fmt(r.cost_mean) << "," << fmt(r.cost_std) << ","
        << fmt(r.anytime_mean) << "," << fmt(r.anytime_std) << ","
        << fmt(r.sat_mean, 3) << "," << fmt(r.sat_std, 3) << ","
        << fmt(r.anytime_sat_mean, 3) << "," << fmt(r.anytime_sat_std, 3) << "\n";
  return out.str();
}

std::string aggregate_text(const std::vector<AggregateRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"archetype", "adapter", "runs", "cost", "anytime", "sat",
                   "anytime-sat"});
  for (const auto& r : rows)
    cells.push_back({r.archetype, r.adapter, std::to_string(r.runs),
                     fmt(r.cost_mean) + " +- " + fmt(r.cost_std),
                     fmt(r.anytime_mean) + " +- " + fmt(r.anytime_std),
                     fmt(r.sat_mean, 3) + " +- " + fmt(r.sat_std, 3),
                     fmt(r.anytime_sat_mean, 3) + " +- " + fmt(r.anytime_sat_std, 3)});
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c] << std::string(width[c] - row[c].size(), ' ');
      out << (c + 1 == row.size() ? "" : "  ");
    }
    out << "\n";
  }
  return out.str();
}

std::string serialize_run(const RunRecord& r) {
  std::ostringstream out;
  json header{{"record", "header"},
              {"schema_version", 1},
              {"benchmark", r.benchmark},
              {"archetype", r.archetype},
              {"topology", r.topology},
              {"adapter_kind", r.adapter_kind},
              {"noise_p", r.noise_p},
              {"instance_seed", r.instance_seed},
              {"run_seed", r.run_seed},
              {"epsilon", r.epsilon},
              {"copa_rounds", r.copa_rounds},
              {"iterations", r.iterations},
              {"drop", r.drop},
              {"max_delay", r.max_delay},
              {"n", r.n},
              {"m", r.m},
              {"domain_size", r.domain_size}};
  out << header.dump() << "\n";
  for (std::size_t t = 0; t < r.costs.size(); ++t) {
    json line{{"record", "iter"},
              {"t", t},
              {"values", r.assignments[t].values},
              {"cost", r.costs[t]},
              {"sat", r.sat[t]}};
    if (t < r.agent_costs.size()) line["agent_cost"] = r.agent_costs[t];
    out << line.dump() << "\n";
  }
  for (const auto& s : r.steps)
    out << json{{"record", "step"},
                {"agent", s.agent},
                {"iteration", s.iteration},
                {"taken", s.taken},
                {"reference", s.reference},
                {"match", s.match}}
               .dump()
        << "\n";
  for (const auto& p : r.pairs)
    out << json{{"record", "pair"},
                {"agent", p.agent},
                {"iteration", p.iteration},
                {"kind", p.kind},
                {"prompt", p.prompt},
                {"decision", p.decision}}
               .dump()
        << "\n";
  json queries = json::array();
  for (const auto& [key, count] : r.queries)
    queries.push_back({key.first, key.second, count});
  out << json{{"record", "summary"},
              {"queries", queries},
              {"fallbacks", r.fallbacks},
              {"bus_sent", r.bus_sent},
              {"bus_delivered", r.bus_delivered},
              {"bus_dropped", r.bus_dropped},
              {"truncated", r.truncated},
              {"failed", r.failed}}
             .dump()
      << "\n";
  return out.str();
}

RunRecord parse_run(const std::string& text) {
  RunRecord r;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false, summary_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    const std::string kind = j.at("record");
    if (kind == "header") {
      if (j.at("schema_version").get<int>() != 1)
        throw std::invalid_argument("unsupported run-log schema");
      r.benchmark = j.at("benchmark");
      r.archetype = j.at("archetype");
      r.topology = j.at("topology");
      r.adapter_kind = j.at("adapter_kind");
      r.noise_p = j.at("noise_p");
      r.instance_seed = j.at("instance_seed");
      r.run_seed = j.at("run_seed");
      r.epsilon = j.at("epsilon");
      r.copa_rounds = j.at("copa_rounds");
      r.iterations = j.at("iterations");
      r.drop = j.at("drop");
      r.max_delay = j.at("max_delay");
      r.n = j.at("n");
      r.m = j.at("m");
      r.domain_size = j.at("domain_size");
      header_seen = true;
    } else if (kind == "iter") {
      Assignment a;
      a.values = j.at("values").get<std::vector<int>>();
      r.assignments.push_back(std::move(a));
      r.costs.push_back(j.at("cost").get<Cost>());
      r.sat.push_back(j.at("sat").get<double>());
      if (j.contains("agent_cost"))
        r.agent_costs.push_back(j.at("agent_cost").get<Cost>());
    } else if (kind == "step") {
      r.steps.push_back({j.at("agent"), j.at("iteration"), j.at("taken"),
                         j.at("reference"), j.at("match")});
    } else if (kind == "pair") {
      r.pairs.push_back({j.at("agent"), j.at("iteration"), j.at("kind"),
                         j.at("prompt"), j.at("decision")});
    } else if (kind == "summary") {
      for (const auto& q : j.at("queries"))
        r.queries[{q[0].get<int>(), q[1].get<int>()}] = q[2].get<long>();
      r.fallbacks = j.at("fallbacks");
      r.bus_sent = j.at("bus_sent");
      r.bus_delivered = j.at("bus_delivered");
      r.bus_dropped = j.at("bus_dropped");
      r.truncated = j.at("truncated");
      r.failed = j.at("failed");
      summary_seen = true;
    } else {
      throw std::invalid_argument("unknown run-log record: " + kind);
    }
  }
  if (!header_seen || !summary_seen)
    throw std::invalid_argument("run log missing header or summary");
  return r;
}

void save_run(const RunRecord& record, const std::string& path) {
  write_atomic(path, serialize_run(record));
}

RunRecord load_run(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run(buf.str());
}

long export_distill(const std::vector<RunRecord>& records,
                    const std::vector<std::string>& kinds, long budget,
                    const std::string& path) {
  std::vector<const CapturedPair*> selected;
  for (const auto& r : records)
    for (const auto& p : r.pairs)
      if (kinds.empty() ||
          std::find(kinds.begin(), kinds.end(), p.kind) != kinds.end())
        selected.push_back(&p);
  if (selected.empty()) throw std::invalid_argument("no captured prompts");
  if (budget > 0 && static_cast<long>(selected.size()) < budget)
    throw std::invalid_argument(
        "only " + std::to_string(selected.size()) + " pairs available, need " +
        std::to_string(budget));
  const long count =
      budget > 0 ? budget : static_cast<long>(selected.size());

  std::ostringstream out;
  for (long i = 0; i < count; ++i) {
    const CapturedPair& p = *selected[i];
    out << json{{"prompt", p.prompt},
                {"decision", p.decision},
                {"kind", p.kind},
                {"agent", p.agent},
                {"iteration", p.iteration}}
               .dump()
        << "\n";
  }
  write_atomic(path, out.str());
  return count;
}

void report(const std::vector<RunRecord>& records, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<AggregateRow> rows = aggregate(records);
  const std::filesystem::path dir(out_dir);
  write_atomic((dir / "aggregate.csv").string(), aggregate_csv(rows));
  write_atomic((dir / "aggregate.txt").string(), aggregate_text(rows));

  // mean cost per iteration per (archetype, adapter) group, as polylines
  std::vector<std::pair<std::string, std::vector<double>>> curves;
  for (const auto& row : rows) {
    std::vector<double> sum;
    int count = 0;
    for (const auto& r : records) {
      if (r.archetype != row.archetype ||
          (r.adapter_kind.empty() ? "-" : r.adapter_kind) != row.adapter)
        continue;
      if (sum.empty()) sum.resize(r.costs.size(), 0.0);
      const std::size_t len = std::min(sum.size(), r.costs.size());
      sum.resize(len);
      for (std::size_t t = 0; t < len; ++t)
        sum[t] += static_cast<double>(r.costs[t]);
      ++count;
    }
    for (double& x : sum) x /= count;
    curves.push_back({row.archetype + "/" + row.adapter, std::move(sum)});
  }

  double peak = 1.0;
  std::size_t maxlen = 2;
  for (const auto& [label, ys] : curves) {
    maxlen = std::max(maxlen, ys.size());
    for (double y : ys) peak = std::max(peak, y);
  }
  const int w = 640, h = 400, pad = 40;
  static const char* kStroke[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n";
  svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad
      << "\" y2=\"" << h - pad << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad
      << "\" y2=\"" << h - pad << "\" stroke=\"black\"/>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& ys = curves[c].second;
    svg << "<polyline fill=\"none\" stroke=\"" << kStroke[c % 8]
        << "\" points=\"";
    for (std::size_t t = 0; t < ys.size(); ++t) {
      const double x = pad + (w - 2.0 * pad) * t / (maxlen - 1);
      const double y = h - pad - (h - 2.0 * pad) * ys[t] / peak;
      svg << fmt(x, 1) << "," << fmt(y, 1) << " ";
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << w - pad + 4 << "\" y=\"" << pad + 16 * (c + 1)
        << "\" font-size=\"10\" fill=\"" << kStroke[c % 8] << "\">"
        << curves[c].first << "</text>\n";
  }
  svg << "<text x=\"" << w / 2 << "\" y=\"" << h - 8
      << "\" font-size=\"12\" text-anchor=\"middle\">iteration</text>\n";
  svg << "<text x=\"12\" y=\"" << h / 2
      << "\" font-size=\"12\" transform=\"rotate(-90 12," << h / 2
      << ")\" text-anchor=\"middle\">global cost</text>\n";
  svg << "</svg>\n";
  write_atomic((dir / "cost_curves.svg").string(), svg.str());
}

}  // namespace vldcop
