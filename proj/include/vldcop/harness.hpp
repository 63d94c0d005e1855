#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vldcop/adapter.hpp"
#include "vldcop/benchgen.hpp"
#include "vldcop/runrecord.hpp"

namespace vldcop {

struct RunConfig {
  std::string benchmark = "ldgc";
  std::string topology = "random";  // random | scale-free
  int n = 10;
  int m = 23;
  int domain_size = 4;
  std::string archetype = "dsa-oracle";  // dsa-oracle | random | fmc-dsa | copa-dsa | nas
  AdapterConfig adapter;
  double epsilon = -1.0;  // <0: resolved by default rules
  int copa_rounds = 2;
  int iterations = 50;
  std::uint64_t instance_seed = 0;
  std::uint64_t run_seed = 0;
  double drop = 0.0;
  int max_delay = 0;
  bool capture = false;
  std::string out_dir;

  // Epsilon after defaulting: 0.03 for nas with a fallible adapter, 0.1
  // otherwise.
  double resolved_epsilon() const;

  void validate() const;
  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
};

// Generates the task from the instance seed, dispatches to the archetype
// runner, and (when out_dir is set) writes the run log atomically.
RunRecord run_experiment(const RunConfig& cfg);

struct MetricsSummary {
  double mean_cost = 0.0;      // over the trailing half of the iterations
  double anytime_cost = 0.0;   // best cost over all iterations
  double sat = 0.0;            // trailing-half mean satisfaction
  double anytime_sat = 0.0;    // best satisfaction over all iterations
  long total_queries = 0;
  double queries_per_agent = 0.0;
  long fallbacks = 0;
  double runtime_seconds = 0.0;
};

// Trailing window = exactly the last ceil(T/2) iteration points, T =
// iterations excluding the initial assignment.
MetricsSummary metrics(const RunRecord& record);

struct AggregateRow {
  std::string archetype;
  std::string adapter;  // adapter kind, "-" for symbolic baselines
  int runs = 0;
  double cost_mean = 0.0, cost_std = 0.0;
  double anytime_mean = 0.0, anytime_std = 0.0;
  double sat_mean = 0.0, sat_std = 0.0;
  double anytime_sat_mean = 0.0, anytime_sat_std = 0.0;
};

// One row per (archetype, adapter) pair, ordered by first appearance.
// Throws if the records mix benchmark kinds.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

std::string aggregate_csv(const std::vector<AggregateRow>& rows);
std::string aggregate_text(const std::vector<AggregateRow>& rows);

// Line-delimited run log: header record with the config snapshot, one record
// per iteration, then steps, captured pairs, and a summary record. Wall-clock
// time is deliberately not serialized so logs are reproducible.
std::string serialize_run(const RunRecord& record);
RunRecord parse_run(const std::string& text);

void save_run(const RunRecord& record, const std::string& path);
RunRecord load_run(const std::string& path);

// Writes up to `budget` captured (prompt, decision) pairs as line-delimited
// records; budget 0 means all. Throws if fewer than `budget` pairs are
// available or no records carry captures. Returns the count written.
long export_distill(const std::vector<RunRecord>& records,
                    const std::vector<std::string>& kinds, long budget,
                    const std::string& path);

// Aggregate table (CSV + text) and mean cost curves as an SVG, all
// deterministic for fixed inputs.
void report(const std::vector<RunRecord>& records, const std::string& out_dir);

}  // namespace vldcop
