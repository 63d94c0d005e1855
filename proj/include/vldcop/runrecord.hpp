#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vldcop/dcop.hpp"

namespace vldcop {

struct NasStepRecord {
  int agent = -1;
  int iteration = 0;
  std::string taken;
  std::string reference;
  bool match = false;
};

// One captured (prompt, ground-truth decision) pair for distillation export.
struct CapturedPair {
  int agent = -1;
  int iteration = 0;
  std::string kind;
  std::string prompt;
  std::string decision;
};

struct RunRecord {
  // config snapshot
  std::string benchmark;
  std::string archetype;
  std::string topology = "random";
  std::string adapter_kind;
  double noise_p = 0.0;
  std::uint64_t instance_seed = 0;
  std::uint64_t run_seed = 0;
  double epsilon = 0.1;
  int copa_rounds = 2;
  int iterations = 0;
  double drop = 0.0;
  int max_delay = 0;
  int n = 0, m = 0, domain_size = 0;

  // per-iteration series, index 0 = initial assignment
  std::vector<Assignment> assignments;
  std::vector<Cost> costs;        // observer-visible, oracle tables
  std::vector<double> sat;
  std::vector<Cost> agent_costs;  // agent-visible (consensus tables), copa only

  std::map<std::pair<int, int>, long> queries;  // (agent, TaskKind as int)
  long fallbacks = 0;
  long bus_sent = 0, bus_delivered = 0, bus_dropped = 0;

  std::vector<NasStepRecord> steps;  // nas only
  std::vector<CapturedPair> pairs;   // when prompt capture is enabled

  bool truncated = false;
  bool failed = false;
  double wall_seconds = 0.0;  // never serialized; logs must be reproducible
};

}  // namespace vldcop
