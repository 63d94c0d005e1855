#pragma once

#include <cstdint>
#include <vector>

#include "vldcop/adapter.hpp"
#include "vldcop/benchgen.hpp"
#include "vldcop/bus.hpp"
#include "vldcop/runrecord.hpp"

namespace vldcop {

struct AgentRunOptions {
  double epsilon = 0.1;
  int iterations = 50;
  std::uint64_t seed = 0;
  double drop = 0.0;
  int max_delay = 0;
  int copa_rounds = 2;
  bool capture = false;
  Cost cost_min = 0;
  Cost cost_max = 20;
};

// A1: constraint generation and best-action selection delegated to the
// adapter, the epsilon branch executed by symbolic agent code. With the
// scripted adapter the trajectory is identical to run_dsa under matched
// streams.
RunRecord fmc_dsa_run(const VlTask& task, ModelAdapter& adapter,
                      const AgentRunOptions& opt);

// A2 negotiation: per edge between distinct owners, both endpoints propose
// tables for `rounds` rounds, then a Resolve call merges the final pair. The
// consensus table (per edge, oriented by the edge scope) is shared by both
// endpoints. Same-owner edges need no negotiation and use the owner's exact
// table.
std::vector<CostTable> copa_negotiate(const VlTask& task, ModelAdapter& adapter,
                                      const AgentRunOptions& opt,
                                      std::vector<CapturedPair>* pairs = nullptr);

// A2: copa_negotiate, then classical DSA over the consensus tables. Records
// both observer (oracle-table) and agent-visible (consensus-table) costs.
RunRecord copa_dsa_run(const VlTask& task, ModelAdapter& adapter,
                       const AgentRunOptions& opt);

}  // namespace vldcop
