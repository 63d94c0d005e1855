#pragma once

#include <cstdint>
#include <vector>

#include "vldcop/adapter.hpp"
#include "vldcop/agents.hpp"
#include "vldcop/benchgen.hpp"
#include "vldcop/bus.hpp"
#include "vldcop/nas_types.hpp"
#include "vldcop/runrecord.hpp"

namespace vldcop {

// Interaction interface for one algorithm-simulating agent. Actions execute
// against the shared message bus and the run's public assignment; illegal
// actions yield error observations and leave state unchanged.
class NasEnv {
 public:
  // `public_assignment` is the run-wide assignment the observer scores; the
  // agent itself only learns neighbor values through the bus.
  NasEnv(const VlTask& task, int agent, std::uint64_t seed, double epsilon,
         MessageBus& bus, Assignment& public_assignment);

  Observation reset();
  Observation step(const EnvAction& action);

  // Called by the runner at each synchronous round boundary.
  void begin_round(int iteration);

  const AlgorithmicLog& log() const { return log_; }
  std::vector<EnvActionKind> legal_actions() const;

  bool initialized() const { return initialized_; }
  bool constraints_ready() const { return constraints_ready_; }
  bool sent_this_iteration() const { return sent_; }
  bool read_this_iteration() const { return read_; }
  bool computed_this_iteration() const { return computed_; }
  bool adopted_this_iteration() const { return adopted_; }
  bool terminated() const { return terminated_; }
  int iteration() const { return iteration_; }
  int agent() const { return agent_; }
  double epsilon() const { return epsilon_; }
  std::uint64_t seed() const { return seed_; }
  const VlTask& task() const { return task_; }
  const std::vector<int>& last_best() const { return last_best_; }

 private:
  Observation apply(const EnvAction& action);
  void adopt(const std::vector<int>& values);

  const VlTask& task_;
  int agent_;
  std::uint64_t seed_;
  double epsilon_;
  MessageBus& bus_;
  Assignment& public_;
  Assignment known_;  // own + reported neighbor values
  AlgorithmicLog log_;
  std::vector<int> last_best_;  // per owned variable
  int iteration_ = 0;
  int send_round_ = -1;  // bus round of the last SendAssignment
  bool reset_done_ = false;
  bool initialized_ = false;
  bool constraints_ready_ = false;
  bool sent_ = false, read_ = false, computed_ = false, adopted_ = false;
  bool terminated_ = false;
};

// The deterministic next action a correct FMC-DSA simulator would take from
// this log state; the stochastic branch is resolved from the per-agent
// (seed, agent, iteration) streams, so re-invocation is idempotent and
// closed-loop driving reproduces run_dsa exactly.
EnvAction reference_action(const NasEnv& env);

struct NasRunOptions : AgentRunOptions {
  int steps_per_iteration = 4;   // send, read, compute, adopt
  int budget_factor = 6;         // budget per iteration = factor * steps
};

// A3: each agent's loop queries the policy adapter with the rendered log and
// executes the returned action; per-step correctness vs reference_action is
// recorded.
RunRecord nas_run(const VlTask& task, ModelAdapter& adapter,
                  const NasRunOptions& opt);

struct DecisionAccuracy {
  double overall = 0.0;
  std::vector<double> windows;  // per 10-iteration window
};

DecisionAccuracy decision_accuracy(const RunRecord& record);

}  // namespace vldcop
