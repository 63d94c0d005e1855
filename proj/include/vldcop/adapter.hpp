#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vldcop/benchgen.hpp"
#include "vldcop/dcop.hpp"
#include "vldcop/nas_types.hpp"

namespace vldcop {

enum class TaskKind { GenerateConstraint, GetMaxAction, Resolve, GetAction };

const char* task_kind_name(TaskKind k);
TaskKind task_kind_from_name(const std::string& name);

struct Prompt {
  TaskKind kind = TaskKind::GetMaxAction;
  std::string system;
  std::string user;
  // Visual input: the rendered chart travels as an image part when the
  // endpoint is multimodal, otherwise its data table is inlined as text and
  // the query is flagged "text-fallback visual".
  std::string image_svg;
  bool text_fallback_visual = false;

  std::string full_text() const { return system + "\n\n" + user; }
};

struct ModelDecision {
  TaskKind kind = TaskKind::GetMaxAction;
  std::string constraint_text;           // GenerateConstraint
  std::optional<CostTable> table;        // GenerateConstraint (CoPA) / Resolve
  std::vector<int> values;               // GetMaxAction, per ctx variable
  EnvAction action;                      // GetAction
  std::string raw;
  int attempts = 1;
  bool fallback = false;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything a prompt builder or oracle needs about one model call.
struct QueryContext {
  TaskKind kind = TaskKind::GetMaxAction;
  int agent = -1;
  const VlTask* task = nullptr;

  // GetMaxAction
  std::vector<int> variables;  // owned variables, ascending
  Assignment context;          // latest known values, -1 unknown
  std::vector<std::string> observations;  // O: received preference messages

  // GenerateConstraint / Resolve
  int edge = -1;               // target edge, -1 for FMC preference messages
  int neighbor_agent = -1;     // FMC message recipient
  const CostTable* proposal_own = nullptr;
  const CostTable* proposal_other = nullptr;
  int negotiation_round = 0;

  // GetAction
  const AlgorithmicLog* log = nullptr;
  EnvAction reference;                       // ground-truth next action
  std::vector<EnvActionKind> legal_actions;  // legal alternatives in this state

  Cost cost_min = 0;
  Cost cost_max = 20;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  int iteration = 0;
};

struct AdapterConfig {
  std::string kind = "scripted";  // scripted | noisy | remote
  double noise_p = 0.0;
  std::string endpoint;
  std::string model;
  std::string credentials_env = "VLDCOP_API_KEY";
  double temperature = 0.0;
  int timeout_ms = 30000;
  int retry_budget = 3;
  Cost cost_min = 0;
  Cost cost_max = 20;
  bool multimodal = false;
  int max_inflight = 4;
  bool resolve_max = false;  // Resolve heuristic: element-wise max instead of average
  std::size_t prompt_char_cap = 8000;
};

Prompt build_prompt(TaskKind kind, const QueryContext& ctx,
                    const AdapterConfig& cfg = {});

// Extracts the fenced answer block from raw model output and validates it
// against the context. Throws ParseError with a reason usable as retry
// feedback.
ModelDecision parse_decision(TaskKind kind, const std::string& raw,
                             const QueryContext& ctx);

class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;

  // Counts exactly one query per call, keyed by (agent, kind), then defers to
  // the implementation.
  ModelDecision query(const Prompt& prompt, const QueryContext& ctx);

  long query_count(int agent, TaskKind kind) const;
  long query_count(int agent) const;
  long total_queries() const;
  long fallback_count() const;
  virtual bool deterministic() const { return true; }

 protected:
  virtual ModelDecision do_query(const Prompt& prompt, const QueryContext& ctx) = 0;
  void note_fallback();

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<int, TaskKind>, long> counters_;
  long fallbacks_ = 0;
};

// Deterministic ground-truth policy; answers from the task's hidden ground
// truth, enabling exact oracle-equivalence tests.
class ScriptedOracle : public ModelAdapter {
 public:
  explicit ScriptedOracle(const VlTask& task, const AdapterConfig& cfg = {});

  // The scripted behavior, also used by other adapters to know the correct
  // answer without double-counting a query.
  ModelDecision oracle_decision(const QueryContext& ctx) const;

 protected:
  ModelDecision do_query(const Prompt& prompt, const QueryContext& ctx) override;

 private:
  const VlTask& task_;
  AdapterConfig cfg_;
};

// Returns the scripted decision with probability 1-p, otherwise a uniformly
// random valid wrong decision.
class NoisyOracle : public ModelAdapter {
 public:
  NoisyOracle(const VlTask& task, double p, std::uint64_t seed,
              const AdapterConfig& cfg = {});

 protected:
  ModelDecision do_query(const Prompt& prompt, const QueryContext& ctx) override;

 private:
  ScriptedOracle scripted_;
  AdapterConfig cfg_;
  double p_;
  std::uint64_t seed_;
  std::map<int, std::uint64_t> call_index_;  // per agent
  std::mutex mutex_;
};

// Canonical fenced-block answer body for a decision; what a perfectly
// compliant model would have written. Used for distillation export.
std::string decision_answer_text(const ModelDecision& d, const QueryContext& ctx);

// Valid-by-construction fallback used when a remote model cannot be parsed.
ModelDecision fallback_decision(const QueryContext& ctx, std::uint64_t seed,
                                std::uint64_t call_index, bool resolve_max);

std::unique_ptr<ModelAdapter> make_adapter(const AdapterConfig& cfg,
                                           const VlTask& task,
                                           std::uint64_t seed);

}  // namespace vldcop
