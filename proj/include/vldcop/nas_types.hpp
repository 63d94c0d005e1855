#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vldcop {

enum class EnvActionKind {
  InitializeAssignments,
  GenerateConstraints,
  SendAssignment,
  ReadInbox,
  ComputeBestAction,
  AdoptValue,
  AdoptRandom,
  Noop,
  Terminate,
};

const char* env_action_name(EnvActionKind k);
EnvActionKind env_action_from_name(const std::string& name);

struct EnvAction {
  EnvActionKind kind = EnvActionKind::Noop;
  std::map<int, int> values;  // AdoptValue: variable index -> domain index

  bool operator==(const EnvAction&) const = default;
};

std::string format_env_action(const EnvAction& a,
                              const std::vector<std::string>& variables);

struct Observation {
  std::string text;
  bool error = false;
  bool terminal = false;
  std::map<int, int> best_values;  // filled by ComputeBestAction
};

struct LogEntry {
  enum class Kind { Instruction, Action, ObservationEntry };
  Kind kind = Kind::ObservationEntry;
  int iteration = 0;
  std::string text;
  std::optional<EnvAction> action;
};

// Append-only execution log; entry 0 is the initial instruction.
struct AlgorithmicLog {
  std::vector<LogEntry> entries;

  void append(LogEntry e) { entries.push_back(std::move(e)); }

  // Renders the newest entries that fit in max_chars, oldest truncated first
  // (the initial instruction is always kept).
  std::string render(std::size_t max_chars = 8000) const;
};

}  // namespace vldcop
