#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vldcop/rng.hpp"

namespace vldcop {

// All benchmark tables are integer-valued; keeping costs integral avoids
// floating-point nondeterminism across platforms.
using Cost = long long;

enum class Relation { Avoid, Match, NotEqual };

const char* relation_name(Relation r);
Relation relation_from_name(const std::string& name);

// Joint cost over an ordered variable pair. Lookup is orientation-aware:
// callers holding the reversed scope index with swapped coordinates.
struct CostTable {
  int rows = 0;
  int cols = 0;
  std::vector<Cost> costs;  // row-major

  CostTable() = default;
  CostTable(int r, int c, Cost fill = 0)
      : rows(r), cols(c), costs(static_cast<std::size_t>(r) * c, fill) {}

  Cost& at(int a, int b) { return costs[static_cast<std::size_t>(a) * cols + b]; }
  Cost at(int a, int b) const {
    return costs[static_cast<std::size_t>(a) * cols + b];
  }

  bool operator==(const CostTable&) const = default;
};

struct DcopInstance {
  std::vector<std::string> agents;
  std::vector<std::string> variables;
  std::vector<int> owner;                         // variable -> agent index
  std::vector<std::vector<std::string>> domains;  // variable -> value labels
  std::vector<std::pair<int, int>> edges;         // variable pairs, first < second
  std::vector<CostTable> tables;                  // parallel to edges

  // Derived by finalize().
  std::vector<std::vector<int>> incident;   // variable -> incident edge indices
  std::vector<std::vector<int>> owned;      // agent -> owned variables, ascending
  std::vector<std::vector<int>> agent_adj;  // agent -> neighboring agents, ascending

  int other_end(int edge, int v) const {
    return edges[edge].first == v ? edges[edge].second : edges[edge].first;
  }

  // Cost of edge `e` with variable `v` at `value` and its counterpart at
  // `other_value`, regardless of scope orientation.
  Cost edge_cost(int e, int v, int value, int other_value) const {
    return edges[e].first == v ? tables[e].at(value, other_value)
                               : tables[e].at(other_value, value);
  }

  // Validates all invariants and builds the derived adjacency structures.
  // Throws std::invalid_argument on any violation.
  void finalize();
};

struct Assignment {
  std::vector<int> values;  // variable -> domain index, -1 when unassigned

  explicit Assignment(std::size_t n = 0) : values(n, -1) {}
  bool complete() const;
  bool operator==(const Assignment&) const = default;
};

struct Trace {
  std::vector<Assignment> assignments;  // iterations 0..T (0 = initial)
  std::vector<Cost> costs;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  int iterations = 0;
};

Cost global_cost(const DcopInstance& inst, const Assignment& a);

// Sum of v's incident tables with v at `value` and neighbors from ctx.
// Throws if any neighbor of v is unassigned in ctx.
Cost local_cost(const DcopInstance& inst, int v, int value, const Assignment& ctx);

// As local_cost but silently skips edges whose counterpart is unassigned;
// used when message drop leaves an agent with partial information.
Cost local_cost_partial(const DcopInstance& inst, int v, int value,
                        const Assignment& ctx);

// Domain value minimizing local_cost; ties broken by lowest domain index.
std::pair<int, Cost> best_local_action(const DcopInstance& inst, int v,
                                       const Assignment& ctx);
std::pair<int, Cost> best_local_action_partial(const DcopInstance& inst, int v,
                                               const Assignment& ctx);

// Random initial assignment: per agent, one draw per owned variable from the
// agent's Init stream.
Assignment random_init(const DcopInstance& inst, std::uint64_t seed);

// Resolves the epsilon branch for one agent in one iteration. Draws one u per
// owned variable from the Branch stream, then random replacement values (for
// the variables that went random) from the RandomValue stream, in variable
// order. Every DSA-flavoured runner in the project shares this discipline so
// their trajectories are comparable draw for draw.
struct AdoptResult {
  std::vector<int> values;  // per owned variable, same order as inst.owned[agent]
  bool all_best = true;
  bool all_random = true;
};
AdoptResult epsilon_adopt(const DcopInstance& inst, int agent,
                          const std::vector<int>& best_values, double epsilon,
                          std::uint64_t seed, int iteration);

// DSA-B: the agent re-adopts d_max with probability 1-epsilon even when it
// equals the current value, else a uniformly random domain value.
Trace run_dsa(const DcopInstance& inst, double epsilon, int iterations,
              std::uint64_t seed);

// Every variable uniformly resampled each iteration; same trace shape as
// run_dsa.
Trace random_baseline(const DcopInstance& inst, int iterations,
                      std::uint64_t seed);

// Exhaustive argmin of global_cost; deterministic lexicographic tie-break.
// Throws if the search space exceeds `cap`.
std::pair<Assignment, Cost> brute_force_optimum(const DcopInstance& inst,
                                                long long cap = 10000000);

// Element t = min of costs over iterations 0..t.
std::vector<Cost> anytime_curve(const std::vector<Cost>& costs);

// Fraction of edges whose relation holds under `a`.
double satisfaction(const DcopInstance& inst, const Assignment& a,
                    const std::vector<Relation>& relations);

bool relation_holds(Relation r, int a, int b);

}  // namespace vldcop
