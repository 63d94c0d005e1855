#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vldcop/chart.hpp"
#include "vldcop/dcop.hpp"

namespace vldcop {

using EdgeList = std::vector<std::pair<int, int>>;

// Hidden ground truth behind a generated task. Ranks live per variable: for
// graph coloring an agent owns one variable, for meeting scheduling each
// meeting carries its own slot preference.
struct GroundTruth {
  std::vector<std::vector<int>> rank;  // variable -> value index -> rank
  std::vector<Relation> relation;      // per edge
  Cost violation_weight = 10;

  bool operator==(const GroundTruth&) const = default;
};

struct InstructionDoc {
  std::string text;
  std::optional<ChartSpec> chart;
  std::optional<std::string> machine_block;

  bool operator==(const InstructionDoc&) const = default;
};

struct VlTask {
  std::string benchmark;  // ldgc | vldgc | ldms
  std::uint64_t seed = 0;
  DcopInstance instance;  // oracle tables
  GroundTruth truth;
  std::vector<InstructionDoc> instructions;       // per agent
  std::vector<std::vector<int>> participants;     // ldms: variable -> agents
};

// One agent's slice of the ground truth: its variables' rank permutations and
// the relations on its incident edges.
struct LocalGroundTruth {
  std::map<std::string, std::vector<int>> ranks;
  std::vector<std::tuple<std::string, std::string, Relation>> relations;

  bool operator==(const LocalGroundTruth&) const = default;
};

struct GenOptions {
  double avoid_fraction = 0.8;
  bool scale_free = false;
  bool machine_block = true;  // oracle-adapter mode embeds the local slice
};

// Connected simple graph with exactly m edges, spanning-tree-first.
EdgeList gen_random_graph(int n, int m, std::uint64_t seed);

// Preferential-attachment growth targeting m total edges; remainder edges are
// attached to the highest-degree pairs.
EdgeList gen_scale_free(int n, int m, std::uint64_t seed);

GroundTruth gen_ground_truth(const EdgeList& edges, int num_vars,
                             int domain_size, double avoid_fraction,
                             std::uint64_t seed);

// cost(a, b) = V * violation(a, b) + rank_i(a) + rank_j(b)
CostTable oracle_table(const GroundTruth& gt, const EdgeList& edges, int edge);

// The edge as the owner of `viewpoint_var` sees it: its own rank applied to
// both coordinates. This is where preference asymmetry comes from.
CostTable local_view_table(const GroundTruth& gt, const EdgeList& edges, int edge,
                           int viewpoint_var);

// Fills inst.tables from the ground truth (inst must carry edges/domains).
void apply_oracle_tables(DcopInstance& inst, const GroundTruth& gt);

VlTask gen_ldgc(int n, int m, int domain_size, std::uint64_t seed,
                const GenOptions& opt = {});
VlTask gen_vldgc(int n, int m, int domain_size, std::uint64_t seed,
                 const GenOptions& opt = {});

// Meeting scheduling: 1-3 meetings per agent, not-equal edges between
// meetings sharing a participant.
VlTask gen_ldms(int num_agents, int slot_count, std::uint64_t seed,
                const GenOptions& opt = {});

VlTask gen_task(const std::string& benchmark, int n, int m, int domain_size,
                std::uint64_t seed, const GenOptions& opt = {});

LocalGroundTruth local_ground_truth(const VlTask& task, int agent);
std::string encode_machine_block(const VlTask& task, int agent);
LocalGroundTruth parse_machine_block(const std::string& block);

// Value labels used by the generators.
std::vector<std::string> color_names(int domain_size);
std::vector<std::string> slot_names(int slot_count);

}  // namespace vldcop
