#pragma once

#include <string>
#include <vector>

#include "vldcop/benchgen.hpp"
#include "vldcop/dcop.hpp"

namespace vldcop::testing {

// One agent per variable, shared domain size, given edges and tables.
inline DcopInstance make_instance(int num_vars, int domain_size,
                                  EdgeList edges,
                                  std::vector<CostTable> tables) {
  DcopInstance inst;
  for (int i = 0; i < num_vars; ++i) {
    inst.agents.push_back("a" + std::to_string(i));
    inst.variables.push_back("x" + std::to_string(i));
    inst.owner.push_back(i);
    std::vector<std::string> dom;
    for (int d = 0; d < domain_size; ++d) dom.push_back("v" + std::to_string(d));
    inst.domains.push_back(dom);
  }
  inst.edges = std::move(edges);
  inst.tables = std::move(tables);
  inst.finalize();
  return inst;
}

// Two variables, domain {0,1}, one edge with table [[10,0],[0,10]]
// (cost 10 when equal): the "match the other's value" example instance.
inline DcopInstance two_var_match() {
  CostTable t(2, 2);
  t.at(0, 0) = 10;
  t.at(1, 1) = 10;
  return make_instance(2, 2, {{0, 1}}, {t});
}

inline DcopInstance random_instance(int num_vars, int domain_size, int m,
                                    std::uint64_t seed, Cost max_cost = 9) {
  EdgeList edges = gen_random_graph(num_vars, m, seed);
  std::vector<CostTable> tables;
  Rng rng = stream(seed, StreamTag::GroundTruth, 999);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    CostTable t(domain_size, domain_size);
    for (Cost& c : t.costs)
      c = static_cast<Cost>(rng.below(static_cast<std::uint32_t>(max_cost + 1)));
    tables.push_back(t);
  }
  return make_instance(num_vars, domain_size, std::move(edges),
                       std::move(tables));
}

inline Assignment random_assignment(const DcopInstance& inst, Rng& rng) {
  Assignment a(inst.variables.size());
  for (std::size_t v = 0; v < inst.variables.size(); ++v)
    a.values[v] = static_cast<int>(
        rng.below(static_cast<std::uint32_t>(inst.domains[v].size())));
  return a;
}

// Two agents, one avoid edge, domain {A,B,C}: X ranks A>B>C, Y ranks B>A>C.
// Reproduces the disagreement scenario used throughout the tests.
inline VlTask two_agent_disagreement() {
  VlTask task;
  task.benchmark = "ldgc";
  task.seed = 0;
  DcopInstance& inst = task.instance;
  inst.agents = {"X", "Y"};
  inst.variables = {"x", "y"};
  inst.owner = {0, 1};
  inst.domains = {{"A", "B", "C"}, {"A", "B", "C"}};
  inst.edges = {{0, 1}};
  task.truth.rank = {{0, 1, 2}, {1, 0, 2}};
  task.truth.relation = {Relation::Avoid};
  apply_oracle_tables(inst, task.truth);
  inst.finalize();
  task.instructions.resize(2);
  for (int a = 0; a < 2; ++a) {
    task.instructions[a].text = "Avoid matching your neighbor's color.";
    task.instructions[a].machine_block = encode_machine_block(task, a);
  }
  return task;
}

}  // namespace vldcop::testing
