#include "vldcop/dcop.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace vldcop {

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Avoid: return "avoid";
    case Relation::Match: return "match";
    case Relation::NotEqual: return "not-equal";
  }
  return "?";
}

Relation relation_from_name(const std::string& name) {
  if (name == "avoid") return Relation::Avoid;
  if (name == "match") return Relation::Match;
  if (name == "not-equal") return Relation::NotEqual;
  throw std::invalid_argument("unknown relation: " + name);
}

void DcopInstance::finalize() {
  const int nv = static_cast<int>(variables.size());
  const int na = static_cast<int>(agents.size());
  if (static_cast<int>(owner.size()) != nv || static_cast<int>(domains.size()) != nv)
    throw std::invalid_argument("owner/domains size mismatch");
  for (int v = 0; v < nv; ++v) {
    if (owner[v] < 0 || owner[v] >= na)
      throw std::invalid_argument("variable " + variables[v] + " has no valid owner");
    if (domains[v].empty())
      throw std::invalid_argument("variable " + variables[v] + " has empty domain");
  }
  if (tables.size() != edges.size())
    throw std::invalid_argument("every edge needs a table");

  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [i, j] = edges[e];
    if (i == j) throw std::invalid_argument("self-loop edge");
    if (i > j) throw std::invalid_argument("edge scope must be ordered first < second");
    if (i < 0 || j >= nv) throw std::invalid_argument("edge references unknown variable");
    if (!seen.insert({i, j}).second) throw std::invalid_argument("duplicate edge");
    const CostTable& t = tables[e];
    if (t.rows != static_cast<int>(domains[i].size()) ||
        t.cols != static_cast<int>(domains[j].size()))
      throw std::invalid_argument("table shape mismatch on edge " + variables[i] +
                                  "~" + variables[j]);
    for (Cost c : t.costs)
      if (c < 0) throw std::invalid_argument("negative table entry");
  }

  incident.assign(nv, {});
  for (std::size_t e = 0; e < edges.size(); ++e) {
    incident[edges[e].first].push_back(static_cast<int>(e));
    incident[edges[e].second].push_back(static_cast<int>(e));
  }
  owned.assign(na, {});
  for (int v = 0; v < nv; ++v) owned[owner[v]].push_back(v);
  agent_adj.assign(na, {});
  std::vector<std::set<int>> adj(na);
  for (auto [i, j] : edges) {
    int ai = owner[i], aj = owner[j];
    if (ai != aj) {
      adj[ai].insert(aj);
      adj[aj].insert(ai);
    }
  }
  for (int a = 0; a < na; ++a) agent_adj[a].assign(adj[a].begin(), adj[a].end());
}

bool Assignment::complete() const {
  return std::all_of(values.begin(), values.end(), [](int v) { return v >= 0; });
}

static void check_assignment(const DcopInstance& inst, const Assignment& a) {
  if (a.values.size() != inst.variables.size())
    throw std::invalid_argument("assignment size mismatch");
  for (std::size_t v = 0; v < a.values.size(); ++v)
    if (a.values[v] >= static_cast<int>(inst.domains[v].size()))
      throw std::invalid_argument("assignment value out of domain");
}

Cost global_cost(const DcopInstance& inst, const Assignment& a) {
  check_assignment(inst, a);
  if (!a.complete()) throw std::invalid_argument("incomplete assignment");
  Cost total = 0;
  for (std::size_t e = 0; e < inst.edges.size(); ++e)
    total += inst.tables[e].at(a.values[inst.edges[e].first],
                               a.values[inst.edges[e].second]);
  return total;
}

Cost local_cost(const DcopInstance& inst, int v, int value, const Assignment& ctx) {
  Cost total = 0;
  for (int e : inst.incident[v]) {
    int w = inst.other_end(e, v);
    if (ctx.values[w] < 0)
      throw std::invalid_argument("neighbor " + inst.variables[w] + " unassigned");
    total += inst.edge_cost(e, v, value, ctx.values[w]);
  }
  return total;
}

Cost local_cost_partial(const DcopInstance& inst, int v, int value,
                        const Assignment& ctx) {
  Cost total = 0;
  for (int e : inst.incident[v]) {
    int w = inst.other_end(e, v);
    if (ctx.values[w] < 0) continue;
    total += inst.edge_cost(e, v, value, ctx.values[w]);
  }
  return total;
}

template <typename CostFn>
static std::pair<int, Cost> argmin_domain(const DcopInstance& inst, int v,
                                          CostFn&& fn) {
  const int dom = static_cast<int>(inst.domains[v].size());
  if (dom == 0) throw std::invalid_argument("empty domain");
  int best = 0;
  Cost best_cost = fn(0);
  for (int d = 1; d < dom; ++d) {
    Cost c = fn(d);
    if (c < best_cost) {
      best = d;
      best_cost = c;
    }
  }
  return {best, best_cost};
}

std::pair<int, Cost> best_local_action(const DcopInstance& inst, int v,
                                       const Assignment& ctx) {
  return argmin_domain(inst, v, [&](int d) { return local_cost(inst, v, d, ctx); });
}

std::pair<int, Cost> best_local_action_partial(const DcopInstance& inst, int v,
                                               const Assignment& ctx) {
  return argmin_domain(inst, v,
                       [&](int d) { return local_cost_partial(inst, v, d, ctx); });
}

Assignment random_init(const DcopInstance& inst, std::uint64_t seed) {
  Assignment a(inst.variables.size());
  for (std::size_t ag = 0; ag < inst.agents.size(); ++ag) {
    Rng rng = stream(seed, StreamTag::Init, ag);
    for (int v : inst.owned[ag])
      a.values[v] = static_cast<int>(
          rng.below(static_cast<std::uint32_t>(inst.domains[v].size())));
  }
  return a;
}

AdoptResult epsilon_adopt(const DcopInstance& inst, int agent,
                          const std::vector<int>& best_values, double epsilon,
                          std::uint64_t seed, int iteration) {
  const auto& vars = inst.owned[agent];
  AdoptResult res;
  res.values = best_values;
  Rng branch = stream(seed, StreamTag::Branch, agent, iteration);
  std::vector<bool> go_random(vars.size(), false);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (branch.u01() < 1.0 - epsilon) {
      go_random[k] = false;
      res.all_random = false;
    } else {
      go_random[k] = true;
      res.all_best = false;
    }
  }
  Rng rnd = stream(seed, StreamTag::RandomValue, agent, iteration);
  for (std::size_t k = 0; k < vars.size(); ++k)
    if (go_random[k])
      res.values[k] = static_cast<int>(
          rnd.below(static_cast<std::uint32_t>(inst.domains[vars[k]].size())));
  return res;
}

Trace run_dsa(const DcopInstance& inst, double epsilon, int iterations,
              std::uint64_t seed) {
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon out of range");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  Trace trace;
  trace.seed = seed;
  trace.epsilon = epsilon;
  trace.iterations = iterations;

  Assignment cur = random_init(inst, seed);
  trace.assignments.push_back(cur);
  trace.costs.push_back(global_cost(inst, cur));

  for (int t = 1; t <= iterations; ++t) {
    Assignment next = cur;
    for (std::size_t ag = 0; ag < inst.agents.size(); ++ag) {
      const auto& vars = inst.owned[ag];
      std::vector<int> bests(vars.size());
      for (std::size_t k = 0; k < vars.size(); ++k)
        bests[k] = best_local_action(inst, vars[k], cur).first;
      AdoptResult adopt = epsilon_adopt(inst, static_cast<int>(ag), bests,
                                        epsilon, seed, t);
      for (std::size_t k = 0; k < vars.size(); ++k)
        next.values[vars[k]] = adopt.values[k];
    }
    cur = next;
    trace.assignments.push_back(cur);
    trace.costs.push_back(global_cost(inst, cur));
  }
  return trace;
}

Trace random_baseline(const DcopInstance& inst, int iterations,
                      std::uint64_t seed) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  Trace trace;
  trace.seed = seed;
  trace.iterations = iterations;
  trace.epsilon = 1.0;

  Assignment cur = random_init(inst, seed);
  trace.assignments.push_back(cur);
  trace.costs.push_back(global_cost(inst, cur));
  for (int t = 1; t <= iterations; ++t) {
    for (std::size_t ag = 0; ag < inst.agents.size(); ++ag) {
      Rng rng = stream(seed, StreamTag::Baseline, ag, t);
      for (int v : inst.owned[ag])
        cur.values[v] = static_cast<int>(
            rng.below(static_cast<std::uint32_t>(inst.domains[v].size())));
    }
    trace.assignments.push_back(cur);
    trace.costs.push_back(global_cost(inst, cur));
  }
  return trace;
}

std::pair<Assignment, Cost> brute_force_optimum(const DcopInstance& inst,
                                                long long cap) {
  long long space = 1;
  for (const auto& d : inst.domains) {
    space *= static_cast<long long>(d.size());
    if (space > cap) throw std::invalid_argument("search space exceeds cap");
  }
  Assignment cur(inst.variables.size());
  for (auto& v : cur.values) v = 0;
  Assignment best = cur;
  Cost best_cost = global_cost(inst, cur);
  const int nv = static_cast<int>(inst.variables.size());
  while (true) {
    // mixed-radix increment, last variable fastest: visits assignments in
    // lexicographic order, so strict improvement keeps the lexicographically
    // smallest argmin
    int i = nv - 1;
    while (i >= 0 &&
           cur.values[i] + 1 == static_cast<int>(inst.domains[i].size())) {
      cur.values[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++cur.values[i];
    Cost c = global_cost(inst, cur);
    if (c < best_cost) {
      best_cost = c;
      best = cur;
    }
  }
  return {best, best_cost};
}

std::vector<Cost> anytime_curve(const std::vector<Cost>& costs) {
  if (costs.empty()) throw std::invalid_argument("empty trace");
  std::vector<Cost> curve(costs.size());
  Cost running = costs[0];
  for (std::size_t t = 0; t < costs.size(); ++t) {
    running = std::min(running, costs[t]);
    curve[t] = running;
  }
  return curve;
}

bool relation_holds(Relation r, int a, int b) {
  switch (r) {
    case Relation::Avoid:
    case Relation::NotEqual:
      return a != b;
    case Relation::Match:
      return a == b;
  }
  return false;
}

double satisfaction(const DcopInstance& inst, const Assignment& a,
                    const std::vector<Relation>& relations) {
  check_assignment(inst, a);
  if (!a.complete()) throw std::invalid_argument("incomplete assignment");
  if (relations.size() != inst.edges.size())
    throw std::invalid_argument("edge without a declared relation");
  if (inst.edges.empty()) return 1.0;
  std::size_t ok = 0;
  for (std::size_t e = 0; e < inst.edges.size(); ++e)
    if (relation_holds(relations[e], a.values[inst.edges[e].first],
                       a.values[inst.edges[e].second]))
      ++ok;
  return static_cast<double>(ok) / static_cast<double>(inst.edges.size());
}

}  // namespace vldcop
