#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "helpers.hpp"
#include "vldcop/dcop.hpp"

using namespace vldcop;
using namespace vldcop::testing;

TEST_CASE("global cost of an edgeless instance is zero") {
  DcopInstance inst = make_instance(3, 2, {}, {});
  Assignment a(3);
  a.values = {0, 1, 0};
  CHECK(global_cost(inst, a) == 0);
}

TEST_CASE("global cost is a direct table lookup") {
  DcopInstance inst = two_var_match();
  Assignment a(2);
  a.values = {0, 0};
  CHECK(global_cost(inst, a) == 10);

  // exhaustive enumeration of all four assignments
  const Cost expected[2][2] = {{10, 0}, {0, 10}};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      a.values = {x, y};
      CHECK(global_cost(inst, a) == expected[x][y]);
    }
}

TEST_CASE("global cost equals an independent per-edge sum") {
  DcopInstance inst = random_instance(5, 3, 6, 42);
  Rng rng = stream(7, StreamTag::Init, 0);
  for (int trial = 0; trial < 100; ++trial) {
    Assignment a = random_assignment(inst, rng);
    Cost check = 0;
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
      check += inst.tables[e].at(a.values[inst.edges[e].first],
                                 a.values[inst.edges[e].second]);
    CHECK(global_cost(inst, a) == check);
  }
}

TEST_CASE("global cost rejects incomplete assignments") {
  DcopInstance inst = two_var_match();
  Assignment a(2);
  a.values = {0, -1};
  CHECK_THROWS(global_cost(inst, a));
}

TEST_CASE("local cost of an isolated variable is zero") {
  DcopInstance inst = make_instance(3, 2, {{0, 1}}, {CostTable(2, 2, 1)});
  Assignment ctx(3);
  ctx.values = {0, 0, 0};
  CHECK(local_cost(inst, 2, 1, ctx) == 0);
}

TEST_CASE("local cost is a table lookup on the match instance") {
  DcopInstance inst = two_var_match();
  Assignment ctx(2);
  ctx.values = {-1, 1};
  CHECK(local_cost(inst, 0, 1, ctx) == 10);
  CHECK(local_cost(inst, 0, 0, ctx) == 0);
}

TEST_CASE("edge-sum identity: sum of local costs is twice the global cost") {
  DcopInstance inst = random_instance(4, 3, 4, 11);
  Assignment a(4);
  for (a.values[0] = 0; a.values[0] < 3; ++a.values[0])
    for (a.values[1] = 0; a.values[1] < 3; ++a.values[1])
      for (a.values[2] = 0; a.values[2] < 3; ++a.values[2])
        for (a.values[3] = 0; a.values[3] < 3; ++a.values[3]) {
          Cost sum = 0;
          for (int v = 0; v < 4; ++v) sum += local_cost(inst, v, a.values[v], a);
          CHECK(sum == 2 * global_cost(inst, a));
        }
}

TEST_CASE("best local action on a single-value domain") {
  DcopInstance inst = make_instance(2, 1, {{0, 1}}, {CostTable(1, 1, 5)});
  Assignment ctx(2);
  ctx.values = {0, 0};
  CHECK(best_local_action(inst, 0, ctx).first == 0);
}

TEST_CASE("best local action minimizes over the domain") {
  DcopInstance inst = two_var_match();
  Assignment ctx(2);
  ctx.values = {-1, 0};
  auto [value, cost] = best_local_action(inst, 0, ctx);
  CHECK(value == 1);
  CHECK(cost == 0);
}

TEST_CASE("best local action ties break to the lowest domain index") {
  DcopInstance inst = make_instance(2, 3, {{0, 1}}, {CostTable(3, 3, 4)});
  Assignment ctx(2);
  ctx.values = {-1, 2};
  CHECK(best_local_action(inst, 0, ctx).first == 0);
}

TEST_CASE("best local action is optimal for every context") {
  DcopInstance inst = random_instance(4, 3, 5, 23);
  Assignment ctx(4);
  Rng rng = stream(5, StreamTag::Init, 1);
  for (int trial = 0; trial < 200; ++trial) {
    ctx = random_assignment(inst, rng);
    for (int v = 0; v < 4; ++v) {
      auto [best, cost] = best_local_action(inst, v, ctx);
      for (int d = 0; d < 3; ++d) CHECK(cost <= local_cost(inst, v, d, ctx));
      CHECK(cost == local_cost(inst, v, best, ctx));
    }
  }
}

TEST_CASE("run_dsa is deterministic for a fixed seed") {
  DcopInstance inst = random_instance(6, 3, 8, 3);
  Trace a = run_dsa(inst, 0.1, 40, 99);
  Trace b = run_dsa(inst, 0.1, 40, 99);
  CHECK(a.assignments == b.assignments);
  CHECK(a.costs == b.costs);
}

TEST_CASE("run_dsa reaches the optimum of the match instance") {
  DcopInstance inst = two_var_match();
  Trace t = run_dsa(inst, 0.1, 1000, 17);
  CHECK(anytime_curve(t.costs).back() == 0);
}

TEST_CASE("epsilon=1 cost statistics match the random baseline") {
  DcopInstance inst = random_instance(6, 4, 9, 21);
  double dsa_mean = 0, rnd_mean = 0;
  const int iters = 400;
  Trace d = run_dsa(inst, 1.0, iters, 5);
  Trace r = random_baseline(inst, iters, 6);
  for (int t = 1; t <= iters; ++t) {
    dsa_mean += static_cast<double>(d.costs[t]);
    rnd_mean += static_cast<double>(r.costs[t]);
  }
  dsa_mean /= iters;
  rnd_mean /= iters;
  CHECK(std::abs(dsa_mean - rnd_mean) / rnd_mean < 0.1);
}

TEST_CASE("epsilon=1 assignments are uniform (chi-square)") {
  DcopInstance inst = two_var_match();
  Trace t = run_dsa(inst, 1.0, 2000, 8);
  std::map<std::pair<int, int>, int> counts;
  for (int i = 1; i <= 2000; ++i)
    ++counts[{t.assignments[i].values[0], t.assignments[i].values[1]}];
  const double expected = 2000.0 / 4.0;
  double chi2 = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const double diff = counts[{x, y}] - expected;
      chi2 += diff * diff / expected;
    }
  // df = |D|^2 - 1 = 3; critical value at p = 0.01
  CHECK(chi2 < 11.345);
}

TEST_CASE("run_dsa rejects bad parameters") {
  DcopInstance inst = two_var_match();
  CHECK_THROWS(run_dsa(inst, -0.1, 10, 0));
  CHECK_THROWS(run_dsa(inst, 1.1, 10, 0));
  CHECK_THROWS(run_dsa(inst, 0.1, 0, 0));
}

TEST_CASE("brute force on an edgeless instance") {
  DcopInstance inst = make_instance(3, 2, {}, {});
  auto [a, cost] = brute_force_optimum(inst);
  CHECK(cost == 0);
  CHECK(a.values == std::vector<int>{0, 0, 0});
}

TEST_CASE("brute force on the match instance") {
  auto [a, cost] = brute_force_optimum(two_var_match());
  CHECK(cost == 0);
  CHECK(a.values == std::vector<int>{0, 1});
}

TEST_CASE("brute force beats random search") {
  DcopInstance inst = random_instance(5, 3, 6, 77);
  auto [best, cost] = brute_force_optimum(inst);
  Rng rng = stream(1, StreamTag::Init, 2);
  Cost sampled = global_cost(inst, random_assignment(inst, rng));
  for (int i = 1; i < 10000; ++i)
    sampled = std::min(sampled, global_cost(inst, random_assignment(inst, rng)));
  CHECK(cost <= sampled);
}

TEST_CASE("brute force enforces the search-space cap") {
  DcopInstance inst = random_instance(8, 4, 10, 2);
  CHECK_THROWS(brute_force_optimum(inst, 1000));
}

TEST_CASE("anytime curve is a running minimum") {
  CHECK(anytime_curve({5, 3, 4, 2}) == std::vector<Cost>{5, 3, 3, 2});
  CHECK(anytime_curve({7, 7, 7}) == std::vector<Cost>{7, 7, 7});
}

TEST_CASE("anytime curve properties on generated traces") {
  DcopInstance inst = random_instance(6, 3, 8, 31);
  auto optimum = brute_force_optimum(inst).second;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Trace t = run_dsa(inst, 0.2, 60, seed);
    auto curve = anytime_curve(t.costs);
    for (std::size_t i = 0; i < curve.size(); ++i) {
      CHECK(curve[i] <= t.costs[i]);
      if (i) CHECK(curve[i] <= curve[i - 1]);
      CHECK(curve[i] >= optimum);
    }
  }
}

TEST_CASE("satisfaction counts holding relations") {
  DcopInstance inst = random_instance(4, 4, 4, 13);
  std::vector<Relation> rel(inst.edges.size(), Relation::Avoid);
  Assignment distinct(4);
  distinct.values = {0, 1, 2, 3};
  CHECK(satisfaction(inst, distinct, rel) == 1.0);

  DcopInstance pair = two_var_match();
  Assignment equal(2);
  equal.values = {1, 1};
  CHECK(satisfaction(pair, equal, {Relation::Avoid}) == 0.0);
  CHECK(satisfaction(pair, equal, {Relation::Match}) == 1.0);
}

TEST_CASE("random assignments satisfy avoid edges at rate 1 - 1/|D|") {
  DcopInstance inst = random_instance(10, 4, 23, 19);
  std::vector<Relation> rel(inst.edges.size(), Relation::Avoid);
  Rng rng = stream(3, StreamTag::Init, 3);
  double total = 0;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i)
    total += satisfaction(inst, random_assignment(inst, rng), rel);
  CHECK(std::abs(total / samples - 0.75) < 0.02);
}

TEST_CASE("relation semantics") {
  CHECK(relation_holds(Relation::Avoid, 1, 2));
  CHECK_FALSE(relation_holds(Relation::Avoid, 2, 2));
  CHECK(relation_holds(Relation::Match, 2, 2));
  CHECK_FALSE(relation_holds(Relation::Match, 1, 2));
  CHECK(relation_holds(Relation::NotEqual, 0, 1));
  CHECK_FALSE(relation_holds(Relation::NotEqual, 1, 1));
}

TEST_CASE("instance validation rejects malformed structures") {
  CHECK_THROWS(make_instance(2, 2, {{0, 0}}, {CostTable(2, 2)}));   // self loop
  CHECK_THROWS(make_instance(2, 2, {{0, 1}, {0, 1}},
                             {CostTable(2, 2), CostTable(2, 2)}));  // duplicate
  CHECK_THROWS(make_instance(2, 2, {{0, 1}}, {CostTable(3, 2)}));   // bad shape
  CHECK_THROWS(make_instance(2, 2, {{0, 1}}, {}));                  // no table
}
