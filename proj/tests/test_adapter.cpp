#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "vldcop/adapter.hpp"

using namespace vldcop;
using namespace vldcop::testing;

namespace {

QueryContext max_action_ctx(const VlTask& task, int agent) {
  QueryContext ctx;
  ctx.kind = TaskKind::GetMaxAction;
  ctx.agent = agent;
  ctx.task = &task;
  ctx.variables = task.instance.owned[agent];
  ctx.context = Assignment(task.instance.variables.size());
  return ctx;
}

}  // namespace

TEST_CASE("get-max-action prompts list neighbors and candidates") {
  VlTask task = gen_ldgc(10, 23, 4, 5);
  int agent = 0;
  while (task.instance.agent_adj[agent].size() < 3) ++agent;
  QueryContext ctx = max_action_ctx(task, agent);
  for (std::size_t v = 0; v < ctx.context.values.size(); ++v) ctx.context.values[v] = 0;

  Prompt p = build_prompt(TaskKind::GetMaxAction, ctx);
  for (int nb : task.instance.agent_adj[agent])
    for (int v : task.instance.owned[nb])
      CHECK(p.user.find(task.instance.variables[v] + " = ") != std::string::npos);
  const int var = task.instance.owned[agent][0];
  for (const auto& value : task.instance.domains[var])
    CHECK(p.user.find(value) != std::string::npos);
  CHECK(p.user.find("```answer") != std::string::npos);
  CHECK(build_prompt(TaskKind::GetMaxAction, ctx).full_text() == p.full_text());
}

TEST_CASE("resolve prompts embed both tables and the cost range") {
  VlTask task = gen_ldgc(10, 23, 4, 5);
  CostTable own(4, 4, 3), other(4, 4, 7);
  QueryContext ctx;
  ctx.kind = TaskKind::Resolve;
  ctx.agent = task.instance.owner[task.instance.edges[0].first];
  ctx.task = &task;
  ctx.edge = 0;
  ctx.proposal_own = &own;
  ctx.proposal_other = &other;
  Prompt p = build_prompt(TaskKind::Resolve, ctx);
  CHECK(p.user.find("[0, 20]") != std::string::npos);
  CHECK(p.user.find("3 3 3 3") != std::string::npos);
  CHECK(p.user.find("7 7 7 7") != std::string::npos);
}

TEST_CASE("prompts require their context fields") {
  VlTask task = gen_ldgc(5, 6, 4, 5);
  QueryContext ctx;
  ctx.kind = TaskKind::GetMaxAction;
  ctx.agent = 0;
  ctx.task = &task;
  CHECK_THROWS(build_prompt(TaskKind::GetMaxAction, ctx));  // no variables
  QueryContext r;
  r.kind = TaskKind::Resolve;
  r.agent = 0;
  r.task = &task;
  r.edge = 0;
  CHECK_THROWS(build_prompt(TaskKind::Resolve, r));  // no proposals
}

TEST_CASE("parse accepts answer-prefixed single values") {
  VlTask task = two_agent_disagreement();
  QueryContext ctx = max_action_ctx(task, 0);
  ModelDecision d =
      parse_decision(TaskKind::GetMaxAction, "```answer\nanswer: B\n```", ctx);
  CHECK(d.values == std::vector<int>{1});
  // case-insensitive value matching
  d = parse_decision(TaskKind::GetMaxAction, "```answer\nx: c\n```", ctx);
  CHECK(d.values == std::vector<int>{2});
}

TEST_CASE("parse rejects out-of-domain and out-of-range answers") {
  VlTask task = two_agent_disagreement();
  QueryContext ctx = max_action_ctx(task, 0);
  CHECK_THROWS_AS(parse_decision(TaskKind::GetMaxAction,
                                 "```answer\nx: Purple\n```", ctx),
                  ParseError);
  CHECK_THROWS_AS(parse_decision(TaskKind::GetMaxAction, "no block at all?!",
                                 ctx),
                  ParseError);

  QueryContext gc;
  gc.kind = TaskKind::GenerateConstraint;
  gc.agent = 0;
  gc.task = &task;
  gc.edge = 0;
  CHECK_THROWS_AS(
      parse_decision(TaskKind::GenerateConstraint,
                     "```answer\n25 0 0\n0 0 0\n0 0 0\n```", gc),
      ParseError);  // 25 outside [0, 20]
  ModelDecision ok = parse_decision(
      TaskKind::GenerateConstraint, "```answer\n1 2 3\n4 5 6\n7 8 9\n```", gc);
  REQUIRE(ok.table.has_value());
  CHECK(ok.table->at(2, 1) == 8);
}

TEST_CASE("parse ignores prose around the answer block") {
  VlTask task = two_agent_disagreement();
  QueryContext ctx = max_action_ctx(task, 0);
  for (int i = 0; i < 100; ++i) {
    std::string wrapper = "Thinking step " + std::to_string(i) +
                          "... my reasoning goes here.\n```answer\nx: A\n```\n" +
                          std::string(i % 7, '!') + " done.";
    ModelDecision d = parse_decision(TaskKind::GetMaxAction, wrapper, ctx);
    CHECK(d.values == std::vector<int>{0});
  }
}

TEST_CASE("scripted oracle picks the best local action") {
  VlTask task = gen_ldgc(10, 23, 4, 9);
  ScriptedOracle oracle(task);
  Rng rng = stream(4, StreamTag::Init, 4);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int agent = static_cast<int>(rng.below(10));
    QueryContext ctx = max_action_ctx(task, agent);
    ctx.context = random_assignment(task.instance, rng);
    Prompt p = build_prompt(ctx.kind, ctx);
    ModelDecision d = oracle.query(p, ctx);
    for (std::size_t k = 0; k < ctx.variables.size(); ++k) {
      CHECK(d.values[k] ==
            best_local_action(task.instance, ctx.variables[k], ctx.context).first);
      ++checked;
    }
  }
  CHECK(checked >= 1000);
}

TEST_CASE("scripted resolve averages half-up") {
  VlTask task = two_agent_disagreement();
  ScriptedOracle oracle(task);
  CostTable a(3, 3, 10), b(3, 3, 11);
  QueryContext ctx;
  ctx.kind = TaskKind::Resolve;
  ctx.agent = 0;
  ctx.task = &task;
  ctx.edge = 0;
  ctx.proposal_own = &a;
  ctx.proposal_other = &b;
  ModelDecision d = oracle.query(build_prompt(ctx.kind, ctx), ctx);
  REQUIRE(d.table.has_value());
  for (Cost c : d.table->costs) CHECK(c == 11);  // (10+11+1)/2

  // averaging identical tables is the identity
  ctx.proposal_other = &a;
  d = oracle.query(build_prompt(ctx.kind, ctx), ctx);
  CHECK(*d.table == a);
}

TEST_CASE("noisy oracle at p=0 equals the scripted oracle") {
  VlTask task = gen_ldgc(10, 23, 4, 9);
  ScriptedOracle scripted(task);
  NoisyOracle noisy(task, 0.0, 1);
  Rng rng = stream(6, StreamTag::Init, 6);
  for (int trial = 0; trial < 100; ++trial) {
    QueryContext ctx = max_action_ctx(task, static_cast<int>(rng.below(10)));
    ctx.context = random_assignment(task.instance, rng);
    Prompt p = build_prompt(ctx.kind, ctx);
    CHECK(noisy.query(p, ctx).values == scripted.query(p, ctx).values);
  }
}

TEST_CASE("noisy oracle at p=1 never returns the oracle value") {
  VlTask task = gen_ldgc(10, 23, 4, 9);
  ScriptedOracle scripted(task);
  NoisyOracle noisy(task, 1.0, 2);
  Rng rng = stream(7, StreamTag::Init, 7);
  for (int trial = 0; trial < 200; ++trial) {
    QueryContext ctx = max_action_ctx(task, static_cast<int>(rng.below(10)));
    ctx.context = random_assignment(task.instance, rng);
    Prompt p = build_prompt(ctx.kind, ctx);
    ModelDecision wrong = noisy.query(p, ctx);
    ModelDecision right = scripted.query(p, ctx);
    for (std::size_t k = 0; k < wrong.values.size(); ++k) {
      CHECK(wrong.values[k] != right.values[k]);
      CHECK(wrong.values[k] >= 0);
      CHECK(wrong.values[k] < 4);
    }
  }
}

TEST_CASE("noisy get-action calls are correct at rate 1-p") {
  VlTask task = gen_ldgc(10, 23, 4, 9);
  NoisyOracle noisy(task, 0.35, 3);
  QueryContext ctx;
  ctx.kind = TaskKind::GetAction;
  ctx.agent = 0;
  ctx.task = &task;
  ctx.reference.kind = EnvActionKind::SendAssignment;
  ctx.legal_actions = {EnvActionKind::SendAssignment, EnvActionKind::ReadInbox,
                       EnvActionKind::Noop};
  AlgorithmicLog log;
  log.append({LogEntry::Kind::Instruction, 0, "instruction", std::nullopt});
  ctx.log = &log;
  Prompt p = build_prompt(ctx.kind, ctx);
  int correct = 0;
  const int calls = 10000;
  for (int i = 0; i < calls; ++i) {
    ModelDecision d = noisy.query(p, ctx);
    if (d.action == ctx.reference) ++correct;
    else CHECK((d.action.kind == EnvActionKind::ReadInbox ||
                d.action.kind == EnvActionKind::Noop));
  }
  CHECK(std::abs(correct / static_cast<double>(calls) - 0.65) < 0.01);
}

TEST_CASE("noisy tables stay within bounds and differ from the oracle") {
  VlTask task = two_agent_disagreement();
  ScriptedOracle scripted(task);
  NoisyOracle noisy(task, 1.0, 5);
  QueryContext ctx;
  ctx.kind = TaskKind::GenerateConstraint;
  ctx.agent = 0;
  ctx.task = &task;
  ctx.edge = 0;
  Prompt p = build_prompt(ctx.kind, ctx);
  ModelDecision wrong = noisy.query(p, ctx);
  ModelDecision right = scripted.query(p, ctx);
  REQUIRE(wrong.table.has_value());
  CHECK(*wrong.table != *right.table);
  for (Cost c : wrong.table->costs) {
    CHECK(c >= 0);
    CHECK(c <= 20);
  }
}

TEST_CASE("fallback decisions are valid by construction") {
  VlTask task = gen_ldgc(10, 23, 4, 9);
  QueryContext ctx = max_action_ctx(task, 3);
  for (std::uint64_t i = 0; i < 50; ++i) {
    ModelDecision d = fallback_decision(ctx, 1, i, false);
    CHECK(d.fallback);
    REQUIRE(d.values.size() == ctx.variables.size());
    for (std::size_t k = 0; k < d.values.size(); ++k) {
      CHECK(d.values[k] >= 0);
      CHECK(d.values[k] <
            static_cast<int>(task.instance.domains[ctx.variables[k]].size()));
    }
  }
}

TEST_CASE("query accounting keys on agent and task kind") {
  VlTask task = gen_ldgc(10, 23, 4, 9);
  ScriptedOracle oracle(task);
  QueryContext ctx = max_action_ctx(task, 2);
  for (std::size_t v = 0; v < ctx.context.values.size(); ++v) ctx.context.values[v] = 0;
  Prompt p = build_prompt(ctx.kind, ctx);
  oracle.query(p, ctx);
  oracle.query(p, ctx);
  CHECK(oracle.query_count(2, TaskKind::GetMaxAction) == 2);
  CHECK(oracle.query_count(2, TaskKind::Resolve) == 0);
  CHECK(oracle.query_count(1) == 0);
  CHECK(oracle.total_queries() == 2);
}

TEST_CASE("log rendering keeps the instruction and the newest entries") {
  AlgorithmicLog log;
  log.append({LogEntry::Kind::Instruction, 0, "P: the instruction", std::nullopt});
  for (int i = 0; i < 200; ++i)
    log.append({LogEntry::Kind::ObservationEntry, i,
                "observation number " + std::to_string(i), std::nullopt});
  const std::string out = log.render(600);
  CHECK(out.size() <= 700);
  CHECK(out.find("P: the instruction") != std::string::npos);
  CHECK(out.find("observation number 199") != std::string::npos);
  CHECK(out.find("observation number 5") == std::string::npos);
}
