#include "vldcop/agents.hpp"

#include <algorithm>
#include <chrono>

namespace vldcop {

namespace {

void fill_config(RunRecord& rec, const VlTask& task, const AgentRunOptions& opt) {
  rec.benchmark = task.benchmark;
  rec.instance_seed = task.seed;
  rec.run_seed = opt.seed;
  rec.epsilon = opt.epsilon;
  rec.iterations = opt.iterations;
  rec.drop = opt.drop;
  rec.max_delay = opt.max_delay;
  rec.copa_rounds = opt.copa_rounds;
  rec.n = static_cast<int>(task.instance.agents.size());
  rec.m = static_cast<int>(task.instance.edges.size());
  rec.domain_size =
      task.instance.domains.empty() ? 0 : static_cast<int>(task.instance.domains[0].size());
}

void record_iteration(RunRecord& rec, const VlTask& task, const Assignment& a) {
  rec.assignments.push_back(a);
  rec.costs.push_back(global_cost(task.instance, a));
  rec.sat.push_back(satisfaction(task.instance, a, task.truth.relation));
}

void copy_counters(RunRecord& rec, const ModelAdapter& adapter, int num_agents) {
  for (int a = 0; a < num_agents; ++a)
    for (TaskKind k : {TaskKind::GenerateConstraint, TaskKind::GetMaxAction,
                       TaskKind::Resolve, TaskKind::GetAction}) {
      long n = adapter.query_count(a, k);
      if (n > 0) rec.queries[{a, static_cast<int>(k)}] = n;
    }
  rec.fallbacks = adapter.fallback_count();
}

void capture_pair(std::vector<CapturedPair>* pairs, const Prompt& prompt,
                  const ScriptedOracle& oracle, const QueryContext& ctx) {
  if (!pairs) return;
  ModelDecision truth = oracle.oracle_decision(ctx);
  pairs->push_back({ctx.agent, ctx.iteration, task_kind_name(ctx.kind),
                    prompt.full_text(), decision_answer_text(truth, ctx)});
}

}  // namespace

RunRecord fmc_dsa_run(const VlTask& task, ModelAdapter& adapter,
                      const AgentRunOptions& opt) {
  const DcopInstance& inst = task.instance;
  const int na = static_cast<int>(inst.agents.size());
  const auto start = std::chrono::steady_clock::now();

  RunRecord rec;
  fill_config(rec, task, opt);
  rec.archetype = "fmc-dsa";

  // capture needs ground-truth decisions regardless of the adapter in use
  ScriptedOracle oracle(task);
  std::vector<CapturedPair>* pairs = opt.capture ? &rec.pairs : nullptr;

  MessageBus bus(na, opt.drop, opt.max_delay, opt.seed);
  Assignment cur = random_init(inst, opt.seed);

  // each agent's view: own variables plus whatever neighbors reported
  std::vector<Assignment> known(na, Assignment(inst.variables.size()));
  for (int a = 0; a < na; ++a)
    for (int v : inst.owned[a]) known[a].values[v] = cur.values[v];

  // constraint-initialization phase: one GenerateConstraint per neighbor
  for (int a = 0; a < na; ++a) {
    for (int nb : inst.agent_adj[a]) {
      QueryContext ctx;
      ctx.kind = TaskKind::GenerateConstraint;
      ctx.agent = a;
      ctx.task = &task;
      ctx.neighbor_agent = nb;
      ctx.cost_min = opt.cost_min;
      ctx.cost_max = opt.cost_max;
      ctx.seed = opt.seed;
      Prompt prompt = build_prompt(ctx.kind, ctx);
      capture_pair(pairs, prompt, oracle, ctx);
      ModelDecision dec = adapter.query(prompt, ctx);
      bus.send(a, nb, "pref", dec.constraint_text);
    }
  }
  bus.advance();
  std::vector<std::vector<std::string>> observations(na);
  for (int a = 0; a < na; ++a) {
    std::vector<int> heard;
    for (auto& msg : bus.read_inbox(a)) {
      observations[a].push_back("from agent " + inst.agents[msg.from] + ": " +
                                msg.payload);
      heard.push_back(msg.from);
    }
    for (int nb : inst.agent_adj[a])
      if (std::find(heard.begin(), heard.end(), nb) == heard.end())
        observations[a].push_back("no preference message received from agent " +
                                  inst.agents[nb]);
  }

  record_iteration(rec, task, cur);

  for (int t = 1; t <= opt.iterations; ++t) {
    for (int a = 0; a < na; ++a) {
      std::map<int, int> vals;
      for (int v : inst.owned[a]) vals[v] = cur.values[v];
      for (int nb : inst.agent_adj[a]) bus.send(a, nb, "assign", "", vals);
    }
    bus.advance();
    for (int a = 0; a < na; ++a)
      for (auto& msg : bus.read_inbox(a))
        for (auto [v, val] : msg.values) known[a].values[v] = val;

    Assignment next = cur;
    for (int a = 0; a < na; ++a) {
      QueryContext ctx;
      ctx.kind = TaskKind::GetMaxAction;
      ctx.agent = a;
      ctx.task = &task;
      ctx.variables = inst.owned[a];
      ctx.context = known[a];
      ctx.observations = observations[a];
      ctx.cost_min = opt.cost_min;
      ctx.cost_max = opt.cost_max;
      ctx.seed = opt.seed;
      ctx.epsilon = opt.epsilon;
      ctx.iteration = t;
      Prompt prompt = build_prompt(ctx.kind, ctx);
      capture_pair(pairs, prompt, oracle, ctx);
      ModelDecision dec = adapter.query(prompt, ctx);

      AdoptResult adopt =
          epsilon_adopt(inst, a, dec.values, opt.epsilon, opt.seed, t);
      const auto& vars = inst.owned[a];
      for (std::size_t k = 0; k < vars.size(); ++k)
        next.values[vars[k]] = adopt.values[k];
    }
    cur = next;
    for (int a = 0; a < na; ++a)
      for (int v : inst.owned[a]) known[a].values[v] = cur.values[v];
    record_iteration(rec, task, cur);
  }

  copy_counters(rec, adapter, na);
  rec.bus_sent = bus.sent_count();
  rec.bus_delivered = bus.delivered_count();
  rec.bus_dropped = bus.dropped_count();
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<CostTable> copa_negotiate(const VlTask& task, ModelAdapter& adapter,
                                      const AgentRunOptions& opt,
                                      std::vector<CapturedPair>* pairs) {
  if (opt.copa_rounds < 1) throw std::invalid_argument("copa rounds must be >= 1");
  const DcopInstance& inst = task.instance;
  ScriptedOracle oracle(task);
  std::vector<CostTable> consensus(inst.edges.size());

  auto make_ctx = [&](TaskKind kind, int agent, int edge) {
    QueryContext ctx;
    ctx.kind = kind;
    ctx.agent = agent;
    ctx.task = &task;
    ctx.edge = edge;
    ctx.cost_min = opt.cost_min;
    ctx.cost_max = opt.cost_max;
    ctx.seed = opt.seed;
    return ctx;
  };
  auto propose = [&](QueryContext& ctx) {
    Prompt prompt = build_prompt(ctx.kind, ctx);
    capture_pair(pairs, prompt, oracle, ctx);
    ModelDecision dec = adapter.query(prompt, ctx);
    if (!dec.table) throw std::runtime_error("proposal without a table");
    return *dec.table;
  };

  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    auto [vi, vj] = inst.edges[e];
    const int ai = inst.owner[vi], aj = inst.owner[vj];
    if (ai == aj) {
      // the owner knows both variables' preferences exactly
      consensus[e] = oracle_table(task.truth, inst.edges, static_cast<int>(e));
      continue;
    }
    CostTable own_i, own_j;
    {
      QueryContext ctx = make_ctx(TaskKind::GenerateConstraint, ai, static_cast<int>(e));
      own_i = propose(ctx);
    }
    {
      QueryContext ctx = make_ctx(TaskKind::GenerateConstraint, aj, static_cast<int>(e));
      own_j = propose(ctx);
    }
    for (int r = 1; r <= opt.copa_rounds; ++r) {
      CostTable prev_i = own_i, prev_j = own_j;  // exchanged simultaneously
      {
        QueryContext ctx = make_ctx(TaskKind::GenerateConstraint, ai, static_cast<int>(e));
        ctx.proposal_own = &prev_i;
        ctx.proposal_other = &prev_j;
        ctx.negotiation_round = r;
        own_i = propose(ctx);
      }
      {
        QueryContext ctx = make_ctx(TaskKind::GenerateConstraint, aj, static_cast<int>(e));
        ctx.proposal_own = &prev_j;
        ctx.proposal_other = &prev_i;
        ctx.negotiation_round = r;
        own_j = propose(ctx);
      }
    }
    CostTable resolved_i, resolved_j;
    {
      QueryContext ctx = make_ctx(TaskKind::Resolve, ai, static_cast<int>(e));
      ctx.proposal_own = &own_i;
      ctx.proposal_other = &own_j;
      Prompt prompt = build_prompt(ctx.kind, ctx);
      capture_pair(pairs, prompt, oracle, ctx);
      ModelDecision dec = adapter.query(prompt, ctx);
      resolved_i = dec.table ? *dec.table
                             : *fallback_decision(ctx, opt.seed, e, false).table;
    }
    {
      QueryContext ctx = make_ctx(TaskKind::Resolve, aj, static_cast<int>(e));
      ctx.proposal_own = &own_j;
      ctx.proposal_other = &own_i;
      Prompt prompt = build_prompt(ctx.kind, ctx);
      capture_pair(pairs, prompt, oracle, ctx);
      ModelDecision dec = adapter.query(prompt, ctx);
      resolved_j = dec.table ? *dec.table
                             : *fallback_decision(ctx, opt.seed, e, false).table;
    }
    // the lower-indexed owner's resolution is the one both sides commit to
    consensus[e] = ai < aj ? resolved_i : resolved_j;
  }
  return consensus;
}

RunRecord copa_dsa_run(const VlTask& task, ModelAdapter& adapter,
                       const AgentRunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  fill_config(rec, task, opt);
  rec.archetype = "copa-dsa";

  std::vector<CapturedPair>* pairs = opt.capture ? &rec.pairs : nullptr;
  std::vector<CostTable> consensus = copa_negotiate(task, adapter, opt, pairs);

  DcopInstance learned = task.instance;
  learned.tables = consensus;
  learned.finalize();

  Trace trace = run_dsa(learned, opt.epsilon, opt.iterations, opt.seed);
  for (std::size_t t = 0; t < trace.assignments.size(); ++t) {
    record_iteration(rec, task, trace.assignments[t]);
    // consensus tables are shared, so agents can self-report a global cost
    rec.agent_costs.push_back(global_cost(learned, trace.assignments[t]));
  }

  copy_counters(rec, adapter, static_cast<int>(task.instance.agents.size()));
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace vldcop
