#include "vldcop/nas.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

namespace vldcop {

namespace {

std::string var_list(const DcopInstance& inst, const std::map<int, int>& values) {
  std::string out;
  for (const auto& [v, d] : values) {
    if (!out.empty()) out += ", ";
    out += inst.variables[v] + "=" + inst.domains[v][d];
  }
  return out;
}

}  // namespace

NasEnv::NasEnv(const VlTask& task, int agent, std::uint64_t seed, double epsilon,
               MessageBus& bus, Assignment& public_assignment)
    : task_(task),
      agent_(agent),
      seed_(seed),
      epsilon_(epsilon),
      bus_(bus),
      public_(public_assignment),
      known_(task.instance.variables.size()) {
  if (agent < 0 || agent >= static_cast<int>(task.instance.agents.size()))
    throw std::invalid_argument("bad agent id");
}

Observation NasEnv::reset() {
  const DcopInstance& inst = task_.instance;
  reset_done_ = true;
  log_.entries.clear();

  std::ostringstream p;
  p << "You are agent " << inst.agents[agent_]
    << ", simulating one participant of a synchronous distributed optimization "
       "algorithm. "
    << task_.instructions[agent_].text << "\n"
    << "Each iteration: send your assignment, read your inbox, compute the best "
       "value, then adopt a value. Initialize first.";
  log_.append({LogEntry::Kind::Instruction, 0, p.str(), std::nullopt});

  Observation o;
  o.text = log_.entries[0].text;
  return o;
}

void NasEnv::begin_round(int iteration) {
  iteration_ = iteration;
  sent_ = read_ = computed_ = adopted_ = false;
}

std::vector<EnvActionKind> NasEnv::legal_actions() const {
  if (terminated_) return {};
  std::vector<EnvActionKind> out;
  if (!initialized_) {
    out.push_back(EnvActionKind::InitializeAssignments);
  } else if (!constraints_ready_) {
    out.push_back(EnvActionKind::GenerateConstraints);
  } else if (iteration_ >= 1) {
    if (!sent_) {
      out.push_back(EnvActionKind::SendAssignment);
    } else if (bus_.round() > send_round_) {
      if (!read_) out.push_back(EnvActionKind::ReadInbox);
      if (read_ && !computed_) out.push_back(EnvActionKind::ComputeBestAction);
      if (computed_ && !adopted_) {
        out.push_back(EnvActionKind::AdoptValue);
        out.push_back(EnvActionKind::AdoptRandom);
      }
    }
  }
  out.push_back(EnvActionKind::Noop);
  return out;
}

void NasEnv::adopt(const std::vector<int>& values) {
  const auto& vars = task_.instance.owned[agent_];
  for (std::size_t k = 0; k < vars.size(); ++k) {
    public_.values[vars[k]] = values[k];
    known_.values[vars[k]] = values[k];
  }
  adopted_ = true;
}

Observation NasEnv::step(const EnvAction& action) {
  if (!reset_done_) throw std::logic_error("step before reset");
  if (terminated_) throw std::logic_error("step after terminate");

  Observation o = apply(action);
  log_.append({LogEntry::Kind::Action, iteration_,
               format_env_action(action, task_.instance.variables), action});
  log_.append({LogEntry::Kind::ObservationEntry, iteration_, o.text, std::nullopt});
  return o;
}

Observation NasEnv::apply(const EnvAction& action) {
  const DcopInstance& inst = task_.instance;
  const auto& vars = inst.owned[agent_];
  Observation o;

  auto illegal = [&](const std::string& why) {
    o.error = true;
    o.text = "error: " + why;
    return o;
  };

  switch (action.kind) {
    case EnvActionKind::InitializeAssignments: {
      if (initialized_) return illegal("assignments already initialized");
      Rng rng = stream(seed_, StreamTag::Init, static_cast<std::uint64_t>(agent_));
      std::string picked;
      for (int v : vars) {
        int d = static_cast<int>(
            rng.below(static_cast<std::uint32_t>(inst.domains[v].size())));
        public_.values[v] = d;
        known_.values[v] = d;
        if (!picked.empty()) picked += ", ";
        picked += inst.variables[v] + "=" + inst.domains[v][d];
      }
      initialized_ = true;
      o.text = "initialized: " + picked;
      return o;
    }
    case EnvActionKind::GenerateConstraints: {
      if (!initialized_) return illegal("initialize assignments first");
      if (constraints_ready_) return illegal("constraints already generated");
      constraints_ready_ = true;
      std::ostringstream t;
      t << "constraints ready for";
      for (int v : vars)
        t << " " << inst.variables[v] << " (" << inst.incident[v].size()
          << " edges)";
      o.text = t.str();
      return o;
    }
    case EnvActionKind::SendAssignment: {
      if (!constraints_ready_ || iteration_ < 1)
        return illegal("constraints not initialized");
      if (sent_) return illegal("assignment already sent this iteration");
      std::map<int, int> vals;
      for (int v : vars) vals[v] = known_.values[v];
      for (int nb : inst.agent_adj[agent_])
        bus_.send(agent_, nb, "assign", "", vals);
      sent_ = true;
      send_round_ = bus_.round();
      o.text = "sent " + var_list(inst, vals) + " to " +
               std::to_string(inst.agent_adj[agent_].size()) + " neighbors";
      return o;
    }
    case EnvActionKind::ReadInbox: {
      if (!sent_ || bus_.round() <= send_round_)
        return illegal("nothing to read yet");
      if (read_) return illegal("inbox already read this iteration");
      std::vector<int> heard;
      std::ostringstream t;
      t << "inbox:";
      for (auto& msg : bus_.read_inbox(agent_)) {
        for (auto [v, val] : msg.values) known_.values[v] = val;
        t << " [" << inst.agents[msg.from] << ": " << var_list(inst, msg.values)
          << "]";
        heard.push_back(msg.from);
      }
      for (int nb : inst.agent_adj[agent_])
        if (std::find(heard.begin(), heard.end(), nb) == heard.end())
          t << " [no message from agent " << inst.agents[nb] << "]";
      read_ = true;
      o.text = t.str();
      return o;
    }
    case EnvActionKind::ComputeBestAction: {
      if (!constraints_ready_) return illegal("constraints not initialized");
      if (!read_) return illegal("read the inbox first");
      if (computed_) return illegal("best action already computed");
      last_best_.assign(vars.size(), 0);
      std::ostringstream t;
      t << "best:";
      for (std::size_t k = 0; k < vars.size(); ++k) {
        auto [d, c] = best_local_action_partial(inst, vars[k], known_);
        last_best_[k] = d;
        o.best_values[vars[k]] = d;
        t << " " << inst.variables[vars[k]] << "=" << inst.domains[vars[k]][d]
          << " (cost " << c << ")";
      }
      computed_ = true;
      o.text = t.str();
      return o;
    }
    case EnvActionKind::AdoptValue: {
      if (!computed_) return illegal("no computed action to adopt");
      if (adopted_) return illegal("value already adopted this iteration");
      std::vector<int> vals = last_best_;
      for (auto [v, d] : action.values) {
        auto it = std::find(vars.begin(), vars.end(), v);
        if (it == vars.end()) return illegal("variable not owned");
        if (d < 0 || d >= static_cast<int>(inst.domains[v].size()))
          return illegal("value out of domain");
        vals[it - vars.begin()] = d;
      }
      adopt(vals);
      std::map<int, int> shown;
      for (std::size_t k = 0; k < vars.size(); ++k) shown[vars[k]] = vals[k];
      o.text = "adopted " + var_list(inst, shown);
      return o;
    }
    case EnvActionKind::AdoptRandom: {
      if (!computed_) return illegal("no computed action to adopt");
      if (adopted_) return illegal("value already adopted this iteration");
      // same draw discipline as epsilon_adopt with every variable random
      Rng rng = stream(seed_, StreamTag::RandomValue,
                       static_cast<std::uint64_t>(agent_),
                       static_cast<std::uint64_t>(iteration_));
      std::vector<int> vals(vars.size());
      for (std::size_t k = 0; k < vars.size(); ++k)
        vals[k] = static_cast<int>(
            rng.below(static_cast<std::uint32_t>(inst.domains[vars[k]].size())));
      adopt(vals);
      std::map<int, int> shown;
      for (std::size_t k = 0; k < vars.size(); ++k) shown[vars[k]] = vals[k];
      o.text = "adopted random " + var_list(inst, shown);
      return o;
    }
    case EnvActionKind::Noop:
      o.text = "noop";
      return o;
    case EnvActionKind::Terminate:
      terminated_ = true;
      o.terminal = true;
      o.text = "terminated";
      return o;
  }
  return illegal("unknown action");
}

EnvAction reference_action(const NasEnv& env) {
  EnvAction a;
  if (env.terminated()) {
    a.kind = EnvActionKind::Noop;
    return a;
  }
  if (!env.initialized()) {
    a.kind = EnvActionKind::InitializeAssignments;
    return a;
  }
  if (!env.constraints_ready()) {
    a.kind = EnvActionKind::GenerateConstraints;
    return a;
  }
  if (env.iteration() < 1) {
    a.kind = EnvActionKind::Noop;
    return a;
  }
  if (!env.sent_this_iteration()) {
    a.kind = EnvActionKind::SendAssignment;
    return a;
  }
  if (!env.read_this_iteration()) {
    a.kind = EnvActionKind::ReadInbox;
    return a;
  }
  if (!env.computed_this_iteration()) {
    a.kind = EnvActionKind::ComputeBestAction;
    return a;
  }
  if (!env.adopted_this_iteration()) {
    // stream-derived and idempotent: repeated calls see the same branch
    const DcopInstance& inst = env.task().instance;
    AdoptResult r = epsilon_adopt(inst, env.agent(), env.last_best(),
                                  env.epsilon(), env.seed(), env.iteration());
    if (r.all_random) {
      a.kind = EnvActionKind::AdoptRandom;
      return a;
    }
    a.kind = EnvActionKind::AdoptValue;
    const auto& vars = inst.owned[env.agent()];
    for (std::size_t k = 0; k < vars.size(); ++k) a.values[vars[k]] = r.values[k];
    return a;
  }
  a.kind = EnvActionKind::Noop;
  return a;
}

namespace {

void nas_fill_config(RunRecord& rec, const VlTask& task, const NasRunOptions& opt) {
  rec.benchmark = task.benchmark;
  rec.archetype = "nas";
  rec.instance_seed = task.seed;
  rec.run_seed = opt.seed;
  rec.epsilon = opt.epsilon;
  rec.iterations = opt.iterations;
  rec.drop = opt.drop;
  rec.max_delay = opt.max_delay;
  rec.n = static_cast<int>(task.instance.agents.size());
  rec.m = static_cast<int>(task.instance.edges.size());
  rec.domain_size =
      task.instance.domains.empty() ? 0 : static_cast<int>(task.instance.domains[0].size());
}

struct NasStepper {
  const VlTask& task;
  ModelAdapter& adapter;
  const NasRunOptions& opt;
  RunRecord& rec;
  ScriptedOracle oracle;

  NasStepper(const VlTask& t, ModelAdapter& a, const NasRunOptions& o, RunRecord& r)
      : task(t), adapter(a), opt(o), rec(r), oracle(t) {}

  // one policy query + one environment step; returns the observation
  Observation drive(NasEnv& env) {
    QueryContext ctx;
    ctx.kind = TaskKind::GetAction;
    ctx.agent = env.agent();
    ctx.task = &task;
    ctx.log = &env.log();
    ctx.reference = reference_action(env);
    ctx.legal_actions = env.legal_actions();
    ctx.cost_min = opt.cost_min;
    ctx.cost_max = opt.cost_max;
    ctx.seed = opt.seed;
    ctx.epsilon = opt.epsilon;
    ctx.iteration = env.iteration();
    Prompt prompt = build_prompt(ctx.kind, ctx);
    if (opt.capture) {
      ModelDecision truth = oracle.oracle_decision(ctx);
      rec.pairs.push_back({ctx.agent, ctx.iteration, task_kind_name(ctx.kind),
                           prompt.full_text(), decision_answer_text(truth, ctx)});
    }
    ModelDecision dec = adapter.query(prompt, ctx);

    const auto& vars = task.instance.variables;
    rec.steps.push_back({ctx.agent, ctx.iteration,
                         format_env_action(dec.action, vars),
                         format_env_action(ctx.reference, vars),
                         dec.action == ctx.reference});
    return env.step(dec.action);
  }
};

}  // namespace

RunRecord nas_run(const VlTask& task, ModelAdapter& adapter,
                  const NasRunOptions& opt) {
  if (opt.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  const DcopInstance& inst = task.instance;
  const int na = static_cast<int>(inst.agents.size());
  const auto start = std::chrono::steady_clock::now();

  RunRecord rec;
  nas_fill_config(rec, task, opt);
  NasStepper stepper(task, adapter, opt, rec);

  MessageBus bus(na, opt.drop, opt.max_delay, opt.seed);
  Assignment pub(inst.variables.size());
  std::vector<NasEnv> envs;
  envs.reserve(na);
  for (int a = 0; a < na; ++a)
    envs.emplace_back(task, a, opt.seed, opt.epsilon, bus, pub);
  for (auto& env : envs) env.reset();

  const int send_budget = 2 * opt.steps_per_iteration;
  const int iter_budget = opt.budget_factor * opt.steps_per_iteration;

  // a truncated run can leave variables unassigned; score them at the first
  // domain value so the observer series stays defined
  auto observe = [&](const Assignment& a) {
    Assignment scored = a;
    for (auto& v : scored.values)
      if (v < 0) v = 0;
    rec.assignments.push_back(scored);
    rec.costs.push_back(global_cost(inst, scored));
    rec.sat.push_back(satisfaction(inst, scored, task.truth.relation));
  };

  // initialization phase
  for (auto& env : envs) {
    int steps = 0;
    while (!(env.initialized() && env.constraints_ready()) && steps < iter_budget) {
      stepper.drive(env);
      ++steps;
    }
    if (!(env.initialized() && env.constraints_ready())) rec.truncated = true;
  }
  observe(pub);

  for (int t = 1; t <= opt.iterations; ++t) {
    std::vector<int> used(na, 0);
    for (int a = 0; a < na; ++a) {
      envs[a].begin_round(t);
      while (!envs[a].sent_this_iteration() && used[a] < send_budget) {
        stepper.drive(envs[a]);
        ++used[a];
      }
    }
    bus.advance();
    for (int a = 0; a < na; ++a) {
      while (!envs[a].adopted_this_iteration() && used[a] < iter_budget) {
        stepper.drive(envs[a]);
        ++used[a];
      }
      if (!envs[a].adopted_this_iteration()) rec.truncated = true;
    }
    observe(pub);
  }

  // runner-driven shutdown, no policy query
  for (auto& env : envs) env.step({EnvActionKind::Terminate, {}});

  for (int a = 0; a < na; ++a) {
    long n = adapter.query_count(a, TaskKind::GetAction);
    if (n > 0) rec.queries[{a, static_cast<int>(TaskKind::GetAction)}] = n;
  }
  rec.fallbacks = adapter.fallback_count();
  rec.bus_sent = bus.sent_count();
  rec.bus_delivered = bus.delivered_count();
  rec.bus_dropped = bus.dropped_count();
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

DecisionAccuracy decision_accuracy(const RunRecord& record) {
  if (record.steps.empty())
    throw std::invalid_argument("record has no action log");
  DecisionAccuracy out;
  long matched = 0;
  for (const auto& s : record.steps)
    if (s.match) ++matched;
  out.overall = static_cast<double>(matched) / record.steps.size();

  const int windows = std::max(1, (record.iterations + 9) / 10);
  std::vector<long> hit(windows, 0), total(windows, 0);
  for (const auto& s : record.steps) {
    int w = s.iteration <= 1 ? 0 : (s.iteration - 1) / 10;
    w = std::min(w, windows - 1);
    ++total[w];
    if (s.match) ++hit[w];
  }
  out.windows.resize(windows);
  for (int w = 0; w < windows; ++w)
    out.windows[w] = total[w] ? static_cast<double>(hit[w]) / total[w] : 1.0;
  return out;
}

}  // namespace vldcop
