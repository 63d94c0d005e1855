#include "vldcop/adapter.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "vldcop/chart.hpp"

namespace vldcop {

const char* task_kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::GenerateConstraint: return "generate-constraint";
    case TaskKind::GetMaxAction: return "get-max-action";
    case TaskKind::Resolve: return "resolve";
    case TaskKind::GetAction: return "get-action";
  }
  return "?";
}

TaskKind task_kind_from_name(const std::string& name) {
  if (name == "generate-constraint") return TaskKind::GenerateConstraint;
  if (name == "get-max-action") return TaskKind::GetMaxAction;
  if (name == "resolve") return TaskKind::Resolve;
  if (name == "get-action") return TaskKind::GetAction;
  throw std::invalid_argument("unknown task kind: " + name);
}

const char* env_action_name(EnvActionKind k) {
  switch (k) {
    case EnvActionKind::InitializeAssignments: return "initialize_assignments";
    case EnvActionKind::GenerateConstraints: return "generate_constraints";
    case EnvActionKind::SendAssignment: return "send_assignment";
    case EnvActionKind::ReadInbox: return "read_inbox";
    case EnvActionKind::ComputeBestAction: return "compute_best_action";
    case EnvActionKind::AdoptValue: return "adopt_value";
    case EnvActionKind::AdoptRandom: return "adopt_random";
    case EnvActionKind::Noop: return "noop";
    case EnvActionKind::Terminate: return "terminate";
  }
  return "?";
}

EnvActionKind env_action_from_name(const std::string& name) {
  std::string s;
  for (char c : name)
    s += c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (EnvActionKind k :
       {EnvActionKind::InitializeAssignments, EnvActionKind::GenerateConstraints,
        EnvActionKind::SendAssignment, EnvActionKind::ReadInbox,
        EnvActionKind::ComputeBestAction, EnvActionKind::AdoptValue,
        EnvActionKind::AdoptRandom, EnvActionKind::Noop, EnvActionKind::Terminate})
    if (s == env_action_name(k)) return k;
  throw std::invalid_argument("unknown action: " + name);
}

std::string format_env_action(const EnvAction& a,
                              const std::vector<std::string>& variables) {
  std::string out = env_action_name(a.kind);
  for (const auto& [v, d] : a.values)
    out += " " + variables[v] + "=" + std::to_string(d);
  return out;
}

std::string AlgorithmicLog::render(std::size_t max_chars) const {
  if (entries.empty()) return "";
  std::vector<std::string> lines;
  for (const auto& e : entries) {
    std::string tag = e.kind == LogEntry::Kind::Instruction ? "instruction"
                      : e.kind == LogEntry::Kind::Action    ? "action"
                                                            : "observation";
    lines.push_back("[" + std::to_string(e.iteration) + "] " + tag + ": " + e.text);
  }
  // always keep the initial instruction, truncate the oldest of the rest
  std::size_t budget = max_chars;
  std::string head = lines.front() + "\n";
  budget = head.size() > budget ? 0 : budget - head.size();
  std::vector<std::string> kept;
  for (std::size_t i = lines.size(); i-- > 1;) {
    if (lines[i].size() + 1 > budget) break;
    budget -= lines[i].size() + 1;
    kept.push_back(lines[i]);
  }
  std::string out = head;
  if (kept.size() + 1 < lines.size()) out += "(older entries truncated)\n";
  for (std::size_t i = kept.size(); i-- > 0;) out += kept[i] + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// prompt construction
// ---------------------------------------------------------------------------

namespace {

std::string render_table_text(const CostTable& t) {
  std::ostringstream out;
  for (int a = 0; a < t.rows; ++a) {
    for (int b = 0; b < t.cols; ++b) {
      if (b) out << " ";
      out << t.at(a, b);
    }
    out << "\n";
  }
  return out.str();
}

std::string chart_data_text(const ChartSpec& spec) {
  std::string out = "Preference data (";
  out += chart_kind_name(spec.kind);
  out += " chart, higher = more preferred):\n";
  for (const auto& [label, mag] : spec.series)
    out += "  " + label + ": " + std::to_string(mag) + "\n";
  return out;
}

const DcopInstance& inst_of(const QueryContext& ctx) {
  if (!ctx.task) throw std::invalid_argument("context is missing the task");
  return ctx.task->instance;
}

}  // namespace

Prompt build_prompt(TaskKind kind, const QueryContext& ctx,
                    const AdapterConfig& cfg) {
  const DcopInstance& inst = inst_of(ctx);
  if (ctx.agent < 0) throw std::invalid_argument("context is missing the agent");
  const InstructionDoc& doc = ctx.task->instructions[ctx.agent];

  Prompt p;
  p.kind = kind;
  p.system =
      "You are a coordination agent in a distributed optimization task. "
      "Follow your instruction faithfully and respond with exactly one fenced "
      "answer block as directed.";

  std::ostringstream u;
  u << "## Instruction\n" << doc.text << "\n";
  if (doc.chart) {
    if (cfg.multimodal) {
      p.image_svg = render_chart(*doc.chart);
      u << "(Your preference chart is attached as an image.)\n";
    } else {
      p.text_fallback_visual = true;
      u << chart_data_text(*doc.chart);
    }
  }
  if (doc.machine_block) u << "## Ground truth block\n" << *doc.machine_block << "\n";

  switch (kind) {
    case TaskKind::GetMaxAction: {
      if (ctx.variables.empty())
        throw std::invalid_argument("get-max-action needs variables");
      if (ctx.context.values.empty())
        throw std::invalid_argument("get-max-action needs assignment context");
      u << "## Known assignments\n";
      for (std::size_t v = 0; v < ctx.context.values.size(); ++v)
        if (ctx.context.values[v] >= 0)
          u << inst.variables[v] << " = "
            << inst.domains[v][ctx.context.values[v]] << "\n";
      if (!ctx.observations.empty()) {
        u << "## Received preference messages\n";
        for (const auto& o : ctx.observations) u << "- " << o << "\n";
      }
      u << "## Task\nChoose the best value for";
      for (int v : ctx.variables) u << " " << inst.variables[v];
      u << ".\n";
      for (int v : ctx.variables) {
        u << "Candidates for " << inst.variables[v] << ":";
        for (const auto& d : inst.domains[v]) u << " " << d;
        u << "\n";
      }
      u << "Answer format, one line per variable:\n```answer\n";
      for (int v : ctx.variables) u << inst.variables[v] << ": <value>\n";
      u << "```\n";
      break;
    }
    case TaskKind::GenerateConstraint: {
      if (ctx.edge >= 0) {
        auto [i, j] = inst.edges[ctx.edge];
        u << "## Task\nPropose the joint cost table for (" << inst.variables[i]
          << ", " << inst.variables[j] << "); rows = values of "
          << inst.variables[i] << ", columns = values of " << inst.variables[j]
          << ", in the listed domain order.\n";
        if (ctx.proposal_other) {
          u << "Your neighbor's latest proposal (round " << ctx.negotiation_round
            << "):\n" << render_table_text(*ctx.proposal_other);
        }
        if (ctx.proposal_own) {
          u << "Your previous proposal:\n" << render_table_text(*ctx.proposal_own);
        }
        u << "Keep every entry within the range [" << ctx.cost_min << ", "
          << ctx.cost_max << "].\n";
        u << "Answer format (" << inst.domains[i].size() << " rows of "
          << inst.domains[j].size() << " integers):\n```answer\n<table rows>\n```\n";
      } else {
        if (ctx.neighbor_agent < 0)
          throw std::invalid_argument("generate-constraint needs an edge or neighbor");
        u << "## Task\nDescribe, for your neighbor agent "
          << inst.agents[ctx.neighbor_agent]
          << ", the constraint between you and them together with your own "
             "preferences.\n";
        u << "Answer format:\n```answer\n<one-paragraph constraint description>\n```\n";
      }
      break;
    }
    case TaskKind::Resolve: {
      if (!ctx.proposal_own || !ctx.proposal_other)
        throw std::invalid_argument("resolve needs both proposals");
      auto [i, j] = inst.edges.at(ctx.edge);
      u << "## Task\nThe two of you proposed different cost tables for ("
        << inst.variables[i] << ", " << inst.variables[j]
        << "). Merge them into one agreed table.\n";
      u << "Your final proposal:\n" << render_table_text(*ctx.proposal_own);
      u << "Neighbor's final proposal:\n" << render_table_text(*ctx.proposal_other);
      u << "Keep every entry within the range [" << ctx.cost_min << ", "
        << ctx.cost_max << "].\n";
      u << "Answer format (" << ctx.proposal_own->rows << " rows of "
        << ctx.proposal_own->cols << " integers):\n```answer\n<table rows>\n```\n";
      break;
    }
    case TaskKind::GetAction: {
      if (!ctx.log) throw std::invalid_argument("get-action needs the log");
      u << "## Execution log\n" << ctx.log->render(cfg.prompt_char_cap);
      u << "## Task\nDecide the next algorithmic step. Legal actions:";
      for (EnvActionKind k : ctx.legal_actions) u << " " << env_action_name(k);
      u << "\nAnswer format:\n```answer\naction: <name> [var=value ...]\n```\n";
      break;
    }
  }
  p.user = u.str();
  return p;
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Content of the first fenced block, surrounding prose ignored. Falls back to
// the whole text when no fence is present.
std::string extract_block(const std::string& raw) {
  auto open = raw.find("```");
  if (open == std::string::npos) return trim(raw);
  auto body_start = open + 3;
  auto close = raw.find("```", body_start);
  if (close == std::string::npos) return trim(raw.substr(body_start));
  std::string body = raw.substr(body_start, close - body_start);
  // drop a language tag like "answer" on the first line
  auto nl = body.find('\n');
  if (nl != std::string::npos) {
    std::string first = trim(body.substr(0, nl));
    if (!first.empty() && first.find(' ') == std::string::npos &&
        first.find(':') == std::string::npos &&
        !std::isdigit(static_cast<unsigned char>(first[0])))
      body = body.substr(nl + 1);
  }
  return trim(body);
}

int match_domain_value(const std::string& token,
                       const std::vector<std::string>& domain) {
  const std::string t = lower(trim(token));
  for (std::size_t d = 0; d < domain.size(); ++d)
    if (lower(domain[d]) == t) return static_cast<int>(d);
  return -1;
}

std::vector<long long> all_integers(const std::string& s) {
  std::vector<long long> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isdigit(static_cast<unsigned char>(s[i])) ||
        (s[i] == '-' && i + 1 < s.size() &&
         std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t end;
      out.push_back(std::stoll(s.substr(i), &end));
      i += end;
    } else {
      ++i;
    }
  }
  return out;
}

CostTable parse_table(const std::string& block, int rows, int cols, Cost lo,
                      Cost hi) {
  auto nums = all_integers(block);
  if (static_cast<int>(nums.size()) != rows * cols)
    throw ParseError("expected " + std::to_string(rows * cols) +
                     " integers, found " + std::to_string(nums.size()));
  CostTable t(rows, cols);
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b) {
      Cost c = nums[static_cast<std::size_t>(a) * cols + b];
      if (c < lo || c > hi)
        throw ParseError("table entry " + std::to_string(c) +
                         " outside range [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
      t.at(a, b) = c;
    }
  return t;
}

}  // namespace

ModelDecision parse_decision(TaskKind kind, const std::string& raw,
                             const QueryContext& ctx) {
  const DcopInstance& inst = inst_of(ctx);
  std::string block = extract_block(raw);
  if (block.empty()) throw ParseError("no answer block found");

  ModelDecision d;
  d.kind = kind;
  d.raw = raw;

  switch (kind) {
    case TaskKind::GetMaxAction: {
      std::vector<std::string> lines;
      std::istringstream ss(block);
      std::string line;
      while (std::getline(ss, line)) lines.push_back(line);
      for (int v : ctx.variables) {
        const std::string var = lower(inst.variables[v]);
        int found = -1;
        for (const auto& l : lines) {
          auto sep = l.find_first_of(":=");
          if (sep == std::string::npos) continue;
          const std::string key = lower(trim(l.substr(0, sep)));
          if (key == var || (ctx.variables.size() == 1 &&
                             (key == "answer" || key == "value"))) {
            found = match_domain_value(l.substr(sep + 1), inst.domains[v]);
            if (found < 0)
              throw ParseError("value for " + inst.variables[v] +
                               " is not in its domain");
            break;
          }
        }
        if (found < 0 && ctx.variables.size() == 1 && lines.size() == 1)
          found = match_domain_value(lines[0], inst.domains[v]);
        if (found < 0)
          throw ParseError("no value given for " + inst.variables[v]);
        d.values.push_back(found);
      }
      break;
    }
    case TaskKind::GenerateConstraint: {
      if (ctx.edge >= 0) {
        auto [i, j] = inst.edges[ctx.edge];
        d.table = parse_table(block, static_cast<int>(inst.domains[i].size()),
                              static_cast<int>(inst.domains[j].size()),
                              ctx.cost_min, ctx.cost_max);
        d.constraint_text = render_table_text(*d.table);
      } else {
        d.constraint_text = block;
      }
      break;
    }
    case TaskKind::Resolve: {
      if (!ctx.proposal_own) throw ParseError("resolve context lacks proposals");
      d.table = parse_table(block, ctx.proposal_own->rows, ctx.proposal_own->cols,
                            ctx.cost_min, ctx.cost_max);
      break;
    }
    case TaskKind::GetAction: {
      std::istringstream ss(block);
      std::string line;
      std::string chosen;
      while (std::getline(ss, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        const std::string low = lower(t);
        if (low.rfind("action:", 0) == 0) {
          chosen = trim(t.substr(7));
          break;
        }
        if (chosen.empty()) chosen = t;
      }
      if (chosen.empty()) throw ParseError("no action given");
      std::istringstream ts(chosen);
      std::string name;
      ts >> name;
      d.action.kind = env_action_from_name(name);
      std::string pair;
      while (ts >> pair) {
        auto eq = pair.find('=');
        if (eq == std::string::npos) throw ParseError("bad value pair: " + pair);
        const std::string var = pair.substr(0, eq);
        int vi = -1;
        for (std::size_t v = 0; v < inst.variables.size(); ++v)
          if (lower(inst.variables[v]) == lower(var)) vi = static_cast<int>(v);
        if (vi < 0) throw ParseError("unknown variable " + var);
        int val = match_domain_value(pair.substr(eq + 1), inst.domains[vi]);
        if (val < 0) throw ParseError("value not in domain for " + var);
        d.action.values[vi] = val;
      }
      if (d.action.kind == EnvActionKind::AdoptValue && d.action.values.empty())
        throw ParseError("adopt_value needs variable=value pairs");
      break;
    }
  }
  return d;
}

std::string decision_answer_text(const ModelDecision& d, const QueryContext& ctx) {
  const DcopInstance& inst = inst_of(ctx);
  std::ostringstream out;
  switch (d.kind) {
    case TaskKind::GetMaxAction:
      for (std::size_t k = 0; k < ctx.variables.size(); ++k)
        out << inst.variables[ctx.variables[k]] << ": "
            << inst.domains[ctx.variables[k]][d.values[k]] << "\n";
      break;
    case TaskKind::GenerateConstraint:
    case TaskKind::Resolve:
      if (d.table) out << render_table_text(*d.table);
      else out << d.constraint_text << "\n";
      break;
    case TaskKind::GetAction: {
      out << "action: " << env_action_name(d.action.kind);
      for (const auto& [v, val] : d.action.values)
        out << " " << inst.variables[v] << "=" << inst.domains[v][val];
      out << "\n";
      break;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// adapters
// ---------------------------------------------------------------------------

ModelDecision ModelAdapter::query(const Prompt& prompt, const QueryContext& ctx) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    ++counters_[{ctx.agent, ctx.kind}];
  }
  ModelDecision d = do_query(prompt, ctx);
  if (d.fallback) note_fallback();
  return d;
}

long ModelAdapter::query_count(int agent, TaskKind kind) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = counters_.find({agent, kind});
  return it == counters_.end() ? 0 : it->second;
}

long ModelAdapter::query_count(int agent) const {
  std::lock_guard<std::mutex> lock(mutex_);
  long total = 0;
  for (const auto& [key, n] : counters_)
    if (key.first == agent) total += n;
  return total;
}

long ModelAdapter::total_queries() const {
  std::lock_guard<std::mutex> lock(mutex_);
  long total = 0;
  for (const auto& [key, n] : counters_) total += n;
  return total;
}

long ModelAdapter::fallback_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return fallbacks_;
}

void ModelAdapter::note_fallback() {
  std::lock_guard<std::mutex> lock(mutex_);
  ++fallbacks_;
}

ScriptedOracle::ScriptedOracle(const VlTask& task, const AdapterConfig& cfg)
    : task_(task), cfg_(cfg) {}

ModelDecision ScriptedOracle::oracle_decision(const QueryContext& ctx) const {
  const DcopInstance& inst = task_.instance;
  ModelDecision d;
  d.kind = ctx.kind;
  switch (ctx.kind) {
    case TaskKind::GetMaxAction: {
      if (!task_.instructions[ctx.agent].machine_block)
        throw std::runtime_error("scripted oracle needs the machine block");
      for (int v : ctx.variables)
        d.values.push_back(best_local_action_partial(inst, v, ctx.context).first);
      break;
    }
    case TaskKind::GenerateConstraint: {
      if (ctx.edge >= 0) {
        auto [i, j] = inst.edges[ctx.edge];
        const int view = inst.owner[i] == ctx.agent ? i : j;
        CostTable t = local_view_table(task_.truth, inst.edges, ctx.edge, view);
        for (Cost& c : t.costs) c = std::clamp(c, ctx.cost_min, ctx.cost_max);
        d.constraint_text = render_table_text(t);
        d.table = std::move(t);
      } else {
        LocalGroundTruth local = local_ground_truth(task_, ctx.agent);
        std::ostringstream out;
        out << "Constraints of agent " << inst.agents[ctx.agent] << ":";
        for (const auto& [a, b, rel] : local.relations)
          out << " " << a << "~" << b << " " << relation_name(rel) << ";";
        for (const auto& [var, ranks] : local.ranks) {
          out << " rank(" << var << ")=";
          for (std::size_t i = 0; i < ranks.size(); ++i)
            out << (i ? "," : "") << ranks[i];
          out << ";";
        }
        d.constraint_text = out.str();
      }
      break;
    }
    case TaskKind::Resolve: {
      if (!ctx.proposal_own || !ctx.proposal_other)
        throw std::runtime_error("resolve needs both proposals");
      CostTable t(ctx.proposal_own->rows, ctx.proposal_own->cols);
      for (std::size_t i = 0; i < t.costs.size(); ++i) {
        Cost a = ctx.proposal_own->costs[i], b = ctx.proposal_other->costs[i];
        // half-up average (entries are non-negative)
        t.costs[i] = cfg_.resolve_max ? std::max(a, b) : (a + b + 1) / 2;
        t.costs[i] = std::clamp(t.costs[i], ctx.cost_min, ctx.cost_max);
      }
      d.table = std::move(t);
      break;
    }
    case TaskKind::GetAction:
      d.action = ctx.reference;
      break;
  }
  return d;
}

ModelDecision ScriptedOracle::do_query(const Prompt&, const QueryContext& ctx) {
  return oracle_decision(ctx);
}

NoisyOracle::NoisyOracle(const VlTask& task, double p, std::uint64_t seed,
                         const AdapterConfig& cfg)
    : scripted_(task, cfg), cfg_(cfg), p_(p), seed_(seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("noise probability out of range");
}

ModelDecision NoisyOracle::do_query(const Prompt&, const QueryContext& ctx) {
  std::uint64_t idx;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    idx = call_index_[ctx.agent]++;
  }
  ModelDecision d = scripted_.oracle_decision(ctx);
  Rng rng = stream(seed_, StreamTag::Noise, ctx.agent, idx);
  if (rng.u01() >= p_) return d;

  // produce a uniformly random *valid* wrong decision
  const DcopInstance& inst = ctx.task->instance;
  switch (ctx.kind) {
    case TaskKind::GetMaxAction:
      for (std::size_t k = 0; k < ctx.variables.size(); ++k) {
        const int dom = static_cast<int>(inst.domains[ctx.variables[k]].size());
        if (dom < 2) continue;
        int r = static_cast<int>(rng.below(static_cast<std::uint32_t>(dom - 1)));
        d.values[k] = r >= d.values[k] ? r + 1 : r;
      }
      break;
    case TaskKind::GenerateConstraint:
    case TaskKind::Resolve:
      if (d.table) {
        for (Cost& c : d.table->costs) {
          Cost delta = 1 + static_cast<Cost>(rng.below(3));
          if (rng.below(2)) delta = -delta;
          Cost perturbed = std::clamp(c + delta, ctx.cost_min, ctx.cost_max);
          if (perturbed == c)
            perturbed = std::clamp(c - delta, ctx.cost_min, ctx.cost_max);
          c = perturbed;
        }
        d.constraint_text = "";
      }
      break;
    case TaskKind::GetAction: {
      std::vector<EnvActionKind> wrong;
      for (EnvActionKind k : ctx.legal_actions)
        if (k != ctx.reference.kind) wrong.push_back(k);
      if (wrong.empty()) wrong.push_back(EnvActionKind::Noop);
      d.action = EnvAction{};
      d.action.kind = wrong[rng.below(static_cast<std::uint32_t>(wrong.size()))];
      break;
    }
  }
  return d;
}

ModelDecision fallback_decision(const QueryContext& ctx, std::uint64_t seed,
                                std::uint64_t call_index, bool resolve_max) {
  const DcopInstance& inst = inst_of(ctx);
  ModelDecision d;
  d.kind = ctx.kind;
  d.fallback = true;
  Rng rng = stream(seed, StreamTag::Fallback, ctx.agent, call_index);
  switch (ctx.kind) {
    case TaskKind::GetMaxAction:
      for (int v : ctx.variables)
        d.values.push_back(static_cast<int>(
            rng.below(static_cast<std::uint32_t>(inst.domains[v].size()))));
      break;
    case TaskKind::GenerateConstraint: {
      if (ctx.edge >= 0) {
        auto [i, j] = inst.edges[ctx.edge];
        d.table = CostTable(static_cast<int>(inst.domains[i].size()),
                            static_cast<int>(inst.domains[j].size()),
                            (ctx.cost_min + ctx.cost_max) / 2);
      } else {
        d.constraint_text = "(no constraint description available)";
      }
      break;
    }
    case TaskKind::Resolve: {
      CostTable t(ctx.proposal_own->rows, ctx.proposal_own->cols);
      for (std::size_t i = 0; i < t.costs.size(); ++i) {
        Cost a = ctx.proposal_own->costs[i], b = ctx.proposal_other->costs[i];
        t.costs[i] = resolve_max ? std::max(a, b) : (a + b + 1) / 2;
      }
      d.table = std::move(t);
      break;
    }
    case TaskKind::GetAction:
      d.action.kind = EnvActionKind::Noop;
      break;
  }
  return d;
}

}  // namespace vldcop
