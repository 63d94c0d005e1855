#include "vldcop/benchgen.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vldcop {

namespace {

std::vector<int> shuffled_range(int n, Rng& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(v[i], v[rng.below(static_cast<std::uint32_t>(i + 1))]);
  return v;
}

bool connected(int n, const EdgeList& edges) {
  if (n == 0) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : adj[u])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

EdgeList gen_random_graph(int n, int m, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least 2 nodes");
  if (m < n - 1) throw std::invalid_argument("too few edges for a connected graph");
  const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
  if (m > max_edges) throw std::invalid_argument("too many edges");

  Rng rng = stream(seed, StreamTag::Graph);
  std::vector<int> perm = shuffled_range(n, rng);
  EdgeList edges;
  std::set<std::pair<int, int>> used;
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint32_t>(i)));
    auto e = ordered(perm[i], perm[j]);
    edges.push_back(e);
    used.insert(e);
  }
  while (static_cast<int>(edges.size()) < m) {
    int a = static_cast<int>(rng.below(static_cast<std::uint32_t>(n)));
    int b = static_cast<int>(rng.below(static_cast<std::uint32_t>(n)));
    if (a == b) continue;
    auto e = ordered(a, b);
    if (!used.insert(e).second) continue;
    edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

EdgeList gen_scale_free(int n, int m, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("need at least 3 nodes");
  const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
  if (m < n - 1 || m > max_edges) throw std::invalid_argument("infeasible edge count");

  const int k = std::max(1, static_cast<int>((2LL * m + n) / (2LL * n)));  // round(m/n)
  Rng rng = stream(seed, StreamTag::Graph, 1);

  std::set<std::pair<int, int>> used;
  EdgeList edges;
  std::vector<int> endpoints;  // one entry per edge endpoint, drives attachment
  auto add_edge = [&](int a, int b) {
    auto e = ordered(a, b);
    if (!used.insert(e).second) return false;
    edges.push_back(e);
    endpoints.push_back(a);
    endpoints.push_back(b);
    return true;
  };

  const int seed_nodes = std::min(n, k + 1);
  for (int i = 1; i < seed_nodes; ++i) add_edge(i - 1, i);
  for (int v = seed_nodes; v < n; ++v) {
    int attached = 0, guard = 0;
    while (attached < k && guard < 10000) {
      ++guard;
      int target = endpoints[rng.below(static_cast<std::uint32_t>(endpoints.size()))];
      if (target == v) continue;
      if (add_edge(v, target)) ++attached;
    }
    if (attached == 0) add_edge(v, static_cast<int>(rng.below(static_cast<std::uint32_t>(v))));
  }

  // top up with edges between the highest-degree pairs
  if (static_cast<int>(edges.size()) < m) {
    std::vector<int> degree(n, 0);
    for (auto [a, b] : edges) {
      ++degree[a];
      ++degree[b];
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return degree[a] != degree[b] ? degree[a] > degree[b] : a < b;
    });
    for (int i = 0; i < n && static_cast<int>(edges.size()) < m; ++i)
      for (int j = i + 1; j < n && static_cast<int>(edges.size()) < m; ++j)
        add_edge(order[i], order[j]);
  }
  while (static_cast<int>(edges.size()) > m) {
    // only possible when the seed chain overshot for tiny graphs
    used.erase(edges.back());
    edges.pop_back();
  }
  if (!connected(n, edges)) throw std::runtime_error("scale-free generation disconnected");
  std::sort(edges.begin(), edges.end());
  return edges;
}

GroundTruth gen_ground_truth(const EdgeList& edges, int num_vars,
                             int domain_size, double avoid_fraction,
                             std::uint64_t seed) {
  if (avoid_fraction < 0.0 || avoid_fraction > 1.0)
    throw std::invalid_argument("avoid fraction out of range");
  GroundTruth gt;
  gt.rank.resize(num_vars);
  for (int v = 0; v < num_vars; ++v) {
    Rng rng = stream(seed, StreamTag::GroundTruth, v);
    std::vector<int> order = shuffled_range(domain_size, rng);
    gt.rank[v].resize(domain_size);
    for (int r = 0; r < domain_size; ++r) gt.rank[v][order[r]] = r;
  }
  Rng rel_rng = stream(seed, StreamTag::GroundTruth, 0x10000);
  gt.relation.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    gt.relation.push_back(rel_rng.u01() < avoid_fraction ? Relation::Avoid
                                                         : Relation::Match);
  return gt;
}

static Cost violation(Relation r, int a, int b) {
  return relation_holds(r, a, b) ? 0 : 1;
}

CostTable oracle_table(const GroundTruth& gt, const EdgeList& edges, int edge) {
  auto [i, j] = edges[edge];
  const int di = static_cast<int>(gt.rank[i].size());
  const int dj = static_cast<int>(gt.rank[j].size());
  CostTable t(di, dj);
  for (int a = 0; a < di; ++a)
    for (int b = 0; b < dj; ++b)
      t.at(a, b) = gt.violation_weight * violation(gt.relation[edge], a, b) +
                   gt.rank[i][a] + gt.rank[j][b];
  return t;
}

CostTable local_view_table(const GroundTruth& gt, const EdgeList& edges, int edge,
                           int viewpoint_var) {
  auto [i, j] = edges[edge];
  if (viewpoint_var != i && viewpoint_var != j)
    throw std::invalid_argument("viewpoint variable not in edge scope");
  const int di = static_cast<int>(gt.rank[i].size());
  const int dj = static_cast<int>(gt.rank[j].size());
  CostTable t(di, dj);
  if (di != dj)
    throw std::invalid_argument("local view requires matching domain sizes");
  const auto& r = gt.rank[viewpoint_var];
  for (int a = 0; a < di; ++a)
    for (int b = 0; b < dj; ++b)
      t.at(a, b) = gt.violation_weight * violation(gt.relation[edge], a, b) +
                   r[a] + r[b];
  return t;
}

void apply_oracle_tables(DcopInstance& inst, const GroundTruth& gt) {
  inst.tables.clear();
  for (std::size_t e = 0; e < inst.edges.size(); ++e)
    inst.tables.push_back(oracle_table(gt, inst.edges, static_cast<int>(e)));
}

std::vector<std::string> color_names(int domain_size) {
  static const std::vector<std::string> palette = {
      "red",  "green",   "blue", "yellow", "purple", "orange",
      "cyan", "magenta", "pink", "brown",  "gray",   "olive"};
  if (domain_size < 1 || domain_size > static_cast<int>(palette.size()))
    throw std::invalid_argument("unsupported domain size");
  return {palette.begin(), palette.begin() + domain_size};
}

std::vector<std::string> slot_names(int slot_count) {
  std::vector<std::string> v;
  for (int i = 1; i <= slot_count; ++i) v.push_back("slot" + std::to_string(i));
  return v;
}

// ---------------------------------------------------------------------------
// machine block
// ---------------------------------------------------------------------------

LocalGroundTruth local_ground_truth(const VlTask& task, int agent) {
  const DcopInstance& inst = task.instance;
  LocalGroundTruth local;
  for (int v : inst.owned[agent]) local.ranks[inst.variables[v]] = task.truth.rank[v];
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    auto [i, j] = inst.edges[e];
    if (inst.owner[i] == agent || inst.owner[j] == agent)
      local.relations.emplace_back(inst.variables[i], inst.variables[j],
                                   task.truth.relation[e]);
  }
  return local;
}

std::string encode_machine_block(const VlTask& task, int agent) {
  LocalGroundTruth local = local_ground_truth(task, agent);
  std::ostringstream out;
  out << "gt1";
  for (const auto& [var, ranks] : local.ranks) {
    out << ";var " << var << ":rank=";
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      if (i) out << ",";
      out << ranks[i];
    }
  }
  for (const auto& [a, b, rel] : local.relations)
    out << ";rel " << a << "~" << b << ":" << relation_name(rel);
  return out.str();
}

LocalGroundTruth parse_machine_block(const std::string& block) {
  LocalGroundTruth local;
  std::stringstream ss(block);
  std::string part;
  bool first = true;
  while (std::getline(ss, part, ';')) {
    if (first) {
      if (part != "gt1") throw std::invalid_argument("bad machine block header");
      first = false;
      continue;
    }
    if (part.rfind("var ", 0) == 0) {
      auto colon = part.find(":rank=");
      if (colon == std::string::npos) throw std::invalid_argument("bad var entry");
      std::string var = part.substr(4, colon - 4);
      std::vector<int> ranks;
      std::stringstream rs(part.substr(colon + 6));
      std::string tok;
      while (std::getline(rs, tok, ',')) ranks.push_back(std::stoi(tok));
      local.ranks[var] = std::move(ranks);
    } else if (part.rfind("rel ", 0) == 0) {
      auto tilde = part.find('~');
      auto colon = part.find(':', tilde);
      if (tilde == std::string::npos || colon == std::string::npos)
        throw std::invalid_argument("bad rel entry");
      local.relations.emplace_back(part.substr(4, tilde - 4),
                                   part.substr(tilde + 1, colon - tilde - 1),
                                   relation_from_name(part.substr(colon + 1)));
    } else {
      throw std::invalid_argument("unknown machine block entry: " + part);
    }
  }
  if (first) throw std::invalid_argument("empty machine block");
  return local;
}

// ---------------------------------------------------------------------------
// instruction text
// ---------------------------------------------------------------------------

namespace {

const char* kIntro[4] = {
    "You are %A in a team coloring task. Pick one color from: %D.",
    "You play the role of %A; choose exactly one color out of %D.",
    "As %A you must settle on a single color among %D.",
    "You are %A. Your job is to select one color from the options %D.",
};

const char* kAvoid[4] = {
    "Do not end up with the same color as %N.",
    "Make sure your color differs from the one chosen by %N.",
    "Avoid matching the color picked by %N.",
    "Your color must not be identical to that of %N.",
};

const char* kMatch[4] = {
    "Try to end up with the same color as %N.",
    "Coordinate so that your color equals the one chosen by %N.",
    "Match the color picked by %N.",
    "Your color should be identical to that of %N.",
};

const char* kPref[4] = {
    "Your color preference from most to least preferred is: %P.",
    "You like the colors in this order, best first: %P.",
    "Ranked from favorite to least favorite, your colors are: %P.",
    "Preference order over colors (most preferred first): %P.",
};

const char* kChartRef[4] = {
    "Your color preferences are shown in the attached %K chart; higher means more preferred.",
    "See the attached %K chart for your color preferences (taller is better).",
    "The attached %K chart encodes how much you like each color; larger values are preferred.",
    "Consult the attached %K chart: the higher a color scores, the more you prefer it.",
};

const char* kMeetingIntro[4] = {
    "You are %A and you schedule the following meetings into one of %S time slots.",
    "As %A, assign each of your meetings below to one of the %S available slots.",
    "You act for %A; place every meeting listed here into one of %S slots.",
    "You are %A. Choose a slot (out of %S) for each meeting you own.",
};

const char* kMeetingPref[4] = {
    "Meeting %M (with %P) prefers slots in this order: %O.",
    "For meeting %M (participants: %P) the slot preference, best first, is %O.",
    "%M, attended by %P, should ideally land on %O, in that order of preference.",
    "Schedule %M (with %P) preferably early in the list %O.",
};

const char* kMeetingRule[4] = {
    "Two meetings sharing a participant must not occupy the same slot.",
    "Never place meetings with a common participant into one slot.",
    "Meetings that share an attendee need distinct slots.",
    "Overlapping meetings (same participant) may not use the same slot.",
};

std::string substitute(std::string templ,
                       const std::vector<std::pair<std::string, std::string>>& subs) {
  for (const auto& [key, value] : subs) {
    auto pos = templ.find(key);
    while (pos != std::string::npos) {
      templ.replace(pos, key.size(), value);
      pos = templ.find(key, pos + value.size());
    }
  }
  return templ;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

template <std::size_t N>
const char* pick(const char* const (&variants)[N], Rng& rng) {
  return variants[rng.below(static_cast<std::uint32_t>(N))];
}

std::vector<std::string> values_in_rank_order(const std::vector<std::string>& domain,
                                              const std::vector<int>& rank) {
  std::vector<std::string> out(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) out[rank[i]] = domain[i];
  return out;
}

VlTask gen_coloring(const std::string& benchmark, int n, int m, int domain_size,
                    std::uint64_t seed, const GenOptions& opt) {
  VlTask task;
  task.benchmark = benchmark;
  task.seed = seed;

  EdgeList edges = opt.scale_free ? gen_scale_free(n, m, seed)
                                  : gen_random_graph(n, m, seed);
  DcopInstance& inst = task.instance;
  for (int a = 0; a < n; ++a) {
    inst.agents.push_back("a" + std::to_string(a));
    inst.variables.push_back("x" + std::to_string(a));
    inst.owner.push_back(a);
    inst.domains.push_back(color_names(domain_size));
  }
  inst.edges = edges;
  task.truth = gen_ground_truth(edges, n, domain_size, opt.avoid_fraction, seed);
  apply_oracle_tables(inst, task.truth);
  inst.finalize();

  const bool visual = benchmark == "vldgc";
  for (int a = 0; a < n; ++a) {
    Rng rng = stream(seed, StreamTag::Instruction, a);
    InstructionDoc doc;
    std::vector<std::string> sentences;
    sentences.push_back(substitute(
        pick(kIntro, rng),
        {{"%A", "agent " + inst.agents[a]}, {"%D", join(inst.domains[a], ", ")}}));
    for (int e : inst.incident[a]) {
      int w = inst.other_end(e, a);
      const char* templ = task.truth.relation[e] == Relation::Avoid
                              ? pick(kAvoid, rng)
                              : pick(kMatch, rng);
      sentences.push_back(substitute(templ, {{"%N", "agent " + inst.agents[w]}}));
    }
    if (visual) {
      ChartSpec spec;
      const std::uint32_t kind = rng.below(3);
      spec.kind = kind == 0   ? ChartSpec::Kind::Bar
                  : kind == 1 ? ChartSpec::Kind::Line
                              : ChartSpec::Kind::Histogram;
      spec.title = "Color preferences of agent " + inst.agents[a];
      spec.x_label = "color";
      spec.y_label = "preference";
      for (int d = 0; d < domain_size; ++d) {
        const int mag = (domain_size - task.truth.rank[a][d]) * 10 +
                        static_cast<int>(rng.below(5));
        spec.series.emplace_back(inst.domains[a][d], mag);
      }
      spec.validate();
      sentences.push_back(substitute(pick(kChartRef, rng),
                                     {{"%K", chart_kind_name(spec.kind)}}));
      doc.chart = std::move(spec);
    } else {
      sentences.push_back(substitute(
          pick(kPref, rng),
          {{"%P", join(values_in_rank_order(inst.domains[a], task.truth.rank[a]),
                       ", ")}}));
    }
    doc.text = join(sentences, " ");
    task.instructions.push_back(std::move(doc));
  }
  if (opt.machine_block)
    for (int a = 0; a < n; ++a)
      task.instructions[a].machine_block = encode_machine_block(task, a);
  return task;
}

}  // namespace

VlTask gen_ldgc(int n, int m, int domain_size, std::uint64_t seed,
                const GenOptions& opt) {
  return gen_coloring("ldgc", n, m, domain_size, seed, opt);
}

VlTask gen_vldgc(int n, int m, int domain_size, std::uint64_t seed,
                 const GenOptions& opt) {
  return gen_coloring("vldgc", n, m, domain_size, seed, opt);
}

VlTask gen_ldms(int num_agents, int slot_count, std::uint64_t seed,
                const GenOptions& opt) {
  if (slot_count < 2) throw std::invalid_argument("slot count must be >= 2");
  if (num_agents < 2) throw std::invalid_argument("need at least 2 agents");

  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng = stream(seed, StreamTag::Meeting, attempt);
    std::vector<int> meeting_owner;
    std::vector<std::vector<int>> participants;
    for (int a = 0; a < num_agents; ++a) {
      const int count = 1 + static_cast<int>(rng.below(3));
      for (int k = 0; k < count; ++k) {
        std::set<int> who{a};
        const int extra = 1 + static_cast<int>(rng.below(3));
        int guard = 0;
        while (static_cast<int>(who.size()) < 1 + extra && guard++ < 100)
          who.insert(static_cast<int>(rng.below(static_cast<std::uint32_t>(num_agents))));
        meeting_owner.push_back(a);
        participants.emplace_back(who.begin(), who.end());
      }
    }
    const int nm = static_cast<int>(meeting_owner.size());
    EdgeList edges;
    for (int i = 0; i < nm; ++i)
      for (int j = i + 1; j < nm; ++j) {
        bool share = false;
        for (int p : participants[i])
          if (std::find(participants[j].begin(), participants[j].end(), p) !=
              participants[j].end()) {
            share = true;
            break;
          }
        if (share) edges.emplace_back(i, j);
      }
    if (!connected(nm, edges)) continue;

    VlTask task;
    task.benchmark = "ldms";
    task.seed = seed;
    DcopInstance& inst = task.instance;
    for (int a = 0; a < num_agents; ++a) inst.agents.push_back("a" + std::to_string(a));
    for (int v = 0; v < nm; ++v) {
      inst.variables.push_back("m" + std::to_string(v));
      inst.owner.push_back(meeting_owner[v]);
      inst.domains.push_back(slot_names(slot_count));
    }
    inst.edges = edges;
    task.truth = gen_ground_truth(edges, nm, slot_count, 1.0, seed);
    std::fill(task.truth.relation.begin(), task.truth.relation.end(),
              Relation::NotEqual);
    // wide slot ranges need a heavier clash penalty to stay dominant
    const Cost max_pref = 2 * (static_cast<Cost>(slot_count) - 1);
    if (task.truth.violation_weight <= max_pref)
      task.truth.violation_weight = max_pref + 1;
    apply_oracle_tables(inst, task.truth);
    inst.finalize();
    task.participants = participants;

    for (int a = 0; a < num_agents; ++a) {
      Rng irng = stream(seed, StreamTag::Instruction, a);
      InstructionDoc doc;
      std::vector<std::string> sentences;
      sentences.push_back(substitute(pick(kMeetingIntro, irng),
                                     {{"%A", "agent " + inst.agents[a]},
                                      {"%S", std::to_string(slot_count)}}));
      for (int v : inst.owned[a]) {
        std::vector<std::string> names;
        for (int p : participants[v])
          if (p != a) names.push_back("agent " + inst.agents[p]);
        if (names.empty()) names.push_back("no one else");
        sentences.push_back(substitute(
            pick(kMeetingPref, irng),
            {{"%M", "meeting " + inst.variables[v]},
             {"%P", join(names, ", ")},
             {"%O",
              join(values_in_rank_order(inst.domains[v], task.truth.rank[v]),
                   ", ")}}));
      }
      sentences.push_back(pick(kMeetingRule, irng));
      doc.text = join(sentences, " ");
      task.instructions.push_back(std::move(doc));
    }
    if (opt.machine_block)
      for (int a = 0; a < num_agents; ++a)
        task.instructions[a].machine_block = encode_machine_block(task, a);
    return task;
  }
  throw std::runtime_error("could not sample a connected meeting problem");
}

VlTask gen_task(const std::string& benchmark, int n, int m, int domain_size,
                std::uint64_t seed, const GenOptions& opt) {
  if (benchmark == "ldgc") return gen_ldgc(n, m, domain_size, seed, opt);
  if (benchmark == "vldgc") return gen_vldgc(n, m, domain_size, seed, opt);
  if (benchmark == "ldms") return gen_ldms(n, domain_size, seed, opt);
  throw std::invalid_argument("unknown benchmark: " + benchmark);
}

}  // namespace vldcop
