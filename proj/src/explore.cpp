#include <algorithm>
#include <unordered_set>

#include "crnkit/analysis.hpp"
#include "crnkit/io.hpp"

namespace crnkit {

Configuration ReachGraph::config(std::size_t i) const {
  Configuration c;
  for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; k += 2) {
    c.set(SpeciesId{data_[k]}, data_[k + 1]);
  }
  return c;
}

std::uint64_t ReachGraph::count(std::size_t i, SpeciesId s) const {
  for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; k += 2) {
    if (data_[k] == s.value) return data_[k + 1];
    if (data_[k] > s.value) break;
  }
  return 0;
}

std::uint64_t ReachGraph::total(std::size_t i) const {
  std::uint64_t n = 0;
  for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; k += 2) n += data_[k + 1];
  return n;
}

std::span<const ReachGraph::Edge> ReachGraph::successors(std::size_t i) const {
  return std::span<const Edge>(edges_).subspan(edge_offsets_[i],
                                               edge_offsets_[i + 1] - edge_offsets_[i]);
}

std::optional<std::size_t> ReachGraph::find(const Configuration& c) const {
  std::vector<std::uint32_t> packed;
  for (const auto& [s, n] : c.entries()) {
    if (n > std::numeric_limits<std::uint32_t>::max()) return std::nullopt;
    packed.push_back(s.value);
    packed.push_back(static_cast<std::uint32_t>(n));
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (offsets_[i + 1] - offsets_[i] == packed.size() &&
        std::equal(packed.begin(), packed.end(), data_.begin() + offsets_[i])) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<PathStep> ReachGraph::path_to(std::size_t i) const {
  std::vector<PathStep> path;
  while (i != 0) {
    path.push_back({parent_reaction_[i], config(i)});
    i = parent_[i];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

struct ExploreAccess {
  static ReachGraph build(const Crn& crn, const Configuration& init, const ExploreCaps& caps,
                          const std::function<bool(const ReachGraph&, std::size_t)>& visit,
                          bool prune_covered);
};

namespace {

constexpr std::uint64_t kPackedMax = std::numeric_limits<std::uint32_t>::max();

struct NodeHash {
  const ReachGraph* g;
  const std::vector<std::uint32_t>* data;
  const std::vector<std::size_t>* offsets;
  std::size_t operator()(std::uint32_t i) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t k = (*offsets)[i]; k < (*offsets)[i + 1]; ++k) {
      h ^= (*data)[k];
      h *= 1099511628211ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

struct NodeEq {
  const std::vector<std::uint32_t>* data;
  const std::vector<std::size_t>* offsets;
  bool operator()(std::uint32_t a, std::uint32_t b) const noexcept {
    const auto la = (*offsets)[a + 1] - (*offsets)[a];
    const auto lb = (*offsets)[b + 1] - (*offsets)[b];
    if (la != lb) return false;
    return std::equal(data->begin() + (*offsets)[a], data->begin() + (*offsets)[a + 1],
                      data->begin() + (*offsets)[b]);
  }
};

bool packed_leq(const std::uint32_t* a, std::size_t la, const std::uint32_t* b,
                std::size_t lb) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < la; i += 2) {
    while (j < lb && b[j] < a[i]) j += 2;
    if (j >= lb || b[j] != a[i] || b[j + 1] < a[i + 1]) return false;
  }
  return true;
}

}  // namespace

ReachGraph ExploreAccess::build(const Crn& crn, const Configuration& init,
                                const ExploreCaps& caps,
                                const std::function<bool(const ReachGraph&, std::size_t)>& visit,
                                bool prune_covered) {
  ReachGraph g;
  g.crn_ = &crn;
  auto fail = [&g](const char* what) {
    if (!g.truncated_) g.cap_hit_ = what;
    g.truncated_ = true;
  };

  const std::size_t nspecies = crn.species_count();
  std::vector<std::uint64_t> work(nspecies, 0);

  for (const auto& [s, n] : init.entries()) {
    if (s.value >= nspecies) throw UnknownSpecies("configuration species not in network");
    if (n > kPackedMax) throw ResourceLimit("initial count exceeds the explorer's range");
    g.data_.push_back(s.value);
    g.data_.push_back(static_cast<std::uint32_t>(n));
  }
  g.offsets_.push_back(g.data_.size());
  g.depth_.push_back(0);
  g.parent_.push_back(0);
  g.parent_reaction_.push_back(0);
  g.expanded_.push_back(0);

  NodeHash hash{&g, &g.data_, &g.offsets_};
  NodeEq eq{&g.data_, &g.offsets_};
  std::unordered_set<std::uint32_t, NodeHash, NodeEq> seen(1024, hash, eq);
  seen.insert(0);

  bool stop = visit && visit(g, 0);
  if (init.total() > caps.max_total_count) {
    fail("max_total_count");
    stop = true;
  }

  // Precomputed reaction data over plain indices.
  struct Rx {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> need;
    std::vector<std::pair<std::uint32_t, std::int64_t>> delta;
  };
  std::vector<Rx> rxs(crn.size());
  for (std::size_t r = 0; r < crn.size(); ++r) {
    const Reaction& rx = crn.reaction(r);
    for (const auto& t : rx.reactants()) rxs[r].need.emplace_back(t.species.value, t.coef);
    for (std::uint32_t s = 0; s < nspecies; ++s) {
      const auto d = rx.delta(SpeciesId{s});
      if (d != 0) rxs[r].delta.emplace_back(s, d);
    }
  }

  std::size_t next = 0;
  while (!stop && next < g.size()) {
    const std::size_t cur = next++;
    g.frontier_peak_ = std::max(g.frontier_peak_, g.size() - cur);
    for (std::size_t k = g.offsets_[cur]; k < g.offsets_[cur + 1]; k += 2) {
      work[g.data_[k]] = g.data_[k + 1];
    }
    const bool at_depth_cap = g.depth_[cur] >= caps.max_depth;
    bool expanded = true;
    for (std::size_t r = 0; r < rxs.size() && !stop; ++r) {
      bool ok = true;
      for (const auto& [s, c] : rxs[r].need) {
        if (work[s] < c) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (at_depth_cap) {
        fail("max_depth");
        expanded = false;
        break;
      }
      for (const auto& [s, d] : rxs[r].delta) work[s] += d;
      // Pack the successor directly from work over the touched support.
      const std::size_t start = g.data_.size();
      std::uint64_t tot = 0;
      bool overflow = false;
      {
        // Merge the parent's support with the reaction's touched species.
        std::size_t a = g.offsets_[cur];
        const std::size_t aend = g.offsets_[cur + 1];
        std::size_t b = 0;
        const auto& dl = rxs[r].delta;
        while (a < aend || b < dl.size()) {
          std::uint32_t s;
          if (b >= dl.size() || (a < aend && g.data_[a] < dl[b].first)) {
            s = g.data_[a];
            a += 2;
          } else if (a >= aend || dl[b].first < g.data_[a]) {
            s = dl[b].first;
            ++b;
          } else {
            s = g.data_[a];
            a += 2;
            ++b;
          }
          const std::uint64_t v = work[s];
          if (v == 0) continue;
          if (v > kPackedMax) overflow = true;
          tot += v;
          g.data_.push_back(s);
          g.data_.push_back(static_cast<std::uint32_t>(v));
        }
      }
      for (const auto& [s, d] : rxs[r].delta) work[s] -= d;

      auto discard = [&] { g.data_.resize(start); };
      if (overflow || tot > caps.max_total_count) {
        discard();
        fail(overflow ? "count overflow" : "max_total_count");
        expanded = false;
        continue;
      }
      g.offsets_.push_back(g.data_.size());
      const auto cand = static_cast<std::uint32_t>(g.size() - 1);
      auto it = seen.find(cand);
      if (it != seen.end()) {
        g.offsets_.pop_back();
        discard();
        g.edges_.push_back({static_cast<std::uint32_t>(r), *it});
        continue;
      }
      if (prune_covered) {
        bool covered = false;
        const std::uint32_t* cd = g.data_.data() + start;
        const std::size_t cl = g.data_.size() - start;
        for (std::size_t j = 0; j < cand && !covered; ++j) {
          covered = packed_leq(cd, cl, g.data_.data() + g.offsets_[j],
                               g.offsets_[j + 1] - g.offsets_[j]);
        }
        if (covered) {
          g.offsets_.pop_back();
          discard();
          continue;
        }
      }
      if (g.size() - 1 >= caps.max_configs) {
        g.offsets_.pop_back();
        discard();
        fail("max_configs");
        expanded = false;
        continue;
      }
      seen.insert(cand);
      g.depth_.push_back(g.depth_[cur] + 1);
      g.parent_.push_back(static_cast<std::uint32_t>(cur));
      g.parent_reaction_.push_back(static_cast<std::uint32_t>(r));
      g.expanded_.push_back(0);
      g.edges_.push_back({static_cast<std::uint32_t>(r), cand});
      if (visit && visit(g, cand)) stop = true;
    }
    for (std::size_t k = g.offsets_[cur]; k < g.offsets_[cur + 1]; k += 2) work[g.data_[k]] = 0;
    g.expanded_[cur] = expanded ? 1 : 0;
    g.edge_offsets_.push_back(g.edges_.size());
  }
  while (g.edge_offsets_.size() < g.size() + 1) g.edge_offsets_.push_back(g.edges_.size());
  return g;
}

ReachGraph reachable(const Crn& crn, const Configuration& init, const ExploreCaps& caps,
                     const std::function<bool(const ReachGraph&, std::size_t)>& visit) {
  return ExploreAccess::build(crn, init, caps, visit, false);
}

Condensation condense(const ReachGraph& g) {
  // Iterative Tarjan.
  const std::size_t n = g.size();
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  Condensation out;
  out.component.assign(n, kUnset);
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<char> on_stack(n, 0);
  struct Frame {
    std::uint32_t node;
    std::uint32_t edge;
  };
  std::vector<Frame> call;
  std::uint32_t counter = 0;
  std::uint32_t comps = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({static_cast<std::uint32_t>(root), 0});
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<std::uint32_t>(root));
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto succ = g.successors(f.node);
      if (f.edge < succ.size()) {
        const std::uint32_t w = succ[f.edge++].target;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const std::uint32_t v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        while (true) {
          const std::uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.component[w] = comps;
          if (w == v) break;
        }
        ++comps;
      }
    }
  }
  out.components = comps;
  return out;
}

namespace {

Verdict truncated(const ReachGraph& g) {
  Verdict v;
  v.status = Status::Truncated;
  v.detail = "cap hit: " + g.cap_hit();
  v.configs_explored = g.size();
  v.frontier_peak = g.frontier_peak();
  return v;
}

Verdict fails(const ReachGraph& g, std::size_t node, std::string detail) {
  Verdict v;
  v.status = Status::Fails;
  v.witness = g.config(node);
  v.path = g.path_to(node);
  v.detail = std::move(detail);
  v.configs_explored = g.size();
  v.frontier_peak = g.frontier_peak();
  return v;
}

Verdict holds(const ReachGraph& g) {
  Verdict v;
  v.configs_explored = g.size();
  v.frontier_peak = g.frontier_peak();
  return v;
}

/// Per-component facts over the closure of each component.
struct ClosureFacts {
  Condensation cond;
  std::vector<std::uint64_t> min_out, max_out;  // output count over the closure
  std::vector<std::uint64_t> min_halt;          // halt count over the closure
  std::vector<char> reach_good;                 // reaches a stable component with value x
};

ClosureFacts closure_facts(const ReachGraph& g, SpeciesId output, std::optional<SpeciesId> halt,
                           std::optional<Count> x) {
  ClosureFacts f;
  f.cond = condense(g);
  const std::size_t c = f.cond.components;
  f.min_out.assign(c, std::numeric_limits<std::uint64_t>::max());
  f.max_out.assign(c, 0);
  f.min_halt.assign(c, std::numeric_limits<std::uint64_t>::max());
  f.reach_good.assign(c, 0);
  // Bucket nodes by component.
  std::vector<std::size_t> start(c + 1, 0);
  for (auto comp : f.cond.component) ++start[comp + 1];
  for (std::size_t i = 0; i < c; ++i) start[i + 1] += start[i];
  std::vector<std::uint32_t> nodes(g.size());
  {
    auto fill = start;
    for (std::size_t v = 0; v < g.size(); ++v) {
      nodes[fill[f.cond.component[v]]++] = static_cast<std::uint32_t>(v);
    }
  }
  // Successor components carry smaller ids, so increasing order is safe.
  for (std::size_t comp = 0; comp < c; ++comp) {
    for (std::size_t k = start[comp]; k < start[comp + 1]; ++k) {
      const auto v = nodes[k];
      const auto y = g.count(v, output);
      f.min_out[comp] = std::min(f.min_out[comp], y);
      f.max_out[comp] = std::max(f.max_out[comp], y);
      if (halt) f.min_halt[comp] = std::min(f.min_halt[comp], g.count(v, *halt));
      for (const auto& e : g.successors(v)) {
        const auto t = f.cond.component[e.target];
        if (t == comp) continue;
        f.min_out[comp] = std::min(f.min_out[comp], f.min_out[t]);
        f.max_out[comp] = std::max(f.max_out[comp], f.max_out[t]);
        f.min_halt[comp] = std::min(f.min_halt[comp], f.min_halt[t]);
        f.reach_good[comp] |= f.reach_good[t];
      }
    }
    if (x && f.min_out[comp] == f.max_out[comp] && Count(f.min_out[comp]) == *x) {
      f.reach_good[comp] = 1;
    }
  }
  return f;
}

}  // namespace

Verdict is_output_stable(const Crn& crn, const Configuration& c, SpeciesId output,
                         const ExploreCaps& caps) {
  const Count y0 = c.get(output);
  std::optional<std::size_t> bad;
  auto g = reachable(crn, c, caps, [&](const ReachGraph& gr, std::size_t i) {
    if (Count(gr.count(i, output)) != y0) {
      bad = i;
      return true;
    }
    return false;
  });
  if (bad) {
    return fails(g, *bad, "output count changes from " + to_string(y0) + " to " +
                              std::to_string(g.count(*bad, output)));
  }
  if (g.truncated()) return truncated(g);
  return holds(g);
}

Verdict stably_computes(const Crn& crn, const Configuration& init, SpeciesId output,
                        const Count& x, const ExploreCaps& caps) {
  auto g = reachable(crn, init, caps);
  if (g.truncated()) return truncated(g);
  auto f = closure_facts(g, output, std::nullopt, x);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!f.reach_good[f.cond.component[v]]) {
      return fails(g, v, "no output-stable configuration with output " + to_string(x) +
                             " is reachable");
    }
  }
  return holds(g);
}

Verdict halting_valid(const Crn& crn, const Configuration& init, SpeciesId halt,
                      SpeciesId output, const ExploreCaps& caps) {
  auto g = reachable(crn, init, caps);
  if (g.truncated()) return truncated(g);
  auto f = closure_facts(g, output, halt, std::nullopt);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.count(v, halt) == 0) continue;
    const auto comp = f.cond.component[v];
    if (f.min_out[comp] != f.max_out[comp]) {
      return fails(g, v, "halting species present but output is not stable");
    }
    if (f.min_halt[comp] == 0) {
      return fails(g, v, "halting species can disappear");
    }
  }
  return holds(g);
}

Verdict haltingly_computes(const Crn& crn, const Configuration& init, SpeciesId output,
                           SpeciesId halt, const Count& x, const ExploreCaps& caps) {
  auto g = reachable(crn, init, caps);
  if (g.truncated()) return truncated(g);
  auto f = closure_facts(g, output, halt, x);
  bool halted = false;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto comp = f.cond.component[v];
    if (!f.reach_good[comp]) {
      return fails(g, v, "no output-stable configuration with output " + to_string(x) +
                             " is reachable");
    }
    if (g.count(v, halt) == 0) continue;
    halted = true;
    if (f.min_out[comp] != f.max_out[comp]) {
      return fails(g, v, "halting species present but output is not stable");
    }
    if (f.min_halt[comp] == 0) return fails(g, v, "halting species can disappear");
  }
  if (!halted) {
    std::size_t last = g.size() - 1;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (g.successors(v).empty()) {
        last = v;
        break;
      }
    }
    return fails(g, last, "halting species is never produced");
  }
  return holds(g);
}

Verdict coverability(const Crn& crn, const Configuration& init, const Configuration& target,
                     const ExploreCaps& caps, const CoverOptions& opts) {
  std::optional<std::size_t> hit;
  auto g = ExploreAccess::build(
      crn, init, caps,
      [&](const ReachGraph& gr, std::size_t i) {
        for (const auto& [s, n] : target.entries()) {
          if (Count(gr.count(i, s)) < n) return false;
        }
        hit = i;
        return true;
      },
      opts.prune_covered);
  if (hit) {
    Verdict v = holds(g);
    v.witness = g.config(*hit);
    v.path = g.path_to(*hit);
    return v;
  }
  if (g.truncated()) return truncated(g);
  Verdict v;
  v.status = Status::Fails;
  v.detail = "target not coverable; closure exhausted";
  v.configs_explored = g.size();
  v.frontier_peak = g.frontier_peak();
  // The witness for a negative answer is the largest-total configuration seen.
  std::size_t best = 0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g.total(i) > g.total(best)) best = i;
  }
  v.witness = g.config(best);
  return v;
}

bool replay(const Crn& crn, const Configuration& init, const std::vector<PathStep>& path) {
  Configuration c = init;
  for (const auto& step : path) {
    if (step.reaction >= crn.size() || !applicable(c, crn.reaction(step.reaction))) return false;
    c = apply(c, crn.reaction(step.reaction));
    if (!(c == step.result)) return false;
  }
  return true;
}

nlohmann::json to_json(const Crn& crn, const Verdict& v) {
  nlohmann::json j;
  j["status"] = to_string(v.status);
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (v.witness) j["witness"] = format_configuration(crn, *v.witness);
  if (!v.path.empty()) {
    auto p = nlohmann::json::array();
    for (const auto& s : v.path) {
      p.push_back({{"reaction", s.reaction}, {"config", format_configuration(crn, s.result)}});
    }
    j["path"] = std::move(p);
  }
  j["configs_explored"] = v.configs_explored;
  j["frontier_peak"] = v.frontier_peak;
  if (v.runs) j["runs"] = v.runs;
  return j;
}

}  // namespace crnkit
