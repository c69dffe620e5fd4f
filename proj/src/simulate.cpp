#include <algorithm>
#include <bit>

#include "crnkit/analysis.hpp"

namespace crnkit {

const char* to_string(Status s) {
  switch (s) {
    case Status::Holds: return "Holds";
    case Status::Fails: return "Fails";
    case Status::Truncated: return "Truncated";
  }
  return "?";
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Deadlock: return "deadlock";
    case StopReason::Stopped: return "stop";
    case StopReason::StepCap: return "step-cap";
  }
  return "?";
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Lemire's multiply-shift rejection method.
  std::uint64_t x = gen_();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t t = -n % n;
    while (low < t) {
      x = gen_();
      m = static_cast<unsigned __int128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Simulator::Simulator(const Crn& crn) : crn_(&crn) {
  const std::size_t n = crn.species_count();
  const std::size_t m = crn.size();
  counts_.assign(n, 0);
  needs_.resize(m);
  deltas_.resize(m);
  dependents_.resize(n);
  for (std::size_t r = 0; r < m; ++r) {
    const Reaction& rx = crn.reaction(r);
    for (const auto& t : rx.reactants()) {
      needs_[r].emplace_back(t.species.value, t.coef);
      dependents_[t.species.value].push_back(static_cast<std::uint32_t>(r));
    }
    std::vector<std::uint32_t> touched;
    for (const auto& t : rx.reactants()) touched.push_back(t.species.value);
    for (const auto& t : rx.products()) touched.push_back(t.species.value);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (auto s : touched) {
      const std::int64_t d = rx.delta(SpeciesId{s});
      if (d != 0) deltas_[r].emplace_back(s, d);
    }
  }
  on_.assign(m, 0);
  tree_.assign(m + 1, 0);
  tree_top_ = m == 0 ? 1 : std::bit_floor(m);
  firings_.assign(m, 0);
}

void Simulator::reset(const Configuration& init) {
  static const Count kLimit = Count(1) << 62;
  std::fill(counts_.begin(), counts_.end(), 0);
  for (const auto& [s, c] : init.entries()) {
    if (s.value >= counts_.size()) throw UnknownSpecies("configuration species not in network");
    if (c > kLimit) throw ResourceLimit("count too large for the dense simulator");
    counts_[s.value] = static_cast<std::int64_t>(c);
  }
  std::fill(on_.begin(), on_.end(), 0);
  std::fill(tree_.begin(), tree_.end(), 0);
  fenwick_total_ = 0;
  for (std::size_t r = 0; r < on_.size(); ++r) refresh(r);
  steps_ = 0;
  std::fill(firings_.begin(), firings_.end(), 0);
}

Configuration Simulator::configuration() const {
  Configuration c;
  for (std::size_t s = 0; s < counts_.size(); ++s) {
    if (counts_[s] != 0) c.set(SpeciesId{static_cast<std::uint32_t>(s)}, counts_[s]);
  }
  return c;
}

bool Simulator::applicable(std::size_t r) const {
  for (const auto& [s, c] : needs_[r]) {
    if (counts_[s] < static_cast<std::int64_t>(c)) return false;
  }
  return true;
}

void Simulator::refresh(std::size_t r) {
  const char now = applicable(r) ? 1 : 0;
  if (now == on_[r]) return;
  on_[r] = now;
  fenwick_add(r, now ? 1 : -1);
}

void Simulator::fenwick_add(std::size_t i, int delta) {
  fenwick_total_ += delta;
  for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
}

std::size_t Simulator::fenwick_select(std::size_t k) const {
  // Smallest index whose prefix sum exceeds k.
  std::size_t pos = 0;
  for (std::size_t step = tree_top_; step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next < tree_.size() && static_cast<std::size_t>(tree_[next]) <= k) {
      pos = next;
      k -= tree_[next];
    }
  }
  return pos;
}

void Simulator::fire(std::size_t r) {
  for (const auto& [s, d] : deltas_[r]) counts_[s] += d;
  for (const auto& [s, d] : deltas_[r]) {
    // Coefficients never exceed kMaxArity, so larger counts cannot toggle anything.
    if (std::min(counts_[s], counts_[s] - d) >= static_cast<std::int64_t>(kMaxArity)) continue;
    for (auto dep : dependents_[s]) refresh(dep);
  }
  ++steps_;
  ++firings_[r];
}

std::optional<std::size_t> Simulator::step(Rng& rng) {
  if (fenwick_total_ == 0) return std::nullopt;
  const std::size_t r = fenwick_select(rng.below(fenwick_total_));
  fire(r);
  return r;
}

SimResult simulate(const Crn& crn, const Configuration& init, const SimOptions& opts) {
  Simulator sim(crn);
  sim.reset(init);
  Rng rng(opts.seed);
  SimResult out;
  auto stopped = [&] {
    if (opts.stop_on && sim.count(*opts.stop_on) > 0) return true;
    return opts.stop && opts.stop(sim);
  };
  out.reason = StopReason::StepCap;
  if (stopped()) {
    out.reason = StopReason::Stopped;
  } else {
    while (sim.steps() < opts.max_steps) {
      auto r = sim.step(rng);
      if (!r) {
        out.reason = StopReason::Deadlock;
        break;
      }
      if (opts.record_trace) out.trace.push_back(*r);
      if (stopped()) {
        out.reason = StopReason::Stopped;
        break;
      }
    }
    if (out.reason == StopReason::StepCap && sim.enabled_count() == 0) {
      out.reason = StopReason::Deadlock;
    }
  }
  out.final = sim.configuration();
  out.steps = sim.steps();
  out.firings = sim.firings();
  return out;
}

}  // namespace crnkit
