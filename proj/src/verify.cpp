#include <cmath>

#include "crnkit/analysis.hpp"
#include "crnkit/io.hpp"

namespace crnkit {

std::optional<std::size_t> check_leader_arity(const Crn& crn, const LeaderSet& leaders,
                                              LeaderRule rule) {
  for (std::size_t i = 0; i < crn.size(); ++i) {
    const Reaction& r = crn.reaction(i);
    std::uint32_t in = 0;
    std::uint32_t out = 0;
    for (const auto& t : r.reactants()) {
      if (leaders.contains(t.species)) in += t.coef;
    }
    for (const auto& t : r.products()) {
      if (leaders.contains(t.species)) out += t.coef;
    }
    const bool ok = (in == 1 && out == 1) ||
                    (rule == LeaderRule::AllowNeutral && in == 0 && out == 0);
    if (!ok) return i;
  }
  return std::nullopt;
}

Count leader_sum(const Configuration& c, const LeaderSet& leaders) {
  Count n = 0;
  for (const auto& [s, k] : c.entries()) {
    if (leaders.contains(s)) n += k;
  }
  return n;
}

Verdict well_led_invariance(const Crn& crn, const Configuration& init, const LeaderSet& leaders,
                            const WellLedOptions& opts) {
  if (leader_sum(init, leaders) != 1) {
    throw NotWellLed("initial configuration holds " + to_string(leader_sum(init, leaders)) +
                     " leaders");
  }
  Verdict v;
  if (auto bad = check_leader_arity(crn, leaders, opts.rule)) {
    v.status = Status::Fails;
    v.witness = init;
    v.detail = "reaction " + std::to_string(*bad) + " breaks the leader rule: " + crn.format(*bad);
    return v;
  }
  Simulator sim(crn);
  std::vector<std::uint32_t> leader_ids;
  for (auto s : leaders) {
    if (s.value < crn.species_count()) leader_ids.push_back(s.value);
  }
  for (std::uint64_t t = 0; t < opts.trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    sim.reset(init);
    for (std::uint64_t k = 0; k < opts.steps; ++k) {
      if (!sim.step(rng)) break;
      std::int64_t sum = 0;
      for (auto s : leader_ids) sum += sim.counts()[s];
      if (sum != 1) {
        v.status = Status::Fails;
        v.witness = sim.configuration();
        v.detail = "leader sum " + std::to_string(sum) + " after " +
                   std::to_string(sim.steps()) + " steps of trial " + std::to_string(t);
        return v;
      }
    }
    ++v.runs;
  }
  if (opts.exhaustive) {
    std::optional<std::size_t> bad;
    auto g = reachable(crn, init, *opts.exhaustive, [&](const ReachGraph& gr, std::size_t i) {
      std::uint64_t sum = 0;
      for (auto s : leader_ids) sum += gr.count(i, SpeciesId{s});
      if (sum != 1) {
        bad = i;
        return true;
      }
      return false;
    });
    v.configs_explored = g.size();
    v.frontier_peak = g.frontier_peak();
    if (bad) {
      v.status = Status::Fails;
      v.witness = g.config(*bad);
      v.path = g.path_to(*bad);
      v.detail = "reachable configuration is not well-led";
      return v;
    }
    if (g.truncated()) {
      v.status = Status::Truncated;
      v.detail = "cap hit: " + g.cap_hit();
    }
  }
  return v;
}

Verdict verify_stochastic(const Crn& crn, const Configuration& init, SpeciesId output,
                          std::optional<SpeciesId> halt, const Count& x,
                          const StochasticOptions& opts) {
  Verdict v;
  Simulator sim(crn);
  bool capped = false;
  const std::int64_t want = x > (Count(1) << 62) ? -1 : static_cast<std::int64_t>(x);
  for (std::uint64_t t = 0; t < opts.trials; ++t) {
    Rng rng(trial_seed(opts.seed, t));
    sim.reset(init);
    bool deadlock = false;
    // Phase 1: run until halt appears (or deadlock when there is no halt species).
    while (!(halt && sim.count(*halt) > 0)) {
      if (sim.steps() >= opts.max_steps) break;
      if (!sim.step(rng)) {
        deadlock = true;
        break;
      }
    }
    ++v.runs;
    const bool halted = halt ? sim.count(*halt) > 0 : deadlock;
    if (!halted) {
      if (deadlock) {
        v.status = Status::Fails;
        v.witness = sim.configuration();
        v.detail = "trial " + std::to_string(t) + " deadlocked without halting";
        return v;
      }
      capped = true;
      v.detail = "trial " + std::to_string(t) + " hit the step cap";
      continue;
    }
    const std::int64_t y = sim.count(output);
    if (y != want) {
      v.status = Status::Fails;
      v.witness = sim.configuration();
      v.detail = "trial " + std::to_string(t) + " halted with output " + std::to_string(y);
      return v;
    }
    for (std::uint64_t k = 0; k < opts.post_halt_steps; ++k) {
      if (!sim.step(rng)) break;
      if (sim.count(output) != y || (halt && sim.count(*halt) == 0)) {
        v.status = Status::Fails;
        v.witness = sim.configuration();
        v.detail = "trial " + std::to_string(t) + " changed after halting";
        return v;
      }
    }
  }
  if (capped) v.status = Status::Truncated;
  return v;
}

SizeReport size_report(const Crn& crn, std::size_t n_bits, std::string method,
                       std::string counter_mode) {
  SizeReport r;
  r.reactions = crn.size();
  r.species = crn.species_count();
  for (const auto& rx : crn.reactions()) {
    r.max_arity = std::max({r.max_arity, rx.reactant_arity(), rx.product_arity()});
  }
  r.n_bits = n_bits;
  if (n_bits >= 2) {
    const double n = static_cast<double>(n_bits);
    r.ratio = static_cast<double>(r.reactions) / (n / std::log2(n));
  }
  r.method = std::move(method);
  r.counter_mode = std::move(counter_mode);
  return r;
}

nlohmann::json to_json(const SizeReport& r) {
  return {{"reactions", r.reactions}, {"species", r.species},   {"max_arity", r.max_arity},
          {"n_bits", r.n_bits},       {"ratio", r.ratio},       {"method", r.method},
          {"counter_mode", r.counter_mode}};
}

}  // namespace crnkit
