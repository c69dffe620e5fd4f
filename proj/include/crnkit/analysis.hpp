#pragma once

// Execution and verification: seeded simulation, exhaustive reachability,
// output stability, stable and halting computation, coverability and the
// single-leader invariant.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "crnkit/core.hpp"

namespace crnkit {

enum class Status { Holds, Fails, Truncated };

const char* to_string(Status s);

struct ExploreCaps {
  std::size_t max_configs = 2'000'000;
  std::uint64_t max_total_count = 1'000'000;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
};

struct PathStep {
  std::size_t reaction;
  Configuration result;
};

struct Verdict {
  Status status = Status::Holds;
  std::optional<Configuration> witness;
  std::vector<PathStep> path;  // from the initial configuration to witness
  std::string detail;          // failure reason or the cap that was hit
  std::size_t configs_explored = 0;
  std::size_t frontier_peak = 0;
  std::uint64_t runs = 0;      // stochastic modes only

  bool holds() const { return status == Status::Holds; }
};

nlohmann::json to_json(const Crn& crn, const Verdict& v);

// ---------------------------------------------------------------------------
// Simulation

/// Seeded 64-bit generator with a portable bounded draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next() { return gen_(); }
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 gen_;
};

/// Independent stream seed for trial t of a batch.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

enum class StopReason { Deadlock, Stopped, StepCap };

const char* to_string(StopReason r);

/// Dense-count engine. Each step fires a reaction chosen uniformly among the
/// enabled ones; ties resolve by declaration order.
class Simulator {
 public:
  explicit Simulator(const Crn& crn);

  /// Throws ResourceLimit when a count does not fit the dense engine.
  void reset(const Configuration& init);

  std::int64_t count(SpeciesId s) const { return counts_[s.value]; }
  std::span<const std::int64_t> counts() const { return counts_; }
  Configuration configuration() const;

  std::size_t enabled_count() const { return fenwick_total_; }
  /// Fires one random enabled reaction; returns its index or nullopt on deadlock.
  std::optional<std::size_t> step(Rng& rng);
  void fire(std::size_t reaction);

  std::uint64_t steps() const { return steps_; }
  const std::vector<std::uint64_t>& firings() const { return firings_; }

 private:
  bool applicable(std::size_t r) const;
  void refresh(std::size_t r);
  void fenwick_add(std::size_t i, int delta);
  std::size_t fenwick_select(std::size_t k) const;

  const Crn* crn_;
  std::vector<std::int64_t> counts_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> needs_;   // (species, coef)
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> deltas_;   // (species, delta)
  std::vector<std::vector<std::uint32_t>> dependents_;  // species -> reactions reading it
  std::vector<char> on_;
  std::vector<std::int32_t> tree_;
  std::size_t fenwick_total_ = 0;
  std::size_t tree_top_ = 1;
  std::uint64_t steps_ = 0;
  std::vector<std::uint64_t> firings_;
};

struct SimOptions {
  std::uint64_t seed = 1;
  std::uint64_t max_steps = 1'000'000;
  std::optional<SpeciesId> stop_on;  // stop once this species is present
  std::function<bool(const Simulator&)> stop;
  bool record_trace = false;
};

struct SimResult {
  Configuration final;
  std::uint64_t steps = 0;
  StopReason reason = StopReason::Deadlock;
  std::vector<std::size_t> trace;
  std::vector<std::uint64_t> firings;  // per reaction
};

SimResult simulate(const Crn& crn, const Configuration& init, const SimOptions& opts);

// ---------------------------------------------------------------------------
// Exhaustive exploration

/// Breadth-first closure with edges labeled by reaction index. Counts are
/// stored packed, so a configuration with a count above 2^32 - 1 counts as a
/// cap hit.
class ReachGraph {
 public:
  std::size_t size() const { return offsets_.size() - 1; }
  Configuration config(std::size_t i) const;
  std::uint64_t count(std::size_t i, SpeciesId s) const;
  std::uint64_t total(std::size_t i) const;

  struct Edge {
    std::uint32_t reaction;
    std::uint32_t target;
  };
  std::span<const Edge> successors(std::size_t i) const;
  /// False for nodes that were discovered but not expanded because of a cap.
  bool expanded(std::size_t i) const { return expanded_[i] != 0; }
  std::size_t depth(std::size_t i) const { return depth_[i]; }

  std::optional<std::size_t> find(const Configuration& c) const;
  /// Path of (reaction, configuration) steps from the root to node i.
  std::vector<PathStep> path_to(std::size_t i) const;

  bool truncated() const { return truncated_; }
  const std::string& cap_hit() const { return cap_hit_; }
  std::size_t frontier_peak() const { return frontier_peak_; }

 private:
  friend struct ExploreAccess;

  const Crn* crn_ = nullptr;
  std::vector<std::uint32_t> data_;  // packed (species, count) pairs
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> edge_offsets_{0};
  std::vector<Edge> edges_;
  std::vector<char> expanded_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> parent_reaction_;
  bool truncated_ = false;
  std::string cap_hit_;
  std::size_t frontier_peak_ = 0;
};

/// Full closure of init. When visit returns true for a node, exploration
/// stops early (the graph is then partial but not marked truncated).
ReachGraph reachable(const Crn& crn, const Configuration& init, const ExploreCaps& caps = {},
                     const std::function<bool(const ReachGraph&, std::size_t)>& visit = {});

/// Strongly connected components; component ids are in reverse topological
/// order (successor components have smaller ids).
struct Condensation {
  std::vector<std::uint32_t> component;
  std::size_t components = 0;
};
Condensation condense(const ReachGraph& g);

Verdict is_output_stable(const Crn& crn, const Configuration& c, SpeciesId output,
                         const ExploreCaps& caps = {});

Verdict stably_computes(const Crn& crn, const Configuration& init, SpeciesId output,
                        const Count& x, const ExploreCaps& caps = {});

Verdict halting_valid(const Crn& crn, const Configuration& init, SpeciesId halt,
                      SpeciesId output, const ExploreCaps& caps = {});

Verdict haltingly_computes(const Crn& crn, const Configuration& init, SpeciesId output,
                           SpeciesId halt, const Count& x, const ExploreCaps& caps = {});

struct CoverOptions {
  /// Skip configurations covered by an already explored one. Complete for
  /// coverability because reachability is monotone.
  bool prune_covered = false;
};

Verdict coverability(const Crn& crn, const Configuration& init, const Configuration& target,
                     const ExploreCaps& caps = {}, const CoverOptions& opts = {});

/// Replays a witness path; true iff every step is applicable and yields the
/// recorded configuration.
bool replay(const Crn& crn, const Configuration& init, const std::vector<PathStep>& path);

// ---------------------------------------------------------------------------
// Leaders

using LeaderSet = std::set<SpeciesId>;

enum class LeaderRule {
  Strict,        // exactly one leader reactant and one leader product
  AllowNeutral,  // additionally accepts reactions with no leader at all
};

/// Index of the first reaction breaking the rule, or nullopt.
std::optional<std::size_t> check_leader_arity(const Crn& crn, const LeaderSet& leaders,
                                              LeaderRule rule = LeaderRule::Strict);

Count leader_sum(const Configuration& c, const LeaderSet& leaders);

struct WellLedOptions {
  std::uint64_t trials = 10;
  std::uint64_t steps = 10'000;
  std::uint64_t seed = 1;
  LeaderRule rule = LeaderRule::Strict;
  /// Also check every configuration of the reachable set under these caps.
  std::optional<ExploreCaps> exhaustive;
};

/// Throws NotWellLed when init does not hold exactly one leader.
Verdict well_led_invariance(const Crn& crn, const Configuration& init, const LeaderSet& leaders,
                            const WellLedOptions& opts = {});

// ---------------------------------------------------------------------------
// Stochastic verification and reports

struct StochasticOptions {
  std::uint64_t trials = 200;
  std::uint64_t seed = 1;
  std::uint64_t max_steps = 50'000'000;
  /// Steps simulated after the halting species appears.
  std::uint64_t post_halt_steps = 1000;
};

/// Runs trials until halt appears and checks the output equals x, then keeps
/// running to check the output and the halting species persist. Any trial
/// reaching the step cap makes the verdict Truncated.
Verdict verify_stochastic(const Crn& crn, const Configuration& init, SpeciesId output,
                          std::optional<SpeciesId> halt, const Count& x,
                          const StochasticOptions& opts = {});

struct SizeReport {
  std::size_t reactions = 0;
  std::size_t species = 0;
  std::uint32_t max_arity = 0;
  std::size_t n_bits = 0;
  double ratio = 0.0;  // reactions / (n / log2 n), 0 when n < 2
  std::string method;
  std::string counter_mode;
};

SizeReport size_report(const Crn& crn, std::size_t n_bits = 0, std::string method = {},
                       std::string counter_mode = {});
nlohmann::json to_json(const SizeReport& r);

}  // namespace crnkit
