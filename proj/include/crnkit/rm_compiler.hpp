#pragma once

// Register machine to CRN compilation with bounded registers.
//
// Register r with bound b is held by species r.A (active, the value) and r.I
// (inactive, b minus the value); the output register's active species is Y.
// Each instruction state is a leader species; all halts share H.
//
// Zero checks come in three flavours:
//   ladder  reversible doubling ladder 2 r.I <-> r.Cn, 2 r.Cm <-> r.C(m-1),
//           jump S + r.C1 -> S' + r.C1
//   gated   the same ladder, but collapsing only while a leader-released
//           catalyst r.K is present and splitting only under r.J
//   dexp    consumption of 2^(2^k) inactive tokens by a doubly exponential
//           counter box, committed and then refilled by a production box

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crnkit/analysis.hpp"
#include "crnkit/core.hpp"
#include "crnkit/io.hpp"
#include "crnkit/machines.hpp"

namespace crnkit {

enum class CounterMode { Ladder, Gated, Dexp };

const char* to_string(CounterMode m);

/// Ladder and gated: bound 2^exponent. Dexp: bound 2^(2^exponent).
struct BoundSpec {
  CounterMode mode = CounterMode::Gated;
  unsigned exponent = 1;

  Count bound() const;
  /// e.g. "ladder:3"
  std::string to_string() const;
  /// Smallest bound of this mode that is at least max(value, 1).
  static BoundSpec covering(CounterMode mode, const Count& value);

  bool operator==(const BoundSpec&) const = default;
};

/// A counter mode with an optional fixed exponent, e.g. "dexp:1" or "gated".
struct CounterChoice {
  CounterMode mode = CounterMode::Gated;
  std::optional<unsigned> exponent;

  /// Throws std::invalid_argument.
  static CounterChoice parse(std::string_view text);
  std::string to_string() const;
};

/// Bounds for every register: with a fixed exponent every register gets it
/// (BoundTooSmall when a maximum does not fit), otherwise the smallest
/// covering bound per register.
std::map<std::string, BoundSpec> choose_bounds(const Registers& maxima, const CounterChoice& c);

/// Runs prog from zero registers and returns each register's peak value.
Registers certified_maxima(const RegisterMachineProgram& prog,
                           std::uint64_t max_steps = 1'000'000'000);

struct RegisterInfo {
  std::string active;
  std::string inactive;
  BoundSpec bound;
  std::vector<std::string> ladder;  // C1..Cn for ladder modes
};

struct CompileManifest {
  std::map<std::string, RegisterInfo> registers;
  std::vector<std::string> states;  // species per instruction index
  std::vector<std::string> leader_names;
  std::string leader = "L";
  std::string output = "Y";
  std::string halt = "H";
  std::string method;
  /// Free-form details (stage boundaries, bound certification, ...).
  nlohmann::json notes = nlohmann::json::object();

  LeaderSet leaders(const Crn& crn) const;
  Designated designated() const;
  nlohmann::json to_json() const;
  static CompileManifest from_json(const nlohmann::json& j);
};

struct CompiledCrn {
  Crn crn;
  CompileManifest manifest;

  /// {1 L}
  Configuration initial() const;
  /// Configuration just after initialization finishes, with the machine at
  /// state and the given register values (ladder tokens uncollapsed).
  Configuration at_state(std::size_t state, const Registers& values = {}) const;
  SpeciesId output() const { return crn.id(manifest.output); }
  SpeciesId halt() const { return crn.id(manifest.halt); }
  LeaderSet leaders() const { return manifest.leaders(crn); }
  void save(const std::string& path) const;
};

/// Species names used by a compilation. Everything except leader, output
/// and halt is prefixed, so several compilations can be merged.
struct CompileNames {
  std::string leader = "L";
  std::string output = "Y";
  std::string halt = "H";
  std::string prefix;

  /// A register already provisioned by an earlier compilation: its species
  /// are <stem>.I, <stem>.C1, ... and `active`, and it is not initialized.
  struct External {
    std::string stem;
    std::string active;
  };
  std::map<std::string, External> external;
};

/// Copies are lowered first. Throws UnboundedRegister when a register has no
/// bound and InvalidProgram for an invalid program.
CompiledCrn compile_rm(const RegisterMachineProgram& prog,
                       const std::map<std::string, BoundSpec>& bounds,
                       const CompileNames& names = {});

/// A piece of network with its leader species.
struct GadgetFragment {
  Crn crn;
  std::vector<std::string> leader_names;
};

/// One zero-branch site: state `from` moves to `to` when the register is 0.
struct JumpSite {
  std::string from;
  std::string to;
  std::string marker;  // intermediate species for gated and dexp gadgets
};

/// Ladder for register reg (species reg.I, reg.C1..reg.Cn) plus the jump
/// reaction of every site.
GadgetFragment build_ladder_zero_check(const std::string& reg, unsigned n,
                                       const std::vector<JumpSite>& sites);

/// Gated ladder: collapse under reg.K, split under reg.J. The split half and
/// the inc-site release reactions are emitted by build_gated_inc_sites.
GadgetFragment build_gated_zero_check(const std::string& reg, unsigned n,
                                      const std::vector<JumpSite>& sites);
GadgetFragment build_gated_inc_sites(const std::string& reg, unsigned n,
                                     const std::vector<JumpSite>& sites);

/// Commit gadget over the boxes "<reg>.cons" and "<reg>.prod".
GadgetFragment build_dexp_zero_check(const std::string& reg, unsigned k,
                                     const std::vector<JumpSite>& sites);

/// Fills each register's inactive species to its bound, one register after
/// another, then hands the leader to first_state.
GadgetFragment build_initializer(const std::vector<std::string>& registers,
                                 const std::map<std::string, BoundSpec>& bounds,
                                 const std::string& leader, const std::string& first_state,
                                 const std::string& prefix = {});

}  // namespace crnkit
