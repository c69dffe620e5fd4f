#pragma once

// Integer encoders: the binary baseline, the permutation pipeline and the
// program compiler, plus upper-bound reports on network size.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "crnkit/machines.hpp"
#include "crnkit/rm_compiler.hpp"

namespace crnkit {

enum class Step3Backend { DirectDecoder, TmPipeline };

struct EncodeOptions {
  std::optional<unsigned> k_override;
  CounterChoice counter{CounterMode::Gated, std::nullopt};
  Step3Backend step3 = Step3Backend::DirectDecoder;
  /// Run the register machine oracle to certify bounds when the encoded
  /// value m is at most this; larger instances rely on proven maxima.
  Count oracle_limit = Count(1) << 22;
};

/// X_i -> 2 X_(i+1) (+ Y when bit i is set), X_(n-1) -> Y. Stably computes x
/// from {1 X0}; it has no halting species. Throws std::invalid_argument for
/// x = 0.
CompiledCrn compile_binary(const Count& x);

/// The three-stage register machine behind compile_permutation.
struct PermutationPlan {
  Count x;
  unsigned k = 1;
  std::vector<unsigned> perm;
  Count m;                         // encode_counts_to_m(perm)
  RegisterMachineProgram program;  // generator, count encoder, decoder
  std::size_t step2_state = 0;     // first state of the count encoder
  std::size_t step3_state = 0;     // first state of the decoder
  Registers maxima;                // per register, including copy.aux
  std::string certification;       // "oracle" or "analytic"
};

/// Throws RankOutOfRange when k_override! <= x.
PermutationPlan plan_permutation(const Count& x, const EncodeOptions& opts = {});

/// Haltingly computes x from {1 L}. Throws BoundTooSmall when a fixed
/// counter exponent cannot hold a register.
CompiledCrn compile_permutation(const Count& x, const EncodeOptions& opts = {},
                                const CompileNames& names = {});

using Machine = std::variant<RegisterMachineProgram, TuringMachine>;

/// Stage 1 writes p as count of a transfer token P; stage 2 moves each P into
/// the machine's input register and runs the machine. The machine must halt
/// on p (checked with the oracle interpreters).
CompiledCrn compile_program(const Machine& machine, const Count& p, const EncodeOptions& opts = {});

/// Oracle result of running machine on p.
Count run_machine(const Machine& machine, const Count& p);

struct KsRow {
  std::string method;
  std::size_t reactions = 0;
  std::size_t species = 0;
  std::string counter;
};

/// Size of each requested construction for x, as upper bounds on the
/// smallest network computing x. Methods: "binary", "perm". Binary is
/// skipped for x = 0.
std::vector<KsRow> ks_upper_bound(const Count& x, const std::vector<std::string>& methods,
                                  const EncodeOptions& opts = {});
nlohmann::json to_json(const Count& x, const std::vector<KsRow>& rows);
std::string to_text(const Count& x, const std::vector<KsRow>& rows);

}  // namespace crnkit
