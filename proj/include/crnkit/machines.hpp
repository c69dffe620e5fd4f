#pragma once

// Register machines, Turing machines, translations between them, and the
// Lehmer permutation codec used by the permutation encoder.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "crnkit/core.hpp"

namespace crnkit {

// ---------------------------------------------------------------------------
// Register machines

struct Inc {
  std::string reg;
  std::size_t next = 0;
  bool operator==(const Inc&) const = default;
};

struct Dec {
  std::string reg;
  std::size_t nonzero = 0;
  std::size_t zero = 0;
  bool operator==(const Dec&) const = default;
};

/// dst := dst + src, src unchanged.
struct Copy {
  std::string src;
  std::string dst;
  std::size_t next = 0;
  bool operator==(const Copy&) const = default;
};

struct Halt {
  bool operator==(const Halt&) const = default;
};

using Instruction = std::variant<Inc, Dec, Copy, Halt>;

struct RegisterMachineProgram {
  std::vector<Instruction> instructions;
  std::size_t initial_state = 0;
  std::vector<std::string> registers;  // declaration order
  std::string output_register;
  std::optional<std::string> input_register;

  /// Throws InvalidProgram.
  void validate() const;
  bool has_register(std::string_view name) const;
  /// Adds any register mentioned by an instruction but not declared.
  void collect_registers();

  /// Numbered instruction lines, e.g. "2: dec r1 -> 3 / 5".
  std::string to_text() const;
  static RegisterMachineProgram parse(std::string_view text);

  bool operator==(const RegisterMachineProgram&) const = default;
};

using Registers = std::map<std::string, Count>;

struct RmRunResult {
  Registers regs;
  std::size_t state = 0;
  std::uint64_t steps = 0;
  Registers max_values;  // peak value seen per register
};

/// Small-step interpreter. Throws BoundExceeded when a register would pass
/// bound, StepCap when max_steps instructions run without halting.
RmRunResult run_rm(const RegisterMachineProgram& prog, const Registers& init = {},
                   std::optional<Count> bound = std::nullopt,
                   std::uint64_t max_steps = 100'000'000);

/// Same as run_rm but stops before executing the instruction at state stop
/// (the state is returned in the result).
RmRunResult run_rm_until(const RegisterMachineProgram& prog, const Registers& init,
                         std::size_t stop, std::uint64_t max_steps = 100'000'000);

/// Builds programs with symbolic labels; all labels must be bound by build().
class ProgramBuilder {
 public:
  using Label = std::size_t;

  Label label();
  /// Binds l to the index of the next emitted instruction.
  void bind(Label l);
  /// Label bound to the next emitted instruction.
  Label here();
  /// Makes l resolve to wherever target resolves.
  void alias(Label l, Label target);

  void inc(const std::string& reg, Label next);
  void dec(const std::string& reg, Label nonzero, Label zero);
  void copy(const std::string& src, const std::string& dst, Label next);
  void halt();

  /// inc/copy falling through to the following instruction.
  void inc(const std::string& reg);
  void copy(const std::string& src, const std::string& dst);

  /// reg := 0, then continue at next.
  void clear(const std::string& reg, Label next);
  /// dst := dst + src, src := 0.
  void drain(const std::string& src, const std::string& dst, Label next);

  std::size_t size() const { return code_.size(); }

  RegisterMachineProgram build(std::string output_register, Label start = kNone) const;

  static constexpr Label kNone = static_cast<Label>(-1);

 private:
  struct Raw {
    int kind;  // 0 inc, 1 dec, 2 copy, 3 halt
    std::string a, b;
    Label l1 = kNone, l2 = kNone;
  };
  std::size_t resolve(Label l) const;

  std::vector<Raw> code_;
  std::vector<std::size_t> bound_;
  std::map<Label, Label> alias_;
};

/// Runs a first, then b: every Halt of a jumps to b's initial state. Output
/// register is b's.
RegisterMachineProgram concat(const RegisterMachineProgram& a, const RegisterMachineProgram& b);

/// Replaces each Copy by an Inc/Dec loop through the shared register aux,
/// which must be zero whenever a copy starts and is zero again after it.
RegisterMachineProgram lower_copies(const RegisterMachineProgram& prog,
                                    const std::string& aux = "copy.aux");

/// Renames registers; names absent from the map are kept.
RegisterMachineProgram rename_registers(const RegisterMachineProgram& prog,
                                        const std::map<std::string, std::string>& names);

// ---------------------------------------------------------------------------
// Turing machines

struct TmTransition {
  std::string next;
  char write = '_';
  char move = 'R';  // 'L' or 'R'
};

/// Single-tape machine. Input: a binary numeral written so that its least
/// significant bit sits at cell 0 and higher bits extend to the left; the
/// head starts at cell 0; the empty word stands for 0. Output: at halt, the
/// binary numeral read from the head cell leftwards while cells hold '0' or
/// '1', least significant bit first.
struct TuringMachine {
  std::vector<std::string> states;
  std::string alphabet;  // includes blank, '0' and '1'
  char blank = '_';
  std::string start;
  std::string halt;
  std::map<std::pair<std::string, char>, TmTransition> delta;

  /// Throws InvalidProgram when delta is not total on non-halt states or a
  /// symbol or state is undeclared.
  void validate() const;

  nlohmann::json to_json() const;
  static TuringMachine from_json(const nlohmann::json& j);
};

struct TmRunResult {
  Count output;
  std::size_t space_used = 0;  // distinct cells visited or holding input
  std::uint64_t steps = 0;
};

/// Throws SpaceCap or StepCap.
TmRunResult run_tm(const TuringMachine& tm, std::string_view input_word,
                   std::size_t space_cap = 1'000'000, std::uint64_t step_cap = 100'000'000);
/// Same with the input given as a number.
TmRunResult run_tm(const TuringMachine& tm, const Count& input, std::size_t space_cap = 1'000'000,
                   std::uint64_t step_cap = 100'000'000);

std::string binary_word(const Count& x);

/// Three-state binary successor.
TuringMachine successor_tm();
/// Writes 1 and halts.
TuringMachine write_one_tm();
/// Appends a 0 bit (doubles its input).
TuringMachine doubling_tm();
/// Moves back and forth forever.
TuringMachine looping_tm();
/// Halts immediately.
TuringMachine immediate_halt_tm();

struct TmToRm {
  RegisterMachineProgram program;
  std::size_t alphabet_size = 0;
  /// |alphabet|^space.
  Count bound_for(std::size_t space) const;
};

/// Arithmetized tape: registers tm.left and tm.right hold the cells left of
/// the head and at/right of it as base-|alphabet| numerals, least significant
/// digit nearest the head. Input register tm.in, output register tm.out.
TmToRm tm_to_rm(const TuringMachine& tm);

/// Unary-tape simulation of a copy-free register machine by a Turing machine
/// following the conventions above.
TuringMachine rm_to_tm(const RegisterMachineProgram& prog);

// ---------------------------------------------------------------------------
// Permutations

/// Lexicographic rank of a permutation of 1..k. Throws NotAPermutation.
Count lehmer_rank(const std::vector<unsigned>& perm);
/// Throws RankOutOfRange unless 0 <= r < k!.
std::vector<unsigned> lehmer_unrank(const Count& r, unsigned k);
Count factorial(unsigned k);
/// Smallest k with k! > x.
unsigned min_k_for(const Count& x);

/// Per count: that many 1 bits, with single 0 bits between counts. Throws
/// ZeroCount.
Count encode_counts_to_m(const std::vector<unsigned>& counts);

/// Straight-line program setting r1..rk to perm.
RegisterMachineProgram build_permutation_generator(const std::vector<unsigned>& perm,
                                                   const std::string& prefix = "r");
/// Drains r1..rk into I following encode_counts_to_m.
RegisterMachineProgram build_count_encoder(unsigned k, const std::string& prefix = "r");
/// Reads I = encode_counts_to_m(perm) and halts with lehmer_rank(perm) in
/// register "rank".
RegisterMachineProgram build_rank_decoder(unsigned k);

/// Certified upper bounds on the decoder registers for a given k and I.
Registers rank_decoder_register_maxima(unsigned k, const Count& m);

}  // namespace crnkit
