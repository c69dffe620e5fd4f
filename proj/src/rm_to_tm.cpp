#include <map>
#include <set>

#include "crnkit/machines.hpp"

namespace crnkit {

namespace {

// Tape layout: cells <= 0 hold the binary input and, at halt, the output.
// Cell 1 holds '$'. From cell 2 on, register i is a run of '1's closed by
// '#'. Instruction states are entered with the head on cell 2.
class TmEmitter {
 public:
  explicit TmEmitter(const RegisterMachineProgram& prog) : prog_(prog) {
    tm_.alphabet = "_01#$";
    tm_.blank = '_';
  }

  TuringMachine build() {
    for (std::size_t i = 0; i < prog_.registers.size(); ++i) reg_[prog_.registers[i]] = i;
    tm_.start = "setup";
    tm_.halt = "halt";
    declare("setup");
    declare("halt");

    // setup: keep cell 0, write '$' and one '#' per register.
    const std::size_t n = prog_.registers.size();
    for_all("setup", [&](char c) { on("setup", c, "put$", c, 'R'); });
    for_all("put$", [&](char c) { on("put$", c, n == 0 ? "home" : "put#0", '$', 'R'); });
    for (std::size_t j = 0; j < n; ++j) {
      const std::string q = "put#" + std::to_string(j);
      const std::string nx = j + 1 < n ? "put#" + std::to_string(j + 1) : "home";
      for_all(q, [&](char c) { on(q, c, nx, '#', 'R'); });
    }
    // home: back to '$', then to cell 0 to convert the input.
    for_all("home", [&](char c) {
      if (c == '$') {
        on("home", c, "conv", c, 'L');
      } else {
        on("home", c, "home", c, 'L');
      }
    });
    const std::string first = state(prog_.initial_state);
    // conv: binary decrement of the input at cells <= 0.
    const bool has_in = prog_.input_register.has_value();
    for_all("conv", [&](char c) {
      if (c == '0' || c == '1') {
        if (!has_in) {
          on("conv", c, "conv", '_', 'L');
        } else if (c == '0') {
          on("conv", c, "conv", '1', 'L');
        } else {
          on("conv", c, "toreg", '0', 'R');
        }
      } else {
        // The value is zero: erase the input and start.
        on("conv", c, "erase", c, 'R');
      }
    });
    for_all("erase", [&](char c) {
      if (c == '$') {
        on("erase", c, first, c, 'R');
      } else {
        on("erase", c, "erase", '_', 'R');
      }
    });
    if (has_in) {
      const std::string again = "back0";
      for_all("toreg", [&](char c) {
        on("toreg", c, c == '$' ? emit_inc(reg(*prog_.input_register), again) : "toreg", c, 'R');
      });
      for_all(again, [&](char c) { on(again, c, "back1", c, 'L'); });
      for_all("back1", [&](char c) { on("back1", c, "conv", c, 'L'); });
    }

    for (std::size_t s = 0; s < prog_.instructions.size(); ++s) emit_instruction(s);
    emit_output();

    for (const auto& q : order_) tm_.states.push_back(q);
    tm_.validate();
    return tm_;
  }

 private:
  std::size_t reg(const std::string& r) const { return reg_.at(r); }

  void declare(const std::string& q) {
    if (declared_.insert(q).second) order_.push_back(q);
  }

  template <class F>
  void for_all(const std::string& q, F f) {
    declare(q);
    for (char c : tm_.alphabet) f(c);
  }

  // write == 0 keeps the symbol read.
  void on(const std::string& q, char read, const std::string& next, char write, char move) {
    declare(q);
    declare(next);
    tm_.delta[{q, read}] = {next, write == 0 ? read : write, move};
  }

  void on_rest(const std::string& q, const std::string& next, char move) {
    for (char c : tm_.alphabet) {
      if (!tm_.delta.contains({q, c})) on(q, c, next, c, move);
    }
  }

  std::string fresh(const std::string& stem) { return stem + "." + std::to_string(counter_++); }

  std::string state(std::size_t s) {
    if (std::holds_alternative<Halt>(prog_.instructions.at(s))) return "out";
    return "i" + std::to_string(s);
  }

  /// Moves left to '$', then right onto cell 2 in state next.
  std::string ret(const std::string& next) {
    const std::string q = "ret:" + next;
    if (declared_.contains(q)) return q;
    on(q, '$', next, '$', 'R');
    on_rest(q, q, 'L');
    return q;
  }

  /// From cell 2, walks to the first cell of register i's block.
  /// Returns the state that will be at the block start.
  std::string walk(std::size_t i, const std::string& entry) {
    std::string cur = entry;
    for (std::size_t j = 0; j < i; ++j) {
      const std::string nx = fresh("w");
      on(cur, '#', nx, '#', 'R');
      on_rest(cur, cur, 'R');
      cur = nx;
    }
    return cur;
  }

  /// Entry state of "inc register i, then go to next".
  std::string emit_inc(std::size_t i, const std::string& next, std::string entry = {}) {
    if (entry.empty()) entry = fresh("inc");
    const std::string at = walk(i, entry);
    // Find the closing '#', turn it into '1' and carry '#' rightwards.
    const std::string carry_h = fresh("ch");
    const std::string carry_1 = fresh("c1");
    on(at, '#', carry_h, '1', 'R');
    on_rest(at, at, 'R');
    for (const auto& [q, c] : {std::pair{carry_h, '#'}, std::pair{carry_1, '1'}}) {
      on(q, '_', ret(next), c, 'L');
      on(q, '1', carry_1, c, 'R');
      on(q, '#', carry_h, c, 'R');
      on_rest(q, q, 'R');
    }
    return entry;
  }

  /// Entry state of "dec register i, then nz or z".
  std::string emit_dec(std::size_t i, const std::string& nz, const std::string& z,
                       std::string entry = {}) {
    if (entry.empty()) entry = fresh("dec");
    const std::string at = walk(i, entry);
    // Mark the block's first '1' with '0', shift everything after it left.
    const std::string seek = fresh("end");
    on(at, '#', ret(z), '#', 'L');
    on(at, '1', seek, '0', 'R');
    on_rest(at, at, 'R');
    on(seek, '_', fresh_shift(nz, '_'), '_', 'L');
    on_rest(seek, seek, 'R');
    return entry;
  }

  std::string fresh_shift(const std::string& next, char carried) {
    const std::string base = "shl:" + next + ":";
    auto name = [&](char c) { return base + (c == '_' ? "b" : c == '1' ? "1" : "h"); };
    if (!declared_.contains(name('_'))) {
      for (char c : {'_', '1', '#'}) {
        const std::string q = name(c);
        on(q, '0', ret(next), c, 'L');
        on(q, '1', name('1'), c, 'L');
        on(q, '#', name('#'), c, 'L');
        on_rest(q, q, 'L');
      }
    }
    return name(carried);
  }

  void emit_instruction(std::size_t s) {
    const Instruction& ins = prog_.instructions[s];
    if (std::holds_alternative<Halt>(ins)) return;
    const std::string q = state(s);
    if (const auto* x = std::get_if<Inc>(&ins)) {
      emit_inc(reg(x->reg), state(x->next), q);
    } else if (const auto* x = std::get_if<Dec>(&ins)) {
      emit_dec(reg(x->reg), state(x->nonzero), state(x->zero), q);
    } else {
      throw InvalidProgram("rm_to_tm needs a copy-free program");
    }
  }

  void emit_output() {
    // out (cell 2): dec output register; on nonzero add 1 to the binary
    // numeral at cells <= 0, on zero park the head on cell 0 and halt.
    const std::string add = "oadd";
    const std::string fin = "ofin";
    emit_dec(reg(prog_.output_register), add, fin, "out");
    for_all(add, [&](char c) { on(add, c, "oadd1", c, 'L'); });
    for_all("oadd1", [&](char c) { on("oadd1", c, "oinc", c, 'L'); });
    for_all("oinc", [&](char c) {
      if (c == '1') {
        on("oinc", c, "oinc", '0', 'L');
      } else {
        on("oinc", c, "oback", '1', 'R');
      }
    });
    for_all("oback", [&](char c) {
      on("oback", c, c == '$' ? "out" : "oback", c, 'R');
    });
    for_all(fin, [&](char c) { on(fin, c, "ofin1", c, 'L'); });
    for_all("ofin1", [&](char c) { on("ofin1", c, "halt", c, 'L'); });
  }

  const RegisterMachineProgram& prog_;
  TuringMachine tm_;
  std::map<std::string, std::size_t> reg_;
  std::set<std::string> declared_;
  std::vector<std::string> order_;
  std::size_t counter_ = 0;
};

}  // namespace

TuringMachine rm_to_tm(const RegisterMachineProgram& prog) {
  prog.validate();
  TmEmitter e(prog);
  return e.build();
}

}  // namespace crnkit
