#include <algorithm>
#include <map>

#include "crnkit/machines.hpp"

namespace crnkit {

Count TmToRm::bound_for(std::size_t space) const {
  Count b = 1;
  for (std::size_t i = 0; i < space; ++i) b *= alphabet_size;
  return b;
}

namespace {

const std::string kIn = "tm.in";
const std::string kLeft = "tm.left";
const std::string kRight = "tm.right";
const std::string kT = "tm.t";
const std::string kQ = "tm.q";
const std::string kPw = "tm.pw";
const std::string kOut = "tm.out";

using Label = ProgramBuilder::Label;

class Emitter {
 public:
  explicit Emitter(const TuringMachine& tm) : tm_(tm), g_(tm.alphabet.size()) {
    std::size_t d = 1;
    digit_[tm.blank] = 0;
    for (char c : tm.alphabet) {
      if (c != tm.blank) digit_[c] = d++;
    }
  }

  RegisterMachineProgram build() {
    tm_.validate();
    Label entry = b_.label();
    out_start_ = b_.label();
    emit_input_phase(entry, state_label(tm_.start));
    for (const auto& q : tm_.states) {
      if (q != tm_.halt) emit_state(q);
    }
    emit_shared_blocks();
    emit_output_phase();
    RegisterMachineProgram p = b_.build(kOut, entry);
    p.input_register = kIn;
    for (const auto& r : {kIn, kLeft, kRight, kT, kQ, kPw, kOut}) {
      if (!p.has_register(r)) p.registers.push_back(r);
    }
    return p;
  }

 private:
  std::size_t digit(char c) const { return digit_.at(c); }
  char symbol(std::size_t d) const {
    for (const auto& [c, v] : digit_) {
      if (v == d) return c;
    }
    return tm_.blank;
  }

  // Every helper starts at label `at` and continues at `next`.

  void inc(Label at, const std::string& reg, Label next) {
    b_.bind(at);
    b_.inc(reg, next);
  }

  void add_const(Label at, const std::string& reg, std::size_t n, Label next) {
    if (n == 0) {
      b_.alias(at, next);
      return;
    }
    b_.bind(at);
    for (std::size_t i = 0; i + 1 < n; ++i) b_.inc(reg);
    b_.inc(reg, next);
  }

  void copies(Label at, const std::string& src, const std::string& dst, std::size_t n,
              Label next) {
    if (n == 0) {
      b_.alias(at, next);
      return;
    }
    b_.bind(at);
    for (std::size_t i = 0; i + 1 < n; ++i) b_.copy(src, dst);
    b_.copy(src, dst, next);
  }

  void drain(Label at, const std::string& src, const std::string& dst, Label next) {
    b_.bind(at);
    b_.drain(src, dst, next);
  }

  void clear(Label at, const std::string& reg, Label next) {
    b_.bind(at);
    b_.clear(reg, next);
  }

  /// dst += g * src, src := 0.
  void drain_times_g(Label at, const std::string& src, const std::string& dst, Label next) {
    Label body = b_.label();
    b_.bind(at);
    b_.dec(src, body, next);
    b_.bind(body);
    for (std::size_t i = 0; i + 1 < g_; ++i) b_.inc(dst);
    b_.inc(dst, at);
  }

  /// reg := reg * g through scratch (zero before and after).
  void times_g(Label at, const std::string& reg, const std::string& scratch, Label next) {
    Label mid = b_.label();
    drain_times_g(at, reg, scratch, mid);
    drain(mid, scratch, reg, next);
  }

  /// quot += src / g, src := 0, then branch to rem[src % g].
  void divmod(Label at, const std::string& src, const std::string& quot,
              const std::vector<Label>& rem) {
    std::vector<Label> c(g_);
    c[0] = at;
    for (std::size_t j = 1; j < g_; ++j) c[j] = b_.label();
    Label bump = b_.label();
    for (std::size_t j = 0; j < g_; ++j) {
      b_.bind(c[j]);
      b_.dec(src, j + 1 < g_ ? c[j + 1] : bump, rem[j]);
    }
    inc(bump, quot, at);
  }

  /// q += src / 2, src := 0, then branch on parity.
  void halve(Label at, const std::string& src, Label odd, Label even) {
    Label a = b_.label();
    Label c = b_.label();
    b_.bind(at);
    b_.dec(src, a, even);
    b_.bind(a);
    b_.dec(src, c, odd);
    inc(c, kQ, at);
  }

  std::vector<Label> labels(std::size_t n) {
    std::vector<Label> out(n);
    for (auto& l : out) l = b_.label();
    return out;
  }

  Label state_label(const std::string& q) {
    if (q == tm_.halt) return out_start_;
    auto it = states_.find(q);
    if (it == states_.end()) it = states_.emplace(q, b_.label()).first;
    return it->second;
  }

  Label shared(std::map<std::pair<std::size_t, std::string>, Label>& table,
               std::vector<std::pair<std::size_t, std::string>>& pending, std::size_t dw,
               const std::string& next) {
    auto key = std::pair{dw, next};
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    Label l = b_.label();
    table[key] = l;
    pending.push_back(key);
    return l;
  }

  Label pop_left(const std::string& next) {
    auto it = pop_.find(next);
    if (it != pop_.end()) return it->second;
    Label l = b_.label();
    pop_[next] = l;
    pending_pop_.push_back(next);
    return l;
  }

  void emit_input_phase(Label at, Label main_start) {
    const std::size_t d0 = digit('0');
    const std::size_t d1 = digit('1');
    // Bit 0 goes to the head cell.
    Label odd0 = b_.label(), even0 = b_.label(), ev_nz = b_.label(), r0 = b_.label(),
          after0 = b_.label(), set_pw = b_.label(), loop = b_.label();
    halve(at, kIn, odd0, even0);
    add_const(odd0, kRight, d1, after0);
    b_.bind(even0);
    b_.dec(kQ, ev_nz, main_start);
    inc(ev_nz, kQ, r0);
    add_const(r0, kRight, d0, after0);
    drain(after0, kQ, kIn, set_pw);
    inc(set_pw, kPw, loop);
    // Higher bits go left of the head with weight pw = g^(i-1).
    Label odd = b_.label(), even = b_.label(), ev2 = b_.label(), r1 = b_.label(),
          next = b_.label(), refill = b_.label(), done = b_.label();
    halve(loop, kIn, odd, even);
    copies(odd, kPw, kLeft, d1, next);
    b_.bind(even);
    b_.dec(kQ, ev2, done);
    inc(ev2, kQ, r1);
    copies(r1, kPw, kLeft, d0, next);
    times_g(next, kPw, kT, refill);
    drain(refill, kQ, kIn, loop);
    clear(done, kPw, main_start);
  }

  void emit_state(const std::string& q) {
    auto rem = labels(g_);
    divmod(state_label(q), kRight, kT, rem);
    for (std::size_t j = 0; j < g_; ++j) {
      const TmTransition& t = tm_.delta.at({q, symbol(j)});
      const std::size_t dw = digit(t.write);
      b_.alias(rem[j], t.move == 'R' ? shared(move_r_, pending_r_, dw, t.next)
                                     : shared(move_l_, pending_l_, dw, t.next));
    }
  }

  void emit_shared_blocks() {
    while (!pending_r_.empty() || !pending_l_.empty() || !pending_pop_.empty()) {
      if (!pending_r_.empty()) {
        auto [dw, next] = pending_r_.back();
        pending_r_.pop_back();
        // right := t; left := left * g + dw
        Label a = b_.label(), c = b_.label();
        drain(move_r_.at({dw, next}), kT, kRight, a);
        times_g(a, kLeft, kT, c);
        add_const(c, kLeft, dw, state_label(next));
        continue;
      }
      if (!pending_l_.empty()) {
        auto [dw, next] = pending_l_.back();
        pending_l_.pop_back();
        // right := (t * g + dw) * g, then pop a digit of left into right
        Label a = b_.label(), c = b_.label();
        drain_times_g(move_l_.at({dw, next}), kT, kRight, a);
        add_const(a, kRight, dw, c);
        times_g(c, kRight, kT, pop_left(next));
        continue;
      }
      const std::string next = pending_pop_.back();
      pending_pop_.pop_back();
      auto rem = labels(g_);
      divmod(pop_.at(next), kLeft, kT, rem);
      for (std::size_t e = 0; e < g_; ++e) {
        Label back = b_.label();
        add_const(rem[e], kRight, e, back);
        drain(back, kT, kLeft, state_label(next));
      }
    }
  }

  void emit_output_phase() {
    const std::size_t d0 = digit('0');
    const std::size_t d1 = digit('1');
    Label head = b_.label(), cleared = b_.label(), loop = b_.label(), finish = b_.label();
    inc(out_start_, kPw, head);
    auto rem = labels(g_);
    divmod(head, kRight, kT, rem);
    for (std::size_t e = 0; e < g_; ++e) {
      if (e == d1) {
        b_.bind(rem[e]);
        b_.copy(kPw, kOut, cleared);
      } else {
        b_.alias(rem[e], e == d0 ? cleared : finish);
      }
    }
    clear(cleared, kT, loop);
    auto rem2 = labels(g_);
    divmod(loop, kLeft, kT, rem2);
    for (std::size_t e = 0; e < g_; ++e) {
      if (e != d0 && e != d1) {
        b_.alias(rem2[e], finish);
        continue;
      }
      Label dbl = b_.label(), after = b_.label(), back = b_.label();
      b_.bind(rem2[e]);
      b_.copy(kPw, kQ, dbl);
      drain(dbl, kQ, kPw, after);
      if (e == d1) {
        b_.bind(after);
        b_.copy(kPw, kOut, back);
      } else {
        b_.alias(after, back);
      }
      drain(back, kT, kLeft, loop);
    }
    b_.bind(finish);
    b_.halt();
  }

  ProgramBuilder b_;
  const TuringMachine& tm_;
  std::size_t g_;
  std::map<char, std::size_t> digit_;
  Label out_start_ = 0;
  std::map<std::string, Label> states_;
  std::map<std::pair<std::size_t, std::string>, Label> move_r_, move_l_;
  std::map<std::string, Label> pop_;
  std::vector<std::pair<std::size_t, std::string>> pending_r_, pending_l_;
  std::vector<std::string> pending_pop_;
};

}  // namespace

TmToRm tm_to_rm(const TuringMachine& tm) {
  Emitter e(tm);
  TmToRm out;
  out.program = e.build();
  out.alphabet_size = tm.alphabet.size();
  return out;
}

}  // namespace crnkit
