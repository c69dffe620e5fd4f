#include "crnkit/machines.hpp"

namespace crnkit {

namespace {

using Label = ProgramBuilder::Label;

std::string reg_name(const std::string& prefix, std::size_t i) {
  return prefix + std::to_string(i);
}

/// reg := 2 * reg through tmp.
void double_reg(ProgramBuilder& b, const std::string& reg, const std::string& tmp, Label next) {
  b.copy(reg, tmp);
  b.drain(tmp, reg, next);
}

/// Halves src into quot (src := 0), then branches on the parity.
void halve(ProgramBuilder& b, const std::string& src, const std::string& quot, Label odd,
           Label even) {
  Label top = b.here();
  Label one = b.label();
  Label two = b.label();
  b.dec(src, one, even);
  b.bind(one);
  b.dec(src, two, odd);
  b.bind(two);
  b.inc(quot, top);
}

/// Runs body `count` times, using counter (zero before and after).
template <class Body>
void repeat(ProgramBuilder& b, const std::string& count, const std::string& counter, Label next,
            Body body) {
  b.copy(count, counter);
  Label top = b.here();
  Label go = b.label();
  b.dec(counter, go, next);
  b.bind(go);
  body(top);
}

}  // namespace

RegisterMachineProgram build_permutation_generator(const std::vector<unsigned>& perm,
                                                   const std::string& prefix) {
  lehmer_rank(perm);
  const std::size_t k = perm.size();
  std::vector<std::size_t> pos(k + 1);
  for (std::size_t i = 0; i < k; ++i) pos[perm[i]] = i + 1;
  const std::string base = reg_name(prefix, pos[k]);
  ProgramBuilder b;
  for (unsigned v = 1; v < k; ++v) {
    b.inc(base);
    b.copy(base, reg_name(prefix, pos[v]));
  }
  Label end = b.label();
  b.inc(base, end);
  b.bind(end);
  b.halt();
  RegisterMachineProgram p = b.build(reg_name(prefix, 1));
  p.registers.clear();
  for (std::size_t i = 1; i <= k; ++i) p.registers.push_back(reg_name(prefix, i));
  return p;
}

RegisterMachineProgram build_count_encoder(unsigned k, const std::string& prefix) {
  if (k == 0) throw InvalidProgram("count encoder needs k >= 1");
  ProgramBuilder b;
  std::vector<Label> loop(k + 1);
  for (auto& l : loop) l = b.label();
  Label end = b.label();
  loop[k] = end;
  for (unsigned i = 0; i < k; ++i) {
    Label one = b.label();
    Label boundary = b.label();
    b.bind(loop[i]);
    b.dec(reg_name(prefix, i + 1), one, boundary);
    // Each unit appends a 1 bit.
    b.bind(one);
    Label add = b.label();
    double_reg(b, "I", "T", add);
    b.bind(add);
    b.inc("I", loop[i]);
    // Between registers a single 0 bit.
    if (i + 1 < k) {
      b.bind(boundary);
      double_reg(b, "I", "T", loop[i + 1]);
    } else {
      b.alias(boundary, end);
    }
  }
  b.bind(end);
  b.halt();
  RegisterMachineProgram p = b.build("I", loop[0]);
  p.registers.clear();
  for (unsigned i = 1; i <= k; ++i) p.registers.push_back(reg_name(prefix, i));
  p.registers.push_back("I");
  p.registers.push_back("T");
  return p;
}

RegisterMachineProgram build_rank_decoder(unsigned k) {
  if (k == 0) throw InvalidProgram("rank decoder needs k >= 1");
  ProgramBuilder b;
  // F starts at 0! = 1.
  Label start = b.here();
  Label top = b.label(), odd = b.label(), even = b.label(), refill = b.label(),
        sep = b.label(), last = b.label(), run = b.label(), halt = b.label();

  // Read I from its least significant bit: P counts the current run of 1s.
  b.inc("F", top);
  b.bind(top);
  halve(b, "I", "Q", odd, even);
  b.bind(odd);
  b.inc("P", refill);
  b.bind(refill);
  b.drain("Q", "I", top);
  b.bind(even);
  b.dec("Q", sep, last);
  b.bind(sep);
  b.inc("Q", run);
  b.bind(last);
  b.inc("E", run);

  // Run of length p: the value p sits J positions from the right.
  b.bind(run);
  // D := popcount of the low p-1 bits of U.
  b.copy("U", "W");
  Label skip = b.label(), low = b.label(), low_done = b.label();
  b.copy("P", "C");
  b.dec("C", skip, skip);
  b.bind(skip);
  {
    Label top_c = b.here();
    Label go = b.label(), bit1 = b.label(), bit0 = b.label();
    b.dec("C", go, low_done);
    b.bind(go);
    halve(b, "W", "G", bit1, bit0);
    b.bind(bit1);
    b.inc("D", bit0);
    b.bind(bit0);
    b.drain("G", "W", top_c);
  }
  b.bind(low_done);
  b.clear("W", low);
  // U += 2^(p-1).
  b.bind(low);
  Label mark = b.label(), mark_done = b.label();
  b.inc("Z");
  b.copy("P", "C");
  b.dec("C", mark, mark);
  b.bind(mark);
  {
    Label top_c = b.here();
    Label go = b.label();
    b.dec("C", go, mark_done);
    b.bind(go);
    double_reg(b, "Z", "G", top_c);
  }
  Label add_rank = b.label();
  b.bind(mark_done);
  b.drain("Z", "U", add_rank);
  // rank += D * F.
  b.bind(add_rank);
  Label next_f = b.label();
  {
    Label top_d = b.here();
    Label go = b.label();
    b.dec("D", go, next_f);
    b.bind(go);
    b.copy("F", "rank", top_d);
  }
  // J += 1; F := F * J.
  b.bind(next_f);
  Label prod_done = b.label(), swap = b.label(), reset = b.label();
  b.inc("J");
  repeat(b, "J", "C", prod_done, [&](Label back) { b.copy("F", "G", back); });
  b.bind(prod_done);
  b.clear("F", swap);
  b.bind(swap);
  b.drain("G", "F", reset);
  b.bind(reset);
  Label cont = b.label();
  b.clear("P", cont);
  b.bind(cont);
  b.dec("E", halt, refill);
  b.bind(halt);
  b.halt();

  RegisterMachineProgram p = b.build("rank", start);
  p.output_register = "rank";
  p.input_register = "I";
  p.registers = {"I", "Q", "P", "E", "U", "W", "C", "G", "D", "Z", "rank", "J", "F"};
  return p;
}

Registers rank_decoder_register_maxima(unsigned k, const Count& m) {
  const Count fk = factorial(k);
  const Count pow_k = Count(1) << k;
  const Count pow_k1 = Count(1) << (k - 1);
  Registers r;
  r["I"] = m;
  r["Q"] = m / 2;
  r["P"] = k;
  r["C"] = k;
  r["E"] = 1;
  r["U"] = pow_k - 1;
  r["W"] = pow_k - 1;
  r["G"] = std::max(fk, pow_k1);
  r["D"] = k - 1;
  r["Z"] = pow_k1;
  r["rank"] = fk - 1;
  r["J"] = k;
  r["F"] = fk;
  return r;
}

}  // namespace crnkit
