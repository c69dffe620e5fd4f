#include <algorithm>

#include "crnkit/machines.hpp"

namespace crnkit {

ProgramBuilder::Label ProgramBuilder::label() {
  bound_.push_back(kNone);
  return bound_.size() - 1;
}

void ProgramBuilder::bind(Label l) {
  if (bound_.at(l) != kNone || alias_.contains(l)) throw InvalidProgram("label bound twice");
  bound_[l] = code_.size();
}

ProgramBuilder::Label ProgramBuilder::here() {
  Label l = label();
  bind(l);
  return l;
}

void ProgramBuilder::alias(Label l, Label target) {
  if (bound_.at(l) != kNone || alias_.contains(l)) throw InvalidProgram("label bound twice");
  alias_[l] = target;
}

std::size_t ProgramBuilder::resolve(Label l) const {
  for (std::size_t hops = 0; hops <= alias_.size(); ++hops) {
    auto it = alias_.find(l);
    if (it == alias_.end()) break;
    l = it->second;
  }
  if (l == kNone || l >= bound_.size() || bound_[l] == kNone) {
    throw InvalidProgram("unbound label in program builder");
  }
  if (bound_[l] >= code_.size()) throw InvalidProgram("label bound past the last instruction");
  return bound_[l];
}

void ProgramBuilder::inc(const std::string& reg, Label next) { code_.push_back({0, reg, {}, next}); }

void ProgramBuilder::dec(const std::string& reg, Label nonzero, Label zero) {
  code_.push_back({1, reg, {}, nonzero, zero});
}

void ProgramBuilder::copy(const std::string& src, const std::string& dst, Label next) {
  code_.push_back({2, src, dst, next});
}

void ProgramBuilder::halt() { code_.push_back({3, {}, {}}); }

void ProgramBuilder::inc(const std::string& reg) {
  Label l = label();
  inc(reg, l);
  bind(l);
}

void ProgramBuilder::copy(const std::string& src, const std::string& dst) {
  Label l = label();
  copy(src, dst, l);
  bind(l);
}

void ProgramBuilder::clear(const std::string& reg, Label next) {
  Label top = here();
  dec(reg, top, next);
}

void ProgramBuilder::drain(const std::string& src, const std::string& dst, Label next) {
  Label top = here();
  Label body = label();
  dec(src, body, next);
  bind(body);
  inc(dst, top);
}

RegisterMachineProgram ProgramBuilder::build(std::string output_register, Label start) const {
  RegisterMachineProgram p;
  for (const auto& raw : code_) {
    switch (raw.kind) {
      case 0: p.instructions.push_back(Inc{raw.a, resolve(raw.l1)}); break;
      case 1: p.instructions.push_back(Dec{raw.a, resolve(raw.l1), resolve(raw.l2)}); break;
      case 2: p.instructions.push_back(Copy{raw.a, raw.b, resolve(raw.l1)}); break;
      default: p.instructions.push_back(Halt{}); break;
    }
  }
  p.initial_state = start == kNone ? 0 : resolve(start);
  p.output_register = std::move(output_register);
  p.collect_registers();
  return p;
}

namespace {

std::size_t shift_target(std::size_t s, std::size_t by) { return s + by; }

Instruction shifted(const Instruction& ins, std::size_t by) {
  return std::visit(
      [by](const auto& x) -> Instruction {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Inc>) {
          return Inc{x.reg, shift_target(x.next, by)};
        } else if constexpr (std::is_same_v<T, Dec>) {
          return Dec{x.reg, shift_target(x.nonzero, by), shift_target(x.zero, by)};
        } else if constexpr (std::is_same_v<T, Copy>) {
          return Copy{x.src, x.dst, shift_target(x.next, by)};
        } else {
          return Halt{};
        }
      },
      ins);
}

}  // namespace

RegisterMachineProgram concat(const RegisterMachineProgram& a, const RegisterMachineProgram& b) {
  RegisterMachineProgram out;
  const std::size_t off = a.instructions.size();
  const std::size_t b_start = b.initial_state + off;
  // a's halts stay in place but become unreachable: edges into them go to b.
  out.instructions = a.instructions;
  auto redirect = [&](std::size_t s) {
    return s < off && std::holds_alternative<Halt>(a.instructions[s]) ? b_start : s;
  };
  for (std::size_t i = 0; i < off; ++i) {
    auto& ins = out.instructions[i];
    if (auto* x = std::get_if<Inc>(&ins)) x->next = redirect(x->next);
    if (auto* x = std::get_if<Dec>(&ins)) {
      x->nonzero = redirect(x->nonzero);
      x->zero = redirect(x->zero);
    }
    if (auto* x = std::get_if<Copy>(&ins)) x->next = redirect(x->next);
  }
  for (const auto& ins : b.instructions) out.instructions.push_back(shifted(ins, off));
  out.initial_state = redirect(a.initial_state);
  out.registers = a.registers;
  for (const auto& r : b.registers) {
    if (!out.has_register(r)) out.registers.push_back(r);
  }
  out.output_register = b.output_register;
  out.input_register = a.input_register;
  return out;
}

RegisterMachineProgram lower_copies(const RegisterMachineProgram& prog, const std::string& aux) {
  // copy(src, dst) -> s: dec src -> a1 / b1; a1: inc dst -> a2; a2: inc aux -> s;
  //                   b1: dec aux -> b2 / next; b2: inc src -> b1
  RegisterMachineProgram out = prog;
  const bool any = std::any_of(prog.instructions.begin(), prog.instructions.end(),
                               [](const Instruction& i) { return std::holds_alternative<Copy>(i); });
  if (!any) return out;
  if (prog.has_register(aux)) throw InvalidProgram("copy auxiliary register already in use");
  out.registers.push_back(aux);
  for (std::size_t s = 0; s < prog.instructions.size(); ++s) {
    const auto* c = std::get_if<Copy>(&prog.instructions[s]);
    if (!c) continue;
    const std::size_t a1 = out.instructions.size();
    const std::size_t a2 = a1 + 1, b1 = a1 + 2, b2 = a1 + 3;
    out.instructions[s] = Dec{c->src, a1, b1};
    out.instructions.push_back(Inc{c->dst, a2});
    out.instructions.push_back(Inc{aux, s});
    out.instructions.push_back(Dec{aux, b2, c->next});
    out.instructions.push_back(Inc{c->src, b1});
  }
  return out;
}

RegisterMachineProgram rename_registers(const RegisterMachineProgram& prog,
                                        const std::map<std::string, std::string>& names) {
  auto n = [&](const std::string& r) {
    auto it = names.find(r);
    return it == names.end() ? r : it->second;
  };
  RegisterMachineProgram out = prog;
  for (auto& ins : out.instructions) {
    if (auto* x = std::get_if<Inc>(&ins)) x->reg = n(x->reg);
    if (auto* x = std::get_if<Dec>(&ins)) x->reg = n(x->reg);
    if (auto* x = std::get_if<Copy>(&ins)) {
      x->src = n(x->src);
      x->dst = n(x->dst);
    }
  }
  for (auto& r : out.registers) r = n(r);
  out.output_register = n(out.output_register);
  if (out.input_register) out.input_register = n(*out.input_register);
  return out;
}

}  // namespace crnkit
