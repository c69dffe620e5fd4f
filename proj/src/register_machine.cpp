#include <algorithm>
#include <charconv>
#include <sstream>

#include "crnkit/machines.hpp"

namespace crnkit {

namespace {

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

bool reg_name_ok(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

}  // namespace

bool RegisterMachineProgram::has_register(std::string_view name) const {
  return std::find(registers.begin(), registers.end(), name) != registers.end();
}

void RegisterMachineProgram::collect_registers() {
  auto add = [this](const std::string& r) {
    if (!has_register(r)) registers.push_back(r);
  };
  for (const auto& ins : instructions) {
    std::visit(overloaded{[&](const Inc& i) { add(i.reg); }, [&](const Dec& d) { add(d.reg); },
                          [&](const Copy& c) {
                            add(c.src);
                            add(c.dst);
                          },
                          [](const Halt&) {}},
               ins);
  }
  if (!output_register.empty()) add(output_register);
  if (input_register) add(*input_register);
}

void RegisterMachineProgram::validate() const {
  const std::size_t n = instructions.size();
  if (n == 0) throw InvalidProgram("program has no instructions");
  if (initial_state >= n) throw InvalidProgram("initial state out of range");
  auto target = [n](std::size_t s, std::size_t at) {
    if (s >= n) {
      throw InvalidProgram("instruction " + std::to_string(at) + " jumps to missing state " +
                           std::to_string(s));
    }
  };
  auto reg = [this](const std::string& r, std::size_t at) {
    if (!has_register(r)) {
      throw InvalidProgram("instruction " + std::to_string(at) + " uses undeclared register '" +
                           r + "'");
    }
  };
  bool any_halt = false;
  for (std::size_t i = 0; i < n; ++i) {
    std::visit(overloaded{[&](const Inc& x) {
                            reg(x.reg, i);
                            target(x.next, i);
                          },
                          [&](const Dec& x) {
                            reg(x.reg, i);
                            target(x.nonzero, i);
                            target(x.zero, i);
                          },
                          [&](const Copy& x) {
                            reg(x.src, i);
                            reg(x.dst, i);
                            target(x.next, i);
                            if (x.src == x.dst) {
                              throw InvalidProgram("copy at " + std::to_string(i) +
                                                   " has equal source and destination");
                            }
                          },
                          [&](const Halt&) { any_halt = true; }},
               instructions[i]);
  }
  if (!any_halt) throw InvalidProgram("program has no halt instruction");
  if (output_register.empty() || !has_register(output_register)) {
    throw InvalidProgram("output register is not declared");
  }
  if (input_register && !has_register(*input_register)) {
    throw InvalidProgram("input register is not declared");
  }
  for (const auto& r : registers) {
    if (!reg_name_ok(r)) throw InvalidProgram("bad register name '" + r + "'");
  }
}

std::string RegisterMachineProgram::to_text() const {
  std::ostringstream out;
  out << "# output: " << output_register << "\n";
  if (input_register) out << "# input: " << *input_register << "\n";
  if (initial_state != 0) out << "# start: " << initial_state << "\n";
  out << "# registers:";
  for (const auto& r : registers) out << ' ' << r;
  out << "\n";
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    out << i << ": ";
    std::visit(overloaded{[&](const Inc& x) { out << "inc " << x.reg << " -> " << x.next; },
                          [&](const Dec& x) {
                            out << "dec " << x.reg << " -> " << x.nonzero << " / " << x.zero;
                          },
                          [&](const Copy& x) {
                            out << "copy " << x.src << ' ' << x.dst << " -> " << x.next;
                          },
                          [&](const Halt&) { out << "halt"; }},
               instructions[i]);
    out << "\n";
  }
  return out.str();
}

RegisterMachineProgram RegisterMachineProgram::parse(std::string_view text) {
  RegisterMachineProgram p;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto num = [&](const std::string& tok) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ParseError(lineno, "expected a state number, got '" + tok + "'");
    }
    return v;
  };
  auto expect = [&](std::istringstream& ss, const char* want) {
    std::string t;
    if (!(ss >> t) || t != want) throw ParseError(lineno, std::string("expected '") + want + "'");
  };
  auto word = [&](std::istringstream& ss) {
    std::string t;
    if (!(ss >> t)) throw ParseError(lineno, "unexpected end of line");
    return t;
  };
  std::vector<std::pair<std::size_t, Instruction>> items;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    if (auto h = body.find('#'); h != std::string::npos) {
      std::istringstream cs(body.substr(h + 1));
      std::string key;
      cs >> key;
      std::string rest;
      std::getline(cs, rest);
      std::istringstream rs(rest);
      if (key == "output:") {
        rs >> p.output_register;
      } else if (key == "input:") {
        std::string r;
        rs >> r;
        p.input_register = r;
      } else if (key == "start:") {
        std::string s;
        rs >> s;
        p.initial_state = num(s);
      } else if (key == "registers:") {
        std::string r;
        while (rs >> r) {
          if (!p.has_register(r)) p.registers.push_back(r);
        }
      }
      body = body.substr(0, h);
    }
    std::istringstream ss(body);
    std::string head;
    if (!(ss >> head)) continue;
    if (head.back() != ':') throw ParseError(lineno, "expected 'N:' label");
    const std::size_t idx = num(head.substr(0, head.size() - 1));
    const std::string op = word(ss);
    Instruction ins;
    if (op == "inc") {
      Inc x;
      x.reg = word(ss);
      expect(ss, "->");
      x.next = num(word(ss));
      ins = x;
    } else if (op == "dec") {
      Dec x;
      x.reg = word(ss);
      expect(ss, "->");
      x.nonzero = num(word(ss));
      expect(ss, "/");
      x.zero = num(word(ss));
      ins = x;
    } else if (op == "copy") {
      Copy x;
      x.src = word(ss);
      x.dst = word(ss);
      expect(ss, "->");
      x.next = num(word(ss));
      ins = x;
    } else if (op == "halt") {
      ins = Halt{};
    } else {
      throw ParseError(lineno, "unknown instruction '" + op + "'");
    }
    std::string extra;
    if (ss >> extra) throw ParseError(lineno, "trailing text '" + extra + "'");
    items.emplace_back(idx, std::move(ins));
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].first != i) {
      throw ParseError(0, "instruction numbers must be 0..n-1 without gaps");
    }
    p.instructions.push_back(std::move(items[i].second));
  }
  p.collect_registers();
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------

namespace {

struct Compiled {
  // op: 0 inc, 1 dec, 2 copy, 3 halt; a/b register indices; n1/n2 states
  struct Op {
    int op;
    std::uint32_t a, b;
    std::size_t n1, n2;
  };
  std::vector<Op> ops;
  std::vector<std::string> regs;
};

Compiled compile(const RegisterMachineProgram& prog) {
  prog.validate();
  Compiled c;
  c.regs = prog.registers;
  auto idx = [&](const std::string& r) {
    return static_cast<std::uint32_t>(std::find(c.regs.begin(), c.regs.end(), r) -
                                      c.regs.begin());
  };
  for (const auto& ins : prog.instructions) {
    c.ops.push_back(std::visit(
        overloaded{[&](const Inc& x) { return Compiled::Op{0, idx(x.reg), 0, x.next, 0}; },
                   [&](const Dec& x) {
                     return Compiled::Op{1, idx(x.reg), 0, x.nonzero, x.zero};
                   },
                   [&](const Copy& x) {
                     return Compiled::Op{2, idx(x.src), idx(x.dst), x.next, 0};
                   },
                   [&](const Halt&) { return Compiled::Op{3, 0, 0, 0, 0}; }},
        ins));
  }
  return c;
}

RmRunResult run_impl(const RegisterMachineProgram& prog, const Registers& init,
                     std::optional<Count> bound, std::uint64_t max_steps,
                     std::optional<std::size_t> stop) {
  const Compiled c = compile(prog);
  std::vector<Count> r(c.regs.size(), 0);
  for (const auto& [name, v] : init) {
    auto it = std::find(c.regs.begin(), c.regs.end(), name);
    if (it == c.regs.end()) throw InvalidProgram("initial value for unknown register '" + name + "'");
    if (v < 0) throw InvalidProgram("negative initial register value");
    if (bound && v > *bound) throw BoundExceeded("initial value of '" + name + "' exceeds bound");
    r[it - c.regs.begin()] = v;
  }
  std::vector<Count> peak = r;
  std::size_t s = prog.initial_state;
  std::uint64_t steps = 0;
  auto check = [&](std::uint32_t i) {
    if (r[i] > peak[i]) peak[i] = r[i];
    if (bound && r[i] > *bound) {
      throw BoundExceeded("register '" + c.regs[i] + "' exceeds bound " + to_string(*bound) +
                          " at step " + std::to_string(steps));
    }
  };
  while (true) {
    if (stop && s == *stop) break;
    const auto& op = c.ops[s];
    if (op.op == 3) break;
    if (steps >= max_steps) {
      throw StepCap("register machine ran " + std::to_string(max_steps) + " steps without halting");
    }
    ++steps;
    switch (op.op) {
      case 0:
        ++r[op.a];
        check(op.a);
        s = op.n1;
        break;
      case 1:
        if (r[op.a] > 0) {
          --r[op.a];
          s = op.n1;
        } else {
          s = op.n2;
        }
        break;
      case 2:
        r[op.b] += r[op.a];
        check(op.b);
        s = op.n1;
        break;
    }
  }
  RmRunResult out;
  out.state = s;
  out.steps = steps;
  for (std::size_t i = 0; i < c.regs.size(); ++i) {
    out.regs[c.regs[i]] = r[i];
    out.max_values[c.regs[i]] = peak[i];
  }
  return out;
}

}  // namespace

RmRunResult run_rm(const RegisterMachineProgram& prog, const Registers& init,
                   std::optional<Count> bound, std::uint64_t max_steps) {
  return run_impl(prog, init, std::move(bound), max_steps, std::nullopt);
}

RmRunResult run_rm_until(const RegisterMachineProgram& prog, const Registers& init,
                         std::size_t stop, std::uint64_t max_steps) {
  return run_impl(prog, init, std::nullopt, max_steps, stop);
}

}  // namespace crnkit
