#include "crnkit/rm_compiler.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "crnkit/dexp.hpp"

namespace crnkit {

const char* to_string(CounterMode m) {
  switch (m) {
    case CounterMode::Ladder: return "ladder";
    case CounterMode::Gated: return "gated";
    case CounterMode::Dexp: return "dexp";
  }
  return "?";
}

namespace {

CounterMode parse_mode(std::string_view s) {
  if (s == "ladder") return CounterMode::Ladder;
  if (s == "gated") return CounterMode::Gated;
  if (s == "dexp") return CounterMode::Dexp;
  throw std::invalid_argument("unknown counter mode '" + std::string(s) + "'");
}

unsigned min_exponent(CounterMode m) { return m == CounterMode::Dexp ? 0 : 1; }

}  // namespace

Count BoundSpec::bound() const {
  if (mode == CounterMode::Dexp) return double_exp(exponent);
  return Count(1) << exponent;
}

std::string BoundSpec::to_string() const {
  return std::string(crnkit::to_string(mode)) + ":" + std::to_string(exponent);
}

BoundSpec BoundSpec::covering(CounterMode mode, const Count& value) {
  BoundSpec b{mode, min_exponent(mode)};
  while (b.bound() < value) ++b.exponent;
  return b;
}

CounterChoice CounterChoice::parse(std::string_view text) {
  CounterChoice c;
  const auto colon = text.find(':');
  c.mode = parse_mode(text.substr(0, colon));
  if (colon != std::string_view::npos) {
    const auto num = text.substr(colon + 1);
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw std::invalid_argument("bad counter exponent in '" + std::string(text) + "'");
    }
    if (v < min_exponent(c.mode)) throw std::invalid_argument("ladder exponent must be >= 1");
    c.exponent = v;
  }
  return c;
}

std::string CounterChoice::to_string() const {
  std::string s = crnkit::to_string(mode);
  if (exponent) s += ":" + std::to_string(*exponent);
  return s;
}

std::map<std::string, BoundSpec> choose_bounds(const Registers& maxima, const CounterChoice& c) {
  std::map<std::string, BoundSpec> out;
  for (const auto& [r, v] : maxima) {
    if (c.exponent) {
      BoundSpec b{c.mode, *c.exponent};
      if (b.bound() < v) {
        throw BoundTooSmall("register '" + r + "' reaches " + crnkit::to_string(v) +
                            " but the bound is " + crnkit::to_string(b.bound()));
      }
      out[r] = b;
    } else {
      out[r] = BoundSpec::covering(c.mode, v);
    }
  }
  return out;
}

Registers certified_maxima(const RegisterMachineProgram& prog, std::uint64_t max_steps) {
  const RegisterMachineProgram lowered = lower_copies(prog);
  return run_rm(lowered, {}, std::nullopt, max_steps).max_values;
}

// ---------------------------------------------------------------------------
// Manifest

LeaderSet CompileManifest::leaders(const Crn& crn) const {
  LeaderSet s;
  for (const auto& n : leader_names) {
    if (auto id = crn.find(n)) s.insert(*id);
  }
  return s;
}

Designated CompileManifest::designated() const {
  Designated d{leader, output, std::nullopt};
  if (!halt.empty()) d.halt = halt;
  return d;
}

nlohmann::json CompileManifest::to_json() const {
  nlohmann::json regs = nlohmann::json::object();
  for (const auto& [name, r] : registers) {
    regs[name] = {{"active", r.active},
                  {"inactive", r.inactive},
                  {"bound", r.bound.to_string()},
                  {"bound_value", crnkit::to_string(r.bound.bound())},
                  {"ladder", r.ladder}};
  }
  return {{"method", method},  {"leader", leader},        {"output", output},
          {"halt", halt},      {"registers", regs},       {"states", states},
          {"leaders", leader_names}, {"notes", notes}};
}

CompileManifest CompileManifest::from_json(const nlohmann::json& j) {
  CompileManifest m;
  m.method = j.value("method", "");
  m.leader = j.value("leader", "L");
  m.output = j.value("output", "Y");
  m.halt = j.value("halt", "H");
  m.states = j.value("states", std::vector<std::string>{});
  m.leader_names = j.value("leaders", std::vector<std::string>{});
  m.notes = j.value("notes", nlohmann::json::object());
  if (j.contains("registers")) {
    for (const auto& [name, r] : j.at("registers").items()) {
      RegisterInfo info;
      info.active = r.at("active").get<std::string>();
      info.inactive = r.at("inactive").get<std::string>();
      const auto spec = CounterChoice::parse(r.at("bound").get<std::string>());
      info.bound = {spec.mode, spec.exponent.value_or(min_exponent(spec.mode))};
      info.ladder = r.value("ladder", std::vector<std::string>{});
      m.registers[name] = std::move(info);
    }
  }
  return m;
}

Configuration CompiledCrn::initial() const {
  Configuration c;
  c.set(crn.id(manifest.leader), 1);
  return c;
}

Configuration CompiledCrn::at_state(std::size_t state, const Registers& values) const {
  Configuration c;
  c.set(crn.id(manifest.states.at(state)), 1);
  for (const auto& [name, info] : manifest.registers) {
    auto it = values.find(name);
    const Count v = it == values.end() ? Count(0) : it->second;
    const Count b = info.bound.bound();
    if (v > b) throw BoundExceeded("value of '" + name + "' exceeds its bound");
    c.add(crn.id(info.active), v);
    c.add(crn.id(info.inactive), b - v);
  }
  return c;
}

void CompiledCrn::save(const std::string& path) const {
  save_crn(path, crn, manifest.designated(), manifest.to_json());
}

// ---------------------------------------------------------------------------
// Gadgets

namespace {

void rev(Crn& crn, const NamedSide& lhs, const NamedSide& rhs) {
  crn.add(lhs, rhs);
  crn.add(rhs, lhs);
}

std::string ladder_name(const std::string& reg, unsigned m) {
  return reg + ".C" + std::to_string(m);
}

}  // namespace

GadgetFragment build_ladder_zero_check(const std::string& reg, unsigned n,
                                       const std::vector<JumpSite>& sites) {
  if (n == 0) throw std::invalid_argument("ladder needs n >= 1");
  GadgetFragment f;
  rev(f.crn, {{reg + ".I", 2}}, {{ladder_name(reg, n), 1}});
  for (unsigned m = n; m > 1; --m) {
    rev(f.crn, {{ladder_name(reg, m), 2}}, {{ladder_name(reg, m - 1), 1}});
  }
  const std::string c1 = ladder_name(reg, 1);
  for (const auto& s : sites) {
    f.crn.add({{s.from, 1}, {c1, 1}}, {{s.to, 1}, {c1, 1}});
  }
  return f;
}

GadgetFragment build_gated_zero_check(const std::string& reg, unsigned n,
                                      const std::vector<JumpSite>& sites) {
  if (n == 0) throw std::invalid_argument("ladder needs n >= 1");
  GadgetFragment f;
  const std::string k = reg + ".K";
  f.crn.add({{reg + ".I", 2}, {k, 1}}, {{ladder_name(reg, n), 1}, {k, 1}});
  for (unsigned m = n; m > 1; --m) {
    f.crn.add({{ladder_name(reg, m), 2}, {k, 1}}, {{ladder_name(reg, m - 1), 1}, {k, 1}});
  }
  const std::string c1 = ladder_name(reg, 1);
  for (const auto& s : sites) {
    rev(f.crn, {{s.from, 1}}, {{k, 1}, {s.marker, 1}});
    f.crn.add({{s.marker, 1}, {k, 1}, {c1, 1}}, {{s.to, 1}, {c1, 1}});
  }
  f.leader_names.push_back(k);
  return f;
}

GadgetFragment build_gated_inc_sites(const std::string& reg, unsigned n,
                                     const std::vector<JumpSite>& sites) {
  if (n == 0) throw std::invalid_argument("ladder needs n >= 1");
  GadgetFragment f;
  const std::string j = reg + ".J";
  for (unsigned m = 1; m < n; ++m) {
    f.crn.add({{ladder_name(reg, m), 1}, {j, 1}}, {{ladder_name(reg, m + 1), 2}, {j, 1}});
  }
  f.crn.add({{ladder_name(reg, n), 1}, {j, 1}}, {{reg + ".I", 2}, {j, 1}});
  for (const auto& s : sites) rev(f.crn, {{s.from, 1}}, {{j, 1}, {s.marker, 1}});
  f.leader_names.push_back(j);
  return f;
}

GadgetFragment build_dexp_zero_check(const std::string& reg, unsigned k,
                                     const std::vector<JumpSite>& sites) {
  GadgetFragment f;
  const std::string target = reg + ".I";
  const std::string cons = reg + ".cons";
  const std::string prod = reg + ".prod";
  for (auto& l : emit_box(f.crn, {k, 3, target, cons})) f.leader_names.push_back(l);
  for (auto& l : emit_box(f.crn, {k, 1, target, prod})) f.leader_names.push_back(l);
  for (const auto& s : sites) {
    const std::string q = s.marker + "'";
    rev(f.crn, {{s.from, 1}}, {{s.marker, 1}, {cons + ".S", 1}});
    f.crn.add({{s.marker, 1}, {cons + ".H", 1}}, {{q, 1}, {prod + ".S", 1}});
    f.crn.add({{q, 1}, {prod + ".H", 1}}, {{s.to, 1}});
  }
  return f;
}

GadgetFragment build_initializer(const std::vector<std::string>& registers,
                                 const std::map<std::string, BoundSpec>& bounds,
                                 const std::string& leader, const std::string& first_state,
                                 const std::string& prefix) {
  GadgetFragment f;
  f.leader_names.push_back(leader);
  // done: what the next step consumes; keep: catalysts it must give back.
  NamedSide done = {{leader, 1}};
  NamedSide keep;
  auto step = [&](NamedSide products) {
    for (const auto& c : keep) products.push_back(c);
    f.crn.add(done, products);
  };
  for (std::size_t j = 0; j < registers.size(); ++j) {
    const std::string& reg = registers[j];
    auto it = bounds.find(reg);
    if (it == bounds.end()) throw UnboundedRegister("register '" + reg + "' has no bound");
    const BoundSpec b = it->second;
    const std::string stem = prefix + reg;
    switch (b.mode) {
      case CounterMode::Gated: {
        const std::string g = prefix + "G" + std::to_string(j + 1);
        step({{g, 1}, {ladder_name(stem, 1), 1}});
        f.leader_names.push_back(g);
        done = {{g, 1}};
        keep.clear();
        break;
      }
      case CounterMode::Ladder: {
        const std::string w = prefix + "W" + std::to_string(j + 1);
        const std::string a1 = stem + ".a1";
        step({{w, 1}, {a1, 1}});
        for (unsigned m = 1; m < b.exponent; ++m) {
          f.crn.add({{stem + ".a" + std::to_string(m), 1}},
                    {{stem + ".a" + std::to_string(m + 1), 2}});
        }
        f.crn.add({{stem + ".a" + std::to_string(b.exponent), 1}}, {{stem + ".I", 2}});
        f.leader_names.push_back(w);
        const std::string c1 = ladder_name(stem, 1);
        done = {{w, 1}, {c1, 1}};
        keep = {{c1, 1}};
        break;
      }
      case CounterMode::Dexp: {
        const std::string z = prefix + "Z" + std::to_string(j + 1);
        const std::string prod = stem + ".prod";
        for (auto& l : emit_box(f.crn, {b.exponent, 1, stem + ".I", prod})) {
          f.leader_names.push_back(l);
        }
        step({{z, 1}, {prod + ".S", 1}});
        done = {{z, 1}, {prod + ".H", 1}};
        keep.clear();
        break;
      }
    }
  }
  step({{first_state, 1}});
  return f;
}

// ---------------------------------------------------------------------------
// Compiler

namespace {

void absorb(Crn& crn, std::vector<std::string>& leaders, const GadgetFragment& g) {
  for (const auto& r : g.crn.reactions()) crn.add(crn.translate(g.crn, r));
  for (const auto& l : g.leader_names) {
    if (std::find(leaders.begin(), leaders.end(), l) == leaders.end()) leaders.push_back(l);
  }
}

}  // namespace

CompiledCrn compile_rm(const RegisterMachineProgram& source,
                       const std::map<std::string, BoundSpec>& bounds,
                       const CompileNames& names) {
  source.validate();
  const RegisterMachineProgram prog = lower_copies(source);
  for (const auto& r : prog.registers) {
    if (!bounds.contains(r)) throw UnboundedRegister("register '" + r + "' has no bound");
  }
  const std::string& pre = names.prefix;
  CompiledCrn out;
  CompileManifest& man = out.manifest;
  man.leader = names.leader;
  man.output = names.output;
  man.halt = names.halt;
  man.method = "rm";

  auto state = [&](std::size_t s) {
    return std::holds_alternative<Halt>(prog.instructions.at(s)) ? names.halt
                                                                  : pre + "S" + std::to_string(s);
  };
  auto stem_of = [&](const std::string& r) {
    auto it = names.external.find(r);
    return it == names.external.end() ? pre + r : it->second.stem;
  };
  for (std::size_t s = 0; s < prog.instructions.size(); ++s) man.states.push_back(state(s));
  std::vector<std::string> owned;
  for (const auto& r : prog.registers) {
    RegisterInfo info;
    if (auto it = names.external.find(r); it != names.external.end()) {
      info.active = it->second.active;
    } else {
      info.active = r == prog.output_register ? names.output : pre + r + ".A";
      owned.push_back(r);
    }
    info.inactive = stem_of(r) + ".I";
    info.bound = bounds.at(r);
    if (info.bound.mode != CounterMode::Dexp) {
      for (unsigned m = 1; m <= info.bound.exponent; ++m) {
        info.ladder.push_back(ladder_name(stem_of(r), m));
      }
    }
    man.registers[r] = info;
  }

  Crn& crn = out.crn;
  std::vector<std::string>& leaders = man.leader_names;
  // Interning order: leader, states, registers.
  crn.intern(names.leader);
  for (const auto& s : man.states) crn.intern(s);
  for (const auto& r : prog.registers) {
    crn.intern(man.registers[r].active);
    crn.intern(man.registers[r].inactive);
  }

  // Main instruction reactions and the zero-branch sites per register.
  std::map<std::string, std::vector<JumpSite>> dec_sites, inc_sites;
  for (std::size_t s = 0; s < prog.instructions.size(); ++s) {
    const auto& ins = prog.instructions[s];
    const std::string me = state(s);
    if (const auto* x = std::get_if<Inc>(&ins)) {
      const auto& info = man.registers[x->reg];
      crn.add({{me, 1}, {info.inactive, 1}}, {{info.active, 1}, {state(x->next), 1}});
      inc_sites[x->reg].push_back({me, state(x->next), pre + "N" + std::to_string(s)});
    } else if (const auto* x = std::get_if<Dec>(&ins)) {
      const auto& info = man.registers[x->reg];
      crn.add({{me, 1}, {info.active, 1}}, {{info.inactive, 1}, {state(x->nonzero), 1}});
      dec_sites[x->reg].push_back({me, state(x->zero), pre + "M" + std::to_string(s)});
    }
  }
  for (std::size_t s = 0; s < prog.instructions.size(); ++s) {
    if (!std::holds_alternative<Halt>(prog.instructions[s])) leaders.push_back(state(s));
  }
  leaders.push_back(names.halt);

  absorb(crn, leaders,
         build_initializer(owned, bounds, names.leader, state(prog.initial_state), pre));

  for (const auto& r : prog.registers) {
    const BoundSpec b = bounds.at(r);
    const std::string stem = stem_of(r);
    const auto& dsites = dec_sites[r];
    switch (b.mode) {
      case CounterMode::Ladder:
        absorb(crn, leaders, build_ladder_zero_check(stem, b.exponent, dsites));
        break;
      case CounterMode::Gated:
        if (!dsites.empty()) absorb(crn, leaders, build_gated_zero_check(stem, b.exponent, dsites));
        if (!inc_sites[r].empty()) {
          absorb(crn, leaders, build_gated_inc_sites(stem, b.exponent, inc_sites[r]));
        }
        break;
      case CounterMode::Dexp:
        if (!dsites.empty()) absorb(crn, leaders, build_dexp_zero_check(stem, b.exponent, dsites));
        break;
    }
  }
  // The output species must exist even when nothing produces it.
  crn.intern(names.output);
  crn.intern(names.halt);
  man.notes["instructions"] = prog.instructions.size();
  man.notes["copies_lowered"] = prog.instructions.size() != source.instructions.size();
  return out;
}

}  // namespace crnkit
