#include <doctest.h>

#include "crnkit/analysis.hpp"
#include "crnkit/dexp.hpp"
#include "crnkit/rm_compiler.hpp"
#include "support.hpp"

using namespace crnkit;

namespace {

RegisterMachineProgram parse(const char* text) { return RegisterMachineProgram::parse(text); }

const char* kIncOnce = "# output: r1\n0: inc r1 -> 1\n1: halt\n";

const char* kTwoAPlusB =
    "# output: y\n"
    "0: dec a -> 1 / 3\n"
    "1: inc y -> 2\n"
    "2: inc y -> 0\n"
    "3: dec b -> 4 / 5\n"
    "4: inc y -> 3\n"
    "5: halt\n";

std::map<std::string, BoundSpec> all(const RegisterMachineProgram& p, BoundSpec b) {
  std::map<std::string, BoundSpec> out;
  for (const auto& r : p.registers) out[r] = b;
  return out;
}

/// Tokens held by a register in c, weighting C_m (and a_m) by 2^(n-m+1).
Count register_weight(const Crn& crn, const Configuration& c, const std::string& stem,
                      const RegisterInfo& info) {
  Count total = c.get(crn.id(info.inactive));
  if (auto a = crn.find(info.active)) total += c.get(*a);
  const unsigned n = info.bound.exponent;
  for (unsigned m = 1; m <= n; ++m) {
    const Count w = Count(1) << (n - m + 1);
    for (const std::string& s : {stem + ".C" + std::to_string(m), stem + ".a" + std::to_string(m)}) {
      if (auto id = crn.find(s)) total += w * c.get(*id);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("bound specs and counter choices") {
  CHECK(BoundSpec{CounterMode::Ladder, 3}.bound() == 8);
  CHECK(BoundSpec{CounterMode::Dexp, 2}.bound() == 16);
  CHECK(BoundSpec{CounterMode::Gated, 2}.to_string() == "gated:2");
  CHECK(BoundSpec::covering(CounterMode::Ladder, 0) == BoundSpec{CounterMode::Ladder, 1});
  CHECK(BoundSpec::covering(CounterMode::Ladder, 5) == BoundSpec{CounterMode::Ladder, 3});
  CHECK(BoundSpec::covering(CounterMode::Dexp, 2) == BoundSpec{CounterMode::Dexp, 0});
  CHECK(BoundSpec::covering(CounterMode::Dexp, 17) == BoundSpec{CounterMode::Dexp, 3});

  const auto c = CounterChoice::parse("dexp:1");
  CHECK(c.mode == CounterMode::Dexp);
  CHECK(c.exponent == 1u);
  CHECK(CounterChoice::parse("gated").to_string() == "gated");
  CHECK_THROWS_AS(CounterChoice::parse("ladder:0"), std::invalid_argument);
  CHECK_THROWS_AS(CounterChoice::parse("ladder:x"), std::invalid_argument);
  CHECK_THROWS_AS(CounterChoice::parse("abacus"), std::invalid_argument);

  const Registers maxima{{"a", 3}, {"b", 9}};
  const auto auto_bounds = choose_bounds(maxima, CounterChoice::parse("ladder"));
  CHECK(auto_bounds.at("a").exponent == 2);
  CHECK(auto_bounds.at("b").exponent == 4);
  CHECK(choose_bounds(maxima, CounterChoice::parse("dexp:2")).at("a").bound() == 16);
  CHECK_THROWS_AS(choose_bounds(maxima, CounterChoice::parse("gated:3")), BoundTooSmall);
}

TEST_CASE("missing bounds are rejected") {
  const auto p = parse(kTwoAPlusB);
  CHECK_THROWS_AS(compile_rm(p, {{"a", {CounterMode::Gated, 2}}}), UnboundedRegister);
  CHECK_THROWS_AS(build_initializer({"a"}, {}, "L", "S0"), UnboundedRegister);
}

TEST_CASE("a single increment with bound four, every counter mode") {
  const auto p = parse(kIncOnce);
  for (const BoundSpec b : {BoundSpec{CounterMode::Ladder, 2}, BoundSpec{CounterMode::Gated, 2},
                            BoundSpec{CounterMode::Dexp, 1}}) {
    CAPTURE(b.to_string());
    const auto c = compile_rm(p, all(p, b));
    const auto v = haltingly_computes(c.crn, c.initial(), c.output(), c.halt(), 1);
    CHECK(v.status == Status::Holds);
    CHECK(c.manifest.registers.at("r1").bound.bound() == 4);
    CHECK(c.manifest.registers.at("r1").active == "Y");
  }
  const auto gated = compile_rm(p, all(p, {CounterMode::Gated, 2}));
  CHECK_FALSE(check_leader_arity(gated.crn, gated.leaders()));
  const auto ladder = compile_rm(p, all(p, {CounterMode::Ladder, 2}));
  CHECK(check_leader_arity(ladder.crn, ladder.leaders()));
  CHECK_FALSE(check_leader_arity(ladder.crn, ladder.leaders(), LeaderRule::AllowNeutral));
}

TEST_CASE("compiled 2a+b agrees with the interpreter") {
  const auto p = parse(kTwoAPlusB);
  for (const CounterMode mode : {CounterMode::Ladder, CounterMode::Gated}) {
    const auto c = compile_rm(p, all(p, {mode, 4}));
    for (int a = 0; a <= 3; ++a) {
      for (int b = 0; b <= 3; ++b) {
        CAPTURE(a);
        CAPTURE(b);
        const Registers in{{"a", a}, {"b", b}};
        const Count want = run_rm(p, in).regs.at("y");
        CHECK(want == testing::naive_run(p, {{"a", a}, {"b", b}, {"y", 0}}).at("y"));
        SimOptions o;
        o.seed = 17 * a + b;
        o.stop_on = c.halt();
        o.max_steps = 10'000'000;
        const auto r = simulate(c.crn, c.at_state(p.initial_state, in), o);
        REQUIRE(r.reason == StopReason::Stopped);
        CHECK(r.final.get(c.output()) == want);
        if (a + b <= 2) {
          CHECK(haltingly_computes(c.crn, c.at_state(p.initial_state, in), c.output(), c.halt(),
                                   want)
                    .status == Status::Holds);
        }
      }
    }
  }
  const auto d = compile_rm(p, all(p, {CounterMode::Dexp, 1}));
  StochasticOptions so;
  so.trials = 20;
  CHECK(verify_stochastic(d.crn, d.at_state(0, {{"a", 1}, {"b", 2}}), d.output(), d.halt(), 4, so)
            .holds());
}

TEST_CASE("register tokens are conserved once initialized") {
  const auto p = parse(
      "# output: y\n"
      "0: inc a -> 1\n1: inc a -> 2\n2: dec a -> 3 / 4\n3: inc y -> 2\n4: halt\n");
  for (const CounterMode mode : {CounterMode::Ladder, CounterMode::Gated}) {
    CAPTURE(to_string(mode));
    const auto c = compile_rm(p, all(p, {mode, 2}));
    const auto g = reachable(c.crn, c.initial());
    REQUIRE_FALSE(g.truncated());
    std::set<SpeciesId> machine;
    for (const auto& s : c.manifest.states) machine.insert(c.crn.id(s));
    std::size_t checked = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Configuration cf = g.config(i);
      bool running = false;
      for (auto s : machine) running = running || cf.get(s) > 0;
      for (const auto& [name, info] : c.manifest.registers) {
        const Count w = register_weight(c.crn, cf, name, info);
        CHECK((w == 0 || w == 4));
        if (running) {
          CHECK(w == 4);
          ++checked;
        }
      }
    }
    CHECK(checked > 0);
    CHECK(haltingly_computes(c.crn, c.initial(), c.output(), c.halt(), 2).holds());
  }
}

TEST_CASE("zero checks jump only from an empty register") {
  const std::vector<JumpSite> site{{"S", "Z", "M"}};
  auto check = [](const GadgetFragment& f, const std::string& reg, const Count& b) {
    for (Count v = 0; v <= b; ++v) {
      CAPTURE(v);
      Crn crn = f.crn;
      Configuration init;
      init.set(crn.intern("S"), 1);
      init.set(crn.intern(reg + ".I"), b - v);
      const auto z = Configuration{{crn.intern("Z"), 1}};
      const auto cov = coverability(crn, init, z);
      CHECK(cov.status == (v == 0 ? Status::Holds : Status::Fails));
      if (cov.witness) CHECK(replay(crn, init, cov.path));
    }
  };
  for (unsigned n : {2u, 3u}) {
    check(build_ladder_zero_check("r", n, site), "r", Count(1) << n);
    check(build_gated_zero_check("r", n, site), "r", Count(1) << n);
  }
  for (unsigned k : {0u, 1u}) check(build_dexp_zero_check("r", k, site), "r", double_exp(k));

  const auto d = build_dexp_zero_check("r", 1, site);
  const auto g = reachable(d.crn, Configuration{{d.crn.id("S"), 1}, {d.crn.id("r.I"), 4}});
  REQUIRE_FALSE(g.truncated());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.count(i, d.crn.id("Z")) > 0) {
      CHECK(g.config(i) == Configuration{{d.crn.id("Z"), 1}, {d.crn.id("r.I"), 4}});
    }
  }
}

TEST_CASE("initializers fill registers to their bounds in order") {
  SUBCASE("ladder") {
    const std::map<std::string, BoundSpec> b{{"r", {CounterMode::Ladder, 2}}};
    GadgetFragment f = build_initializer({"r"}, b, "L", "S0");
    const auto ladder = build_ladder_zero_check("r", 2, {});
    for (const auto& rx : ladder.crn.reactions()) f.crn.add(f.crn.translate(ladder.crn, rx));
    const auto g = reachable(f.crn, Configuration{{f.crn.id("L"), 1}});
    REQUIRE_FALSE(g.truncated());
    const auto S0 = f.crn.id("S0");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.count(i, S0) == 0) continue;
      ++hits;
      CHECK(g.total(i) >= 2);
      CHECK(register_weight(f.crn, g.config(i), "r",
                            RegisterInfo{"r.A", "r.I", b.at("r"), {}}) == 4);
    }
    CHECK(hits > 0);
    CHECK(g.find(Configuration{{S0, 1}, {f.crn.id("r.C1"), 1}}));
  }
  SUBCASE("dexp") {
    const std::map<std::string, BoundSpec> b{{"r", {CounterMode::Dexp, 1}}};
    const GadgetFragment f = build_initializer({"r"}, b, "L", "S0");
    CHECK_FALSE(check_leader_arity(f.crn, [&] {
      LeaderSet s{f.crn.id("S0")};
      for (const auto& n : f.leader_names) s.insert(f.crn.id(n));
      return s;
    }()));
    const auto g = reachable(f.crn, Configuration{{f.crn.id("L"), 1}});
    const auto S0 = f.crn.id("S0");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.count(i, S0) > 0) {
        CHECK(g.config(i) == Configuration{{S0, 1}, {f.crn.id("r.I"), 4}});
      }
    }
    CHECK(g.find(Configuration{{S0, 1}, {f.crn.id("r.I"), 4}}));
  }
  SUBCASE("two registers one after another") {
    const std::map<std::string, BoundSpec> b{{"a", {CounterMode::Gated, 2}},
                                             {"b", {CounterMode::Dexp, 0}}};
    const GadgetFragment f = build_initializer({"a", "b"}, b, "L", "S0");
    const auto g = reachable(f.crn, Configuration{{f.crn.id("L"), 1}});
    const auto S0 = f.crn.id("S0"), aC1 = f.crn.id("a.C1"), bI = f.crn.id("b.I");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.count(i, bI) > 0) CHECK(g.count(i, aC1) == 1);
    }
    CHECK(g.find(Configuration{{S0, 1}, {aC1, 1}, {bI, 2}}));
  }
}

TEST_CASE("competing decrement and jump without a zero check is wrong") {
  // dec r then output 1 if it was nonzero.
  const auto p = parse("# output: y\n0: dec r -> 1 / 2\n1: inc y -> 2\n2: halt\n");
  Crn naive;
  naive.add("S0 + r.A -> S1 + r.I");
  naive.add("S0 -> H");
  naive.add("S1 + y.I -> Y + H");
  const Configuration init{{naive.id("S0"), 1}, {naive.id("r.A"), 1}, {naive.id("y.I"), 1}};
  const auto bad = haltingly_computes(naive, init, naive.id("Y"), naive.id("H"), 1);
  CHECK(bad.status == Status::Fails);
  REQUIRE(bad.witness);
  CHECK(replay(naive, init, bad.path));

  const auto c = compile_rm(p, all(p, {CounterMode::Ladder, 1}));
  CHECK(haltingly_computes(c.crn, c.at_state(0, {{"r", 1}}), c.output(), c.halt(), 1).holds());
  CHECK(haltingly_computes(c.crn, c.at_state(0, {{"r", 0}}), c.output(), c.halt(), 0).holds());
}

TEST_CASE("manifest") {
  const auto p = parse(kTwoAPlusB);
  CompileNames names;
  names.prefix = "q.";
  const auto c = compile_rm(p, all(p, {CounterMode::Gated, 3}), names);
  const auto& m = c.manifest;
  CHECK(m.states.size() == p.instructions.size());
  CHECK(m.states.back() == "H");
  CHECK(m.registers.at("a").active == "q.a.A");
  CHECK(m.registers.at("a").ladder.size() == 3);
  CHECK(c.crn.find("q.S0"));
  const auto back = CompileManifest::from_json(m.to_json());
  CHECK(back.to_json() == m.to_json());
  CHECK(back.leaders(c.crn) == c.leaders());
  CHECK(c.at_state(0, {{"a", 8}}).get(c.crn.id("q.a.I")) == 0);
  CHECK_THROWS_AS(c.at_state(0, {{"a", 9}}), BoundExceeded);

  const auto d = m.designated();
  CHECK(d.leader == "L");
  CHECK(d.halt == "H");
}
