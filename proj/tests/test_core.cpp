#include <doctest.h>

#include "crnkit/core.hpp"
#include "crnkit/io.hpp"
#include "support.hpp"

using namespace crnkit;

namespace {

Crn net(std::initializer_list<const char*> lines) {
  Crn crn;
  for (const char* l : lines) crn.add(l);
  return crn;
}

}  // namespace

TEST_CASE("applicable and apply follow multiset arithmetic") {
  Crn crn = net({"2 A -> B + C", "X + S -> S", "L -> 2 Y"});
  const auto A = crn.id("A"), B = crn.id("B"), C = crn.id("C");
  CHECK(applicable(Configuration{{A, 2}}, crn.reaction(0)));
  CHECK_FALSE(applicable(Configuration{{A, 1}}, crn.reaction(0)));
  CHECK(apply(Configuration{{A, 2}}, crn.reaction(0)) == Configuration{{B, 1}, {C, 1}});

  const auto X = crn.id("X"), S = crn.id("S");
  CHECK(apply(Configuration{{X, 3}, {S, 1}}, crn.reaction(1)) == Configuration{{X, 2}, {S, 1}});
  CHECK(apply(Configuration{{crn.id("L"), 1}}, crn.reaction(2)) ==
        Configuration{{crn.id("Y"), 2}});
  CHECK_THROWS_AS(apply(Configuration{{A, 1}}, crn.reaction(0)), NotApplicable);
}

TEST_CASE("null, empty-reactant and oversized reactions are rejected") {
  Crn crn;
  CHECK_THROWS_AS(crn.add({{"A", 1}, {"B", 1}}, {{"A", 1}, {"B", 1}}), InvalidReaction);
  CHECK_THROWS_AS(crn.add(NamedSide{}, {{"A", 1}}), InvalidReaction);
  CHECK_THROWS_AS(crn.add({{"A", 4}}, {{"B", 1}}), InvalidReaction);
  CHECK_THROWS_AS(crn.add({{"A", 1}}, {{"B", 2}, {"C", 2}}), InvalidReaction);
  CHECK(crn.empty());
}

TEST_CASE("enabled lists reactions in declaration order") {
  Crn crn = net({"A -> B", "A -> C", "L -> 2 Y"});
  CHECK(enabled(crn, Configuration{{crn.id("A"), 1}}) == std::vector<std::size_t>{0, 1});
  CHECK(enabled(crn, Configuration{{crn.id("Y"), 1}}).empty());
  CHECK(enabled(crn, Configuration{{crn.id("L"), 1}}) == std::vector<std::size_t>{2});
}

TEST_CASE("reversible reactions and set semantics") {
  Crn crn;
  crn.intern("A");
  crn.intern("B");
  const Reaction r({{crn.id("A"), 1}}, {{crn.id("B"), 2}});
  Crn once = add_reversible(crn, r);
  CHECK(once.size() == 2);
  CHECK(once.format(0) == "A -> 2 B");
  CHECK(once.format(1) == "2 B -> A");
  CHECK(add_reversible(once, r).size() == 2);
  CHECK_FALSE(once.add(r));

  Crn base = net({"2 X + S <-> H"});
  REQUIRE(base.size() == 2);
  CHECK(base.format(0) == "2 X + S -> H");
  CHECK(base.format(1) == "H -> 2 X + S");
}

TEST_CASE("reactions compare as multisets") {
  Crn crn = net({"A + A + B -> C"});
  CHECK(crn.format(0) == "2 A + B -> C");
  CHECK(crn.add("B + 2 A -> C") == 0);
  CHECK(crn.reaction(0).reactant_arity() == 3);
  CHECK(crn.reaction(0).delta(crn.id("A")) == -2);
}

TEST_CASE("merge identifies species by name") {
  Crn a = net({"S -> C1 + S_1^0", "S_1^0 <-> H_1^0 + 2 X_1^0"});
  Crn b = net({"T -> C2 + S_1^0", "S_1^0 <-> H_1^0 + 2 X_1^0"});
  Crn m = merge(a, b);
  CHECK(m.size() == 4);
  CHECK(merge(a, Crn{}).equivalent(a));
  CHECK(merge(a, a).equivalent(a));
  CHECK(merge(a, b).same_reaction_set(merge(b, a)));
}

TEST_CASE("text format parses sugar, comments and designated species") {
  const auto doc = parse_text(
      "# leader: L\n# output: Y\n# halt: H\n"
      "L -> H + 2 Y   # trailing comment\n\n"
      "2 X3 + S3 <-> H3\n"
      "H -> 0\n");
  CHECK(doc.crn.size() == 4);
  CHECK(doc.designated.leader == "L");
  CHECK(doc.designated.output == "Y");
  CHECK(doc.designated.halt == "H");
  CHECK(doc.crn.format(3) == "H -> 0");

  CHECK_THROWS_AS(parse_text("A + B -> C\n4 A -> B\n"), ParseError);
  try {
    parse_text("A -> B\nA + -> C\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_text("A => B\n"), ParseError);
}

TEST_CASE("text and structured formats round-trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Crn crn = testing::random_crn(rng, 1 + i % 6, 1 + i % 9);
    const Designated d{"A", crn.species_names().back(), std::nullopt};
    const auto text = parse_text(serialize_text(crn, d));
    CHECK(text.crn.equivalent(crn));
    CHECK(text.designated == d);
    CHECK(serialize_text(text.crn, text.designated) == serialize_text(crn, d));
    const auto js = from_json(to_json(crn, d));
    CHECK(js.crn.equivalent(crn));
    CHECK(js.designated == d);
  }
  Crn one = net({"A + B -> C"});
  CHECK(serialize_text(one) == "A + B -> C\n");
}

TEST_CASE("configurations parse and round-trip") {
  Crn crn = net({"R1 + S0 -> S1"});
  const Configuration c = parse_configuration(crn, "3 R1, 1 S0");
  CHECK(c.get(crn.id("R1")) == 3);
  CHECK(c.get(crn.id("S0")) == 1);
  CHECK(parse_configuration(crn, format_configuration(crn, c)) == c);
  CHECK(parse_configuration(crn, "{S0, 2 R1}") == parse_configuration(crn, "2 R1, S0"));
  CHECK(parse_configuration(crn, "0").empty());
  CHECK(parse_configuration(crn, "").empty());
  CHECK_THROWS(parse_configuration(crn, "1 Q"));
  Configuration big;
  big.set(crn.id("R1"), Count(1) << 200);
  CHECK(parse_configuration(crn, format_configuration(crn, big)) == big);
}

TEST_CASE("firing changes the total by the arity difference") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Crn crn = testing::random_crn(rng, 4, 5);
    Configuration c;
    for (std::uint32_t s = 0; s < crn.species_count(); ++s) c.set(SpeciesId{s}, rng() % 4);
    for (std::size_t r = 0; r < crn.size(); ++r) {
      const Reaction& rx = crn.reaction(r);
      if (!applicable(c, rx)) continue;
      const Configuration d = apply(c, rx);
      CHECK(d.total() - c.total() ==
            Count(rx.product_arity()) - Count(rx.reactant_arity()));
      for (const auto& [s, n] : d.entries()) CHECK(n > 0);
    }
  }
}

TEST_CASE("merge is associative and commutative on reaction sets") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    Crn a = testing::random_crn(rng, 4, 3), b = testing::random_crn(rng, 4, 3),
        c = testing::random_crn(rng, 4, 3);
    CHECK(merge(merge(a, b), c).same_reaction_set(merge(a, merge(b, c))));
    CHECK(merge(a, b).same_reaction_set(merge(b, a)));
  }
}
