#include "crnkit/dexp.hpp"

#include <set>
#include <stdexcept>

namespace crnkit {

MetaDirection direction_of(unsigned index) {
  if (index < 1 || index > 4) throw std::invalid_argument("meta-reaction index must be 1..4");
  return index <= 2 ? MetaDirection::Produce : MetaDirection::Consume;
}

std::string dexp_name(std::string_view family, unsigned index, unsigned layer) {
  return std::string(family) + "_" + std::to_string(index) + "^" + std::to_string(layer);
}

Count double_exp(unsigned k) {
  Count one = 1;
  return one << (std::size_t{1} << k);
}

namespace {

struct BoxNames {
  std::string s, h, x, t1, t2, c1, c2, c3, c4;
};

BoxNames names_for(const MetaReactionSpec& spec) {
  const unsigned i = spec.index;
  const unsigned k = spec.layer;
  auto own = [&](std::string_view fam) {
    return spec.prefix ? *spec.prefix + "." + std::string(fam) : dexp_name(fam, i, k);
  };
  BoxNames n;
  n.s = own("S");
  n.h = own("H");
  n.x = spec.target ? *spec.target : dexp_name("X", i, k);
  n.t1 = own("T1");
  n.t2 = own("T2");
  n.c1 = own("C1");
  n.c2 = own("C2");
  n.c3 = own("C3");
  n.c4 = own("C4");
  return n;
}

void rev(Crn& crn, const NamedSide& lhs, const NamedSide& rhs) {
  crn.add(lhs, rhs);
  crn.add(rhs, lhs);
}

void emit(Crn& crn, const MetaReactionSpec& spec, std::set<std::pair<unsigned, unsigned>>& done,
          std::vector<std::string>& leaders) {
  const bool produce = direction_of(spec.index) == MetaDirection::Produce;
  const BoxNames n = names_for(spec);
  if (spec.layer == 0) {
    if (produce) {
      rev(crn, {{n.s, 1}}, {{n.h, 1}, {n.x, 2}});
    } else {
      rev(crn, {{n.x, 2}, {n.s, 1}}, {{n.h, 1}});
    }
    leaders.push_back(n.s);
    leaders.push_back(n.h);
    return;
  }
  const unsigned j = spec.layer - 1;
  auto S = [j](unsigned i) { return dexp_name("S", i, j); };
  auto H = [j](unsigned i) { return dexp_name("H", i, j); };
  auto X = [j](unsigned i) { return dexp_name("X", i, j); };

  // Enter: run box 1, then box 2 while trading X1 for X4.
  rev(crn, {{n.s, 1}}, {{n.c1, 1}, {S(1), 1}});
  rev(crn, {{n.c1, 1}, {H(1), 1}}, {{n.t1, 1}});
  rev(crn, {{n.t1, 1}, {X(1), 1}}, {{n.c2, 1}, {X(4), 1}, {S(2), 1}});
  rev(crn, {{n.c2, 1}, {H(2), 1}}, {{n.t2, 1}});
  // Loop body: each X2 -> X3 move emits (or absorbs) one target token.
  if (produce) {
    rev(crn, {{n.t2, 1}, {X(2), 1}}, {{n.t2, 1}, {X(3), 1}, {n.x, 1}});
  } else {
    rev(crn, {{n.x, 1}, {n.t2, 1}, {X(2), 1}}, {{n.t2, 1}, {X(3), 1}});
  }
  // Run box 3; then either repeat from T1 or run box 4 and finish.
  rev(crn, {{n.t2, 1}}, {{n.c3, 1}, {S(3), 1}});
  rev(crn, {{n.c3, 1}, {H(3), 1}}, {{n.t1, 1}});
  rev(crn, {{n.c3, 1}, {H(3), 1}}, {{n.c4, 1}, {S(4), 1}});
  rev(crn, {{n.c4, 1}, {H(4), 1}}, {{n.h, 1}});
  for (const auto* s : {&n.s, &n.h, &n.t1, &n.t2}) leaders.push_back(*s);

  for (unsigned i = 1; i <= 4; ++i) {
    if (!done.insert({j, i}).second) continue;
    emit(crn, MetaReactionSpec{j, i, std::nullopt, std::nullopt}, done, leaders);
  }
}

}  // namespace

std::vector<std::string> emit_box(Crn& crn, const MetaReactionSpec& spec) {
  std::set<std::pair<unsigned, unsigned>> done;
  std::vector<std::string> leaders;
  emit(crn, spec, done, leaders);
  std::set<std::string> uniq(leaders.begin(), leaders.end());
  return {uniq.begin(), uniq.end()};
}

LeaderSet Fragment::leaders_in(const Crn& other) const {
  LeaderSet out;
  for (const auto& n : leader_names) {
    if (auto s = other.find(n)) out.insert(*s);
  }
  return out;
}

nlohmann::json Fragment::manifest() const {
  return {{"layer", layer},
          {"index", index},
          {"direction", direction_of(index) == MetaDirection::Produce ? "produce" : "consume"},
          {"s_species", s_species},
          {"h_species", h_species},
          {"target", x_species},
          {"expected_count", to_string(expected_count)},
          {"leader_set", leader_names}};
}

Fragment expand(const MetaReactionSpec& spec) {
  direction_of(spec.index);
  Fragment f;
  f.leader_names = emit_box(f.crn, spec);
  const BoxNames n = names_for(spec);
  f.s_species = n.s;
  f.h_species = n.h;
  f.x_species = n.x;
  f.layer = spec.layer;
  f.index = spec.index;
  f.expected_count = double_exp(spec.layer);
  if (spec.layer > 0) {
    const unsigned j = spec.layer - 1;
    Crn& c = f.crn;
    const SpeciesId t2 = c.id(n.t2), x2 = c.id(dexp_name("X", 2, j)),
                    x3 = c.id(dexp_name("X", 3, j)), x = c.id(n.x);
    Reaction fwd = direction_of(spec.index) == MetaDirection::Produce
                       ? Reaction({{t2, 1}, {x2, 1}}, {{t2, 1}, {x3, 1}, {x, 1}})
                       : Reaction({{x, 1}, {t2, 1}, {x2, 1}}, {{t2, 1}, {x3, 1}});
    f.loop_forward = c.index_of(fwd);
    f.loop_reverse = c.index_of(fwd.reversed());
  }
  return f;
}

std::vector<Fragment> base_layer() {
  std::vector<Fragment> out;
  for (unsigned i = 1; i <= 4; ++i) out.push_back(expand({0, i, std::nullopt, std::nullopt}));
  return out;
}

Fragment production_fragment(unsigned k, const std::optional<std::string>& target,
                             const std::optional<std::string>& prefix) {
  return expand({k, 1, target, prefix});
}

Fragment consumption_fragment(unsigned k, const std::optional<std::string>& target,
                              const std::optional<std::string>& prefix) {
  return expand({k, 3, target, prefix});
}

}  // namespace crnkit
