#include "crnkit/core.hpp"

#include <algorithm>
#include <set>

namespace crnkit {

std::string to_string(const Count& c) { return c.str(); }

namespace {

std::vector<Term> normalize(std::vector<Term> side) {
  std::sort(side.begin(), side.end(),
            [](const Term& a, const Term& b) { return a.species < b.species; });
  std::vector<Term> out;
  for (const auto& t : side) {
    if (t.coef == 0) continue;
    if (!out.empty() && out.back().species == t.species) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  return out;
}

std::uint32_t arity(std::span<const Term> side) {
  std::uint32_t n = 0;
  for (const auto& t : side) n += t.coef;
  return n;
}

std::uint32_t coef_of(std::span<const Term> side, SpeciesId s) {
  for (const auto& t : side) {
    if (t.species == s) return t.coef;
  }
  return 0;
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Reaction::Reaction(std::vector<Term> reactants, std::vector<Term> products)
    : reactants_(normalize(std::move(reactants))),
      products_(normalize(std::move(products))) {}

std::uint32_t Reaction::reactant_arity() const { return arity(reactants_); }
std::uint32_t Reaction::product_arity() const { return arity(products_); }
std::uint32_t Reaction::reactant_coef(SpeciesId s) const { return coef_of(reactants_, s); }
std::uint32_t Reaction::product_coef(SpeciesId s) const { return coef_of(products_, s); }

std::int64_t Reaction::delta(SpeciesId s) const {
  return static_cast<std::int64_t>(product_coef(s)) -
         static_cast<std::int64_t>(reactant_coef(s));
}

std::size_t ReactionHash::operator()(const Reaction& r) const noexcept {
  std::size_t h = 0x51ed270b;
  for (const auto& t : r.reactants()) h = mix(mix(h, t.species.value), t.coef);
  h = mix(h, 0xfeed);
  for (const auto& t : r.products()) h = mix(mix(h, t.species.value), t.coef);
  return h;
}

SpeciesId Crn::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  if (name.empty()) throw InvalidReaction("empty species name");
  SpeciesId id{static_cast<std::uint32_t>(names_.size())};
  names_.emplace_back(name);
  ids_.emplace(std::string(name), id);
  return id;
}

std::optional<SpeciesId> Crn::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

SpeciesId Crn::id(std::string_view name) const {
  auto s = find(name);
  if (!s) throw UnknownSpecies("unknown species '" + std::string(name) + "'");
  return *s;
}

void Crn::validate(const Reaction& r) const {
  for (const auto& side : {r.reactants(), r.products()}) {
    for (const auto& t : side) {
      if (t.species.value >= names_.size()) {
        throw InvalidReaction("reaction references a species outside the network");
      }
    }
  }
  if (r.reactant_arity() < 1) {
    throw InvalidReaction("reaction needs at least one reactant: " + format(r));
  }
  if (r.reactant_arity() > kMaxArity || r.product_arity() > kMaxArity) {
    throw InvalidReaction("reaction exceeds arity 3: " + format(r));
  }
  if (std::ranges::equal(r.reactants(), r.products())) {
    throw InvalidReaction("null reaction (reactants equal products): " + format(r));
  }
}

bool Crn::add(const Reaction& r) {
  validate(r);
  if (index_.contains(r)) return false;
  index_.emplace(r, reactions_.size());
  reactions_.push_back(r);
  return true;
}

bool Crn::add(const NamedSide& reactants, const NamedSide& products) {
  std::vector<Term> lhs;
  std::vector<Term> rhs;
  for (const auto& [n, c] : reactants) lhs.push_back({intern(n), c});
  for (const auto& [n, c] : products) rhs.push_back({intern(n), c});
  return add(Reaction(std::move(lhs), std::move(rhs)));
}

void Crn::add_reversible(const Reaction& r) {
  const Reaction back = r.reversed();
  if (back.reactant_arity() < 1) {
    throw InvalidReverse("reverse has no reactants: " + format(back));
  }
  if (back.reactant_arity() > kMaxArity || back.product_arity() > kMaxArity) {
    throw InvalidReverse("reverse exceeds arity 3: " + format(back));
  }
  add(r);
  add(back);
}

std::optional<std::size_t> Crn::index_of(const Reaction& r) const {
  auto it = index_.find(r);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Reaction Crn::translate(const Crn& other, const Reaction& r) {
  std::vector<Term> lhs;
  std::vector<Term> rhs;
  for (const auto& t : r.reactants()) lhs.push_back({intern(other.name(t.species)), t.coef});
  for (const auto& t : r.products()) rhs.push_back({intern(other.name(t.species)), t.coef});
  return Reaction(std::move(lhs), std::move(rhs));
}

std::string Crn::format(const Reaction& r) const {
  auto side = [this](std::span<const Term> terms) {
    if (terms.empty()) return std::string("0");
    std::string out;
    for (const auto& t : terms) {
      if (!out.empty()) out += " + ";
      if (t.coef != 1) out += std::to_string(t.coef) + " ";
      out += t.species.value < names_.size() ? names_[t.species.value]
                                             : "#" + std::to_string(t.species.value);
    }
    return out;
  };
  return side(r.reactants()) + " -> " + side(r.products());
}

bool Crn::equivalent(const Crn& other) const {
  if (size() != other.size()) return false;
  std::set<std::string> a(names_.begin(), names_.end());
  std::set<std::string> b(other.names_.begin(), other.names_.end());
  if (a != b) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (format(i) != other.format(i)) return false;
  }
  return true;
}

bool Crn::same_reaction_set(const Crn& other) const {
  if (size() != other.size()) return false;
  std::set<std::string> a(names_.begin(), names_.end());
  std::set<std::string> b(other.names_.begin(), other.names_.end());
  if (a != b) return false;
  for (const auto& r : other.reactions_) {
    // Species all exist here, so the translation is a pure lookup.
    std::vector<Term> lhs;
    std::vector<Term> rhs;
    for (const auto& t : r.reactants()) lhs.push_back({id(other.name(t.species)), t.coef});
    for (const auto& t : r.products()) rhs.push_back({id(other.name(t.species)), t.coef});
    if (!contains(Reaction(std::move(lhs), std::move(rhs)))) return false;
  }
  return true;
}

Crn add_reversible(Crn crn, const Reaction& r) {
  crn.add_reversible(r);
  return crn;
}

Crn merge(const Crn& a, const Crn& b) {
  Crn out = a;
  for (const auto& n : b.species_names()) out.intern(n);
  for (const auto& r : b.reactions()) out.add(out.translate(b, r));
  return out;
}

// ---------------------------------------------------------------------------

Configuration::Configuration(std::initializer_list<Entry> entries) {
  for (const auto& [s, c] : entries) add(s, c);
}

Count Configuration::get(SpeciesId s) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                             [](const Entry& e, SpeciesId k) { return e.first < k; });
  if (it != entries_.end() && it->first == s) return it->second;
  return 0;
}

void Configuration::set(SpeciesId s, Count c) {
  if (c < 0) throw NotApplicable("negative count");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                             [](const Entry& e, SpeciesId k) { return e.first < k; });
  const bool present = it != entries_.end() && it->first == s;
  if (c == 0) {
    if (present) entries_.erase(it);
    return;
  }
  if (present) {
    it->second = std::move(c);
  } else {
    entries_.insert(it, {s, std::move(c)});
  }
}

void Configuration::add(SpeciesId s, const Count& c) { set(s, get(s) + c); }

void Configuration::sub(SpeciesId s, const Count& c) {
  Count now = get(s);
  if (now < c) throw NotApplicable("count would become negative");
  set(s, now - c);
}

Count Configuration::total() const {
  Count n = 0;
  for (const auto& e : entries_) n += e.second;
  return n;
}

bool Configuration::covers(const Configuration& other) const {
  for (const auto& [s, c] : other.entries_) {
    if (get(s) < c) return false;
  }
  return true;
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::size_t h = 0x2545f491;
  for (const auto& [s, n] : c.entries()) {
    h = mix(h, s.value);
    h = mix(h, static_cast<std::size_t>(static_cast<std::uint64_t>(n & 0xffffffffffffffffULL)));
  }
  return h;
}

bool applicable(const Configuration& c, const Reaction& r) {
  for (const auto& t : r.reactants()) {
    if (c.get(t.species) < t.coef) return false;
  }
  return true;
}

Configuration apply(const Configuration& c, const Reaction& r) {
  if (!applicable(c, r)) throw NotApplicable("reaction not applicable");
  Configuration out = c;
  for (const auto& t : r.reactants()) out.sub(t.species, t.coef);
  for (const auto& t : r.products()) out.add(t.species, t.coef);
  return out;
}

std::vector<std::size_t> enabled(const Crn& crn, const Configuration& c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < crn.size(); ++i) {
    if (applicable(c, crn.reaction(i))) out.push_back(i);
  }
  return out;
}

Configuration translate(const Crn& from, const Crn& to, const Configuration& c) {
  Configuration out;
  for (const auto& [s, n] : c.entries()) out.set(to.id(from.name(s)), n);
  return out;
}

}  // namespace crnkit
