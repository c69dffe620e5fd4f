#pragma once

// Discrete chemical reaction network model: species, reactions, networks
// and configurations with arbitrary-precision counts.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "crnkit/errors.hpp"

namespace crnkit {

using Count = boost::multiprecision::cpp_int;

std::string to_string(const Count& c);

/// Largest total multiplicity allowed on either side of a reaction.
inline constexpr std::uint32_t kMaxArity = 3;

struct SpeciesId {
  std::uint32_t value = 0;
  auto operator<=>(const SpeciesId&) const = default;
};

/// One species with its stoichiometric coefficient.
struct Term {
  SpeciesId species;
  std::uint32_t coef = 1;
  auto operator<=>(const Term&) const = default;
};

/// A reaction over species ids of a particular Crn. Terms are kept sorted by
/// species id with merged coefficients, so equal multisets compare equal.
class Reaction {
 public:
  Reaction() = default;
  Reaction(std::vector<Term> reactants, std::vector<Term> products);

  std::span<const Term> reactants() const { return reactants_; }
  std::span<const Term> products() const { return products_; }

  std::uint32_t reactant_arity() const;
  std::uint32_t product_arity() const;

  std::uint32_t reactant_coef(SpeciesId s) const;
  std::uint32_t product_coef(SpeciesId s) const;

  /// Net change of s when the reaction fires once.
  std::int64_t delta(SpeciesId s) const;

  Reaction reversed() const { return Reaction(products_, reactants_); }

  bool operator==(const Reaction&) const = default;

 private:
  std::vector<Term> reactants_;
  std::vector<Term> products_;
};

struct ReactionHash {
  std::size_t operator()(const Reaction& r) const noexcept;
};

/// Species given by name, used to build reactions before interning.
using NamedSide = std::vector<std::pair<std::string, std::uint32_t>>;

/// A chemical reaction network. Reactions have set semantics: inserting a
/// duplicate is a no-op, so size() is the number of distinct reactions.
class Crn {
 public:
  SpeciesId intern(std::string_view name);
  std::optional<SpeciesId> find(std::string_view name) const;
  /// Throws UnknownSpecies.
  SpeciesId id(std::string_view name) const;
  const std::string& name(SpeciesId s) const { return names_.at(s.value); }

  std::size_t species_count() const { return names_.size(); }
  const std::vector<std::string>& species_names() const { return names_; }

  std::span<const Reaction> reactions() const { return reactions_; }
  const Reaction& reaction(std::size_t i) const { return reactions_.at(i); }
  std::size_t size() const { return reactions_.size(); }
  bool empty() const { return reactions_.empty(); }

  /// Validates and inserts; returns false when an equal reaction exists.
  bool add(const Reaction& r);
  bool add(const NamedSide& reactants, const NamedSide& products);
  /// Parses a single reaction line in the text format ("2 A + B -> C",
  /// "X <-> 2 Y"). Returns the number of reactions actually inserted.
  std::size_t add(std::string_view line);

  /// Adds r and its reverse. Throws InvalidReverse when the reverse breaks
  /// the arity rules.
  void add_reversible(const Reaction& r);

  std::optional<std::size_t> index_of(const Reaction& r) const;
  bool contains(const Reaction& r) const { return index_of(r).has_value(); }

  /// Reaction with species taken from another network, matched by name.
  Reaction translate(const Crn& other, const Reaction& r);

  /// Renders a reaction in the text format.
  std::string format(const Reaction& r) const;
  std::string format(std::size_t i) const { return format(reactions_.at(i)); }

  /// Same species names (as a set) and the same reaction sequence by name.
  bool equivalent(const Crn& other) const;
  /// Same species names and the same reaction set by name, order ignored.
  bool same_reaction_set(const Crn& other) const;

 private:
  void validate(const Reaction& r) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, SpeciesId> ids_;
  std::vector<Reaction> reactions_;
  std::unordered_map<Reaction, std::size_t, ReactionHash> index_;
};

Crn add_reversible(Crn crn, const Reaction& r);
/// Union of species and reactions; species with equal names are identified.
/// Reactions of a come first, then the new ones of b in their order.
Crn merge(const Crn& a, const Crn& b);

/// Sparse map from species to a positive count. Absent species have count 0.
class Configuration {
 public:
  using Entry = std::pair<SpeciesId, Count>;

  Configuration() = default;
  Configuration(std::initializer_list<Entry> entries);

  Count get(SpeciesId s) const;
  void set(SpeciesId s, Count c);
  void add(SpeciesId s, const Count& c);
  /// Throws NotApplicable if the count would go negative.
  void sub(SpeciesId s, const Count& c);

  std::span<const Entry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  Count total() const;
  /// True when this configuration is componentwise >= other.
  bool covers(const Configuration& other) const;

  bool operator==(const Configuration&) const = default;
  bool operator<(const Configuration& o) const { return entries_ < o.entries_; }

 private:
  std::vector<Entry> entries_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

bool applicable(const Configuration& c, const Reaction& r);
/// c - reactants + products. Throws NotApplicable.
Configuration apply(const Configuration& c, const Reaction& r);
/// Indices of reactions applicable in c, in declaration order.
std::vector<std::size_t> enabled(const Crn& crn, const Configuration& c);

/// Parses "3 R1, 1 S0" (also "{...}", "0" or "" for the empty configuration).
/// Species must exist in crn unless intern is set.
Configuration parse_configuration(const Crn& crn, std::string_view text);
Configuration parse_configuration(Crn& crn, std::string_view text, bool intern);
std::string format_configuration(const Crn& crn, const Configuration& c);

/// Configuration translated between networks by species name.
Configuration translate(const Crn& from, const Crn& to, const Configuration& c);

}  // namespace crnkit
