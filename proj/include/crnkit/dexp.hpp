#pragma once

// Doubly exponential counter. A layer-k meta-reaction
//   S_i^k <=> H_i^k + 2^(2^k) X_i^k        (i = 1, 2: production)
//   2^(2^k) X_i^k + S_i^k <=> H_i^k        (i = 3, 4: consumption)
// expands into nine reversible reactions over four layer-(k-1) boxes.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crnkit/analysis.hpp"
#include "crnkit/core.hpp"

namespace crnkit {

enum class MetaDirection { Produce, Consume };

MetaDirection direction_of(unsigned index);

/// Canonical species name, e.g. dexp_name("T1", 2, 3) == "T1_2^3".
std::string dexp_name(std::string_view family, unsigned index, unsigned layer);

struct MetaReactionSpec {
  unsigned layer = 0;
  unsigned index = 1;  // 1..4
  /// External species that plays the role of X_index^layer.
  std::optional<std::string> target = std::nullopt;
  /// When set, the top box's own species are named "<prefix>.S", "<prefix>.H",
  /// "<prefix>.T1", ... instead of their canonical names. Sub-boxes always
  /// keep canonical names so that separate top boxes share them.
  std::optional<std::string> prefix = std::nullopt;
};

struct Fragment {
  Crn crn;
  std::string s_species;
  std::string h_species;
  std::string x_species;
  std::vector<std::string> leader_names;
  Count expected_count;
  unsigned layer = 0;
  unsigned index = 1;
  /// The top box's loop reaction in both directions (absent for layer 0).
  std::optional<std::size_t> loop_forward;
  std::optional<std::size_t> loop_reverse;

  LeaderSet leaders() const { return leaders_in(crn); }
  /// Leader set resolved against another network by name.
  LeaderSet leaders_in(const Crn& other) const;
  nlohmann::json manifest() const;
};

/// 2^(2^k).
Count double_exp(unsigned k);

/// The four base boxes, indices 1..4.
std::vector<Fragment> base_layer();

/// Throws std::invalid_argument for an index outside 1..4.
Fragment expand(const MetaReactionSpec& spec);

Fragment production_fragment(unsigned k, const std::optional<std::string>& target = std::nullopt,
                             const std::optional<std::string>& prefix = std::nullopt);
Fragment consumption_fragment(unsigned k, const std::optional<std::string>& target = std::nullopt,
                              const std::optional<std::string>& prefix = std::nullopt);

/// Emits the box into crn and returns the names of its leader species.
/// Reactions already present are not duplicated.
std::vector<std::string> emit_box(Crn& crn, const MetaReactionSpec& spec);

}  // namespace crnkit
