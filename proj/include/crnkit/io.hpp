#pragma once

// Text and JSON serialization of networks.
//
// Text format, one reaction per line:
//   2 A + B -> C
//   X <-> 2 Y
//   L -> 0
// Comments start with '#'. The header comments "# leader: L", "# output: Y"
// and "# halt: H" carry the designated species.

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "crnkit/core.hpp"

namespace crnkit {

struct Designated {
  std::optional<std::string> leader;
  std::optional<std::string> output;
  std::optional<std::string> halt;

  bool operator==(const Designated&) const = default;
};

struct CrnDocument {
  Crn crn;
  Designated designated;
  nlohmann::json manifest;  // null unless present in a JSON document
};

/// Throws ParseError with the offending line number.
CrnDocument parse_text(std::string_view text);
std::string serialize_text(const Crn& crn, const Designated& d = {});

nlohmann::json to_json(const Crn& crn, const Designated& d = {});
CrnDocument from_json(const nlohmann::json& doc);

/// Reads a file, picking JSON for ".json" and the text format otherwise.
CrnDocument load_crn(const std::string& path);
void save_crn(const std::string& path, const Crn& crn, const Designated& d = {},
              const nlohmann::json& manifest = nullptr);

bool valid_species_name(std::string_view name);

}  // namespace crnkit
