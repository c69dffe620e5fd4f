#include <fstream>
#include <sstream>

#include "crnkit/io.hpp"

namespace crnkit {

using nlohmann::json;

namespace {

json side_to_json(const Crn& crn, std::span<const Term> side) {
  json out = json::object();
  for (const auto& t : side) out[crn.name(t.species)] = t.coef;
  return out;
}

NamedSide side_from_json(const json& j) {
  NamedSide out;
  if (!j.is_object()) throw Error("reaction side must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!valid_species_name(it.key())) throw Error("bad species name '" + it.key() + "'");
    out.emplace_back(it.key(), it.value().get<std::uint32_t>());
  }
  return out;
}

}  // namespace

json to_json(const Crn& crn, const Designated& d) {
  json doc;
  doc["species"] = crn.species_names();
  json rs = json::array();
  for (const auto& r : crn.reactions()) {
    rs.push_back({{"reactants", side_to_json(crn, r.reactants())},
                  {"products", side_to_json(crn, r.products())}});
  }
  doc["reactions"] = std::move(rs);
  json des = json::object();
  if (d.leader) des["leader"] = *d.leader;
  if (d.output) des["output"] = *d.output;
  if (d.halt) des["halt"] = *d.halt;
  doc["designated"] = std::move(des);
  return doc;
}

CrnDocument from_json(const json& doc) {
  CrnDocument out;
  if (doc.contains("species")) {
    for (const auto& n : doc.at("species")) {
      const auto name = n.get<std::string>();
      if (!valid_species_name(name)) throw Error("bad species name '" + name + "'");
      out.crn.intern(name);
    }
  }
  for (const auto& r : doc.at("reactions")) {
    out.crn.add(side_from_json(r.at("reactants")), side_from_json(r.at("products")));
  }
  if (doc.contains("designated")) {
    const auto& d = doc.at("designated");
    if (d.contains("leader")) out.designated.leader = d.at("leader").get<std::string>();
    if (d.contains("output")) out.designated.output = d.at("output").get<std::string>();
    if (d.contains("halt")) out.designated.halt = d.at("halt").get<std::string>();
  }
  for (const auto* n : {&out.designated.leader, &out.designated.output, &out.designated.halt}) {
    if (*n) out.crn.intern(**n);
  }
  if (doc.contains("manifest")) out.manifest = doc.at("manifest");
  return out;
}

CrnDocument load_crn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  if (path.ends_with(".json")) {
    try {
      return from_json(json::parse(ss.str()));
    } catch (const json::exception& e) {
      throw Error(path + ": " + e.what());
    }
  }
  return parse_text(ss.str());
}

void save_crn(const std::string& path, const Crn& crn, const Designated& d,
              const json& manifest) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  if (path.ends_with(".json")) {
    json doc = to_json(crn, d);
    if (!manifest.is_null()) doc["manifest"] = manifest;
    out << doc.dump(2) << '\n';
  } else {
    out << serialize_text(crn, d);
  }
}

}  // namespace crnkit
