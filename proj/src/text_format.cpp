#include <algorithm>
#include <cctype>
#include <charconv>

#include "crnkit/core.hpp"
#include "crnkit/io.hpp"

namespace crnkit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '^' ||
         c == '\'';
}

/// Splits "2 A + B" into named terms. Throws std::invalid_argument.
NamedSide parse_side(std::string_view side) {
  side = trim(side);
  if (side.empty()) throw std::invalid_argument("empty side");
  NamedSide out;
  if (side == "0") return out;
  std::size_t pos = 0;
  while (true) {
    std::size_t plus = side.find('+', pos);
    std::string_view term = trim(side.substr(pos, plus == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : plus - pos));
    if (term.empty()) throw std::invalid_argument("empty term");
    std::uint32_t coef = 1;
    std::size_t i = 0;
    while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
    if (i > 0) {
      auto [p, ec] = std::from_chars(term.data(), term.data() + i, coef);
      if (ec != std::errc() || coef == 0) {
        throw std::invalid_argument("bad coefficient '" + std::string(term.substr(0, i)) + "'");
      }
    }
    std::string_view name = trim(term.substr(i));
    if (!valid_species_name(name)) {
      throw std::invalid_argument("bad species name '" + std::string(name) + "'");
    }
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == name; });
    if (it != out.end()) {
      it->second += coef;
    } else {
      out.emplace_back(std::string(name), coef);
    }
    if (plus == std::string_view::npos) break;
    pos = plus + 1;
  }
  return out;
}

std::uint32_t total(const NamedSide& s) {
  std::uint32_t n = 0;
  for (const auto& e : s) n += e.second;
  return n;
}

std::size_t add_line(Crn& crn, std::string_view line) {
  bool reversible = false;
  std::size_t arrow = line.find("<->");
  std::size_t width = 3;
  if (arrow != std::string_view::npos) {
    reversible = true;
  } else {
    arrow = line.find("->");
    width = 2;
  }
  if (arrow == std::string_view::npos) throw std::invalid_argument("missing '->'");
  NamedSide lhs = parse_side(line.substr(0, arrow));
  NamedSide rhs = parse_side(line.substr(arrow + width));
  if (total(lhs) > kMaxArity || total(rhs) > kMaxArity) {
    throw std::invalid_argument("arity exceeds 3");
  }
  if (lhs.empty()) throw std::invalid_argument("reaction needs at least one reactant");
  if (reversible && rhs.empty()) throw std::invalid_argument("reverse has no reactants");
  std::size_t added = crn.add(lhs, rhs) ? 1 : 0;
  if (reversible) added += crn.add(rhs, lhs) ? 1 : 0;
  return added;
}

void write_side(std::string& out, const Crn& crn, std::span<const Term> side) {
  if (side.empty()) {
    out += '0';
    return;
  }
  bool first = true;
  for (const auto& t : side) {
    if (!first) out += " + ";
    first = false;
    if (t.coef != 1) out += std::to_string(t.coef) + " ";
    out += crn.name(t.species);
  }
}

}  // namespace

bool valid_species_name(std::string_view name) {
  if (name.empty() || !name_start(name.front())) return false;
  return std::all_of(name.begin(), name.end(), name_char);
}

std::size_t Crn::add(std::string_view line) {
  try {
    return add_line(*this, line);
  } catch (const std::invalid_argument& e) {
    throw InvalidReaction(e.what());
  }
}

CrnDocument parse_text(std::string_view text) {
  CrnDocument doc;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    std::string_view line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) {
      std::string_view comment = trim(line.substr(hash + 1));
      line = line.substr(0, hash);
      if (trim(line).empty() && comment.starts_with("species:")) {
        std::string_view rest = comment.substr(8);
        while (!(rest = trim(rest)).empty()) {
          const std::size_t end = std::min(rest.find(' '), rest.size());
          const std::string_view v = rest.substr(0, end);
          if (!valid_species_name(v)) throw ParseError(lineno, "bad species name");
          doc.crn.intern(v);
          rest = rest.substr(end);
        }
      }
      for (auto [key, slot] : {std::pair{std::string_view("leader:"), &doc.designated.leader},
                               std::pair{std::string_view("output:"), &doc.designated.output},
                               std::pair{std::string_view("halt:"), &doc.designated.halt}}) {
        if (trim(line).empty() && comment.starts_with(key)) {
          std::string_view v = trim(comment.substr(key.size()));
          if (!valid_species_name(v)) throw ParseError(lineno, "bad designated species name");
          *slot = std::string(v);
        }
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    try {
      add_line(doc.crn, line);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  for (const auto* n : {&doc.designated.leader, &doc.designated.output, &doc.designated.halt}) {
    if (*n) doc.crn.intern(**n);
  }
  return doc;
}

std::string serialize_text(const Crn& crn, const Designated& d) {
  std::string out;
  // Species order is implied by first use unless stated.
  Crn implied;
  for (const auto& r : crn.reactions()) {
    for (const auto& t : r.reactants()) implied.intern(crn.name(t.species));
    for (const auto& t : r.products()) implied.intern(crn.name(t.species));
  }
  for (const auto* n : {&d.leader, &d.output, &d.halt}) {
    if (*n) implied.intern(**n);
  }
  if (implied.species_names() != crn.species_names()) {
    out += "# species:";
    for (const auto& n : crn.species_names()) out += " " + n;
    out += "\n";
  }
  if (d.leader) out += "# leader: " + *d.leader + "\n";
  if (d.output) out += "# output: " + *d.output + "\n";
  if (d.halt) out += "# halt: " + *d.halt + "\n";
  const auto rs = crn.reactions();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    write_side(out, crn, rs[i].reactants());
    if (i + 1 < rs.size() && rs[i + 1] == rs[i].reversed() && !rs[i].products().empty()) {
      out += " <-> ";
      write_side(out, crn, rs[i].products());
      out += '\n';
      ++i;
      continue;
    }
    out += " -> ";
    write_side(out, crn, rs[i].products());
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configurations

namespace {

Configuration parse_config_impl(Crn* mut, const Crn& crn, std::string_view text) {
  text = trim(text);
  if (text.starts_with('{') && text.ends_with('}')) text = trim(text.substr(1, text.size() - 2));
  Configuration c;
  if (text.empty() || text == "0") return c;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view item = trim(text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    pos = comma == std::string_view::npos ? text.size() + 1 : comma + 1;
    if (item.empty()) throw ParseError(1, "empty configuration entry");
    std::size_t i = 0;
    while (i < item.size() && std::isdigit(static_cast<unsigned char>(item[i]))) ++i;
    Count n = 1;
    if (i > 0) n = Count(std::string(item.substr(0, i)));
    std::string_view name = trim(item.substr(i));
    if (!valid_species_name(name)) {
      throw ParseError(1, "bad species name '" + std::string(name) + "'");
    }
    SpeciesId s = mut ? mut->intern(name) : crn.id(name);
    c.add(s, n);
  }
  return c;
}

}  // namespace

Configuration parse_configuration(const Crn& crn, std::string_view text) {
  return parse_config_impl(nullptr, crn, text);
}

Configuration parse_configuration(Crn& crn, std::string_view text, bool intern) {
  return parse_config_impl(intern ? &crn : nullptr, crn, text);
}

std::string format_configuration(const Crn& crn, const Configuration& c) {
  if (c.empty()) return "{}";
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& [s, n] : c.entries()) items.emplace_back(crn.name(s), to_string(n));
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i].second + " " + items[i].first;
  }
  return out + "}";
}

}  // namespace crnkit
