#pragma once

// Independent oracles and generators shared by the test suites.

#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "crnkit/core.hpp"
#include "crnkit/machines.hpp"

namespace crnkit::testing {

/// Random network over species A, B, C, ... with reactions of arity 1..3.
inline Crn random_crn(std::mt19937_64& rng, unsigned n_species, unsigned n_reactions) {
  Crn crn;
  std::vector<std::string> names;
  for (unsigned i = 0; i < n_species; ++i) {
    names.push_back(std::string(1, static_cast<char>('A' + i)));
    crn.intern(names.back());
  }
  std::uniform_int_distribution<unsigned> pick(0, n_species - 1);
  std::uniform_int_distribution<unsigned> arity(1, 3);
  std::uniform_int_distribution<unsigned> parr(0, 3);
  auto side = [&](unsigned total) {
    std::map<std::string, std::uint32_t> m;
    for (unsigned i = 0; i < total; ++i) ++m[names[pick(rng)]];
    return NamedSide(m.begin(), m.end());
  };
  unsigned guard = 0;
  while (crn.size() < n_reactions && ++guard < 1000) {
    NamedSide lhs = side(arity(rng));
    NamedSide rhs = side(parr(rng));
    if (lhs == rhs) continue;
    crn.add(lhs, rhs);
  }
  return crn;
}

/// Every configuration reachable from init using only apply/enabled. Returns
/// false in `complete` when some configuration exceeds max_count in a species.
inline std::set<Configuration> closure(const Crn& crn, const Configuration& init,
                                       std::uint64_t max_count, bool& complete) {
  std::set<Configuration> seen{init};
  std::deque<Configuration> todo{init};
  complete = true;
  while (!todo.empty()) {
    Configuration c = todo.front();
    todo.pop_front();
    for (auto r : enabled(crn, c)) {
      Configuration d = apply(c, crn.reaction(r));
      bool over = false;
      for (const auto& [s, n] : d.entries()) over = over || n > max_count;
      if (over) {
        complete = false;
        continue;
      }
      if (seen.insert(d).second) todo.push_back(d);
    }
  }
  return seen;
}

/// Straightforward register machine interpreter used as a second oracle.
inline std::map<std::string, long long> naive_run(const RegisterMachineProgram& p,
                                                  std::map<std::string, long long> regs,
                                                  std::uint64_t max_steps = 10'000'000) {
  std::size_t pc = p.initial_state;
  for (std::uint64_t n = 0; n < max_steps; ++n) {
    const Instruction& ins = p.instructions.at(pc);
    if (std::holds_alternative<Halt>(ins)) return regs;
    if (const auto* i = std::get_if<Inc>(&ins)) {
      ++regs[i->reg];
      pc = i->next;
    } else if (const auto* d = std::get_if<Dec>(&ins)) {
      if (regs[d->reg] > 0) {
        --regs[d->reg];
        pc = d->nonzero;
      } else {
        pc = d->zero;
      }
    } else {
      const auto& c = std::get<Copy>(ins);
      regs[c.dst] += regs[c.src];
      pc = c.next;
    }
  }
  throw std::runtime_error("naive_run: step cap");
}

}  // namespace crnkit::testing
