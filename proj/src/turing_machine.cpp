#include <algorithm>
#include <set>

#include "crnkit/machines.hpp"

namespace crnkit {

void TuringMachine::validate() const {
  const std::set<std::string> st(states.begin(), states.end());
  if (st.size() != states.size()) throw InvalidProgram("duplicate state name");
  if (alphabet.find(blank) == std::string::npos) throw InvalidProgram("blank not in alphabet");
  for (char c : {'0', '1'}) {
    if (alphabet.find(c) == std::string::npos) {
      throw InvalidProgram("alphabet must contain '0' and '1'");
    }
  }
  if (blank == '0' || blank == '1') throw InvalidProgram("blank must differ from '0' and '1'");
  if (std::set<char>(alphabet.begin(), alphabet.end()).size() != alphabet.size()) {
    throw InvalidProgram("duplicate alphabet symbol");
  }
  if (!st.contains(start)) throw InvalidProgram("unknown start state '" + start + "'");
  if (!st.contains(halt)) throw InvalidProgram("unknown halt state '" + halt + "'");
  for (const auto& [key, t] : delta) {
    if (!st.contains(key.first) || !st.contains(t.next)) {
      throw InvalidProgram("transition uses an undeclared state");
    }
    if (key.first == halt) throw InvalidProgram("halt state has outgoing transitions");
    if (alphabet.find(key.second) == std::string::npos ||
        alphabet.find(t.write) == std::string::npos) {
      throw InvalidProgram("transition uses a symbol outside the alphabet");
    }
    if (t.move != 'L' && t.move != 'R') throw InvalidProgram("move must be 'L' or 'R'");
  }
  for (const auto& q : states) {
    if (q == halt) continue;
    for (char c : alphabet) {
      if (!delta.contains({q, c})) {
        throw InvalidProgram("no transition for state '" + q + "' on '" + std::string(1, c) +
                             "'");
      }
    }
  }
}

nlohmann::json TuringMachine::to_json() const {
  nlohmann::json j;
  j["states"] = states;
  j["alphabet"] = alphabet;
  j["blank"] = std::string(1, blank);
  j["start"] = start;
  j["halt"] = halt;
  auto ts = nlohmann::json::array();
  for (const auto& [key, t] : delta) {
    ts.push_back({{"state", key.first},
                  {"read", std::string(1, key.second)},
                  {"next", t.next},
                  {"write", std::string(1, t.write)},
                  {"move", std::string(1, t.move)}});
  }
  j["transitions"] = std::move(ts);
  return j;
}

TuringMachine TuringMachine::from_json(const nlohmann::json& j) {
  auto one_char = [](const nlohmann::json& v, const char* what) {
    const auto s = v.get<std::string>();
    if (s.size() != 1) throw InvalidProgram(std::string(what) + " must be a single character");
    return s[0];
  };
  TuringMachine tm;
  try {
    tm.states = j.at("states").get<std::vector<std::string>>();
    tm.alphabet = j.at("alphabet").get<std::string>();
    tm.blank = j.contains("blank") ? one_char(j.at("blank"), "blank") : '_';
    tm.start = j.at("start").get<std::string>();
    tm.halt = j.at("halt").get<std::string>();
    for (const auto& t : j.at("transitions")) {
      const auto key = std::pair{t.at("state").get<std::string>(), one_char(t.at("read"), "read")};
      if (tm.delta.contains(key)) throw InvalidProgram("duplicate transition");
      tm.delta[key] = {t.at("next").get<std::string>(), one_char(t.at("write"), "write"),
                       one_char(t.at("move"), "move")};
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidProgram(std::string("malformed machine: ") + e.what());
  }
  tm.validate();
  return tm;
}

std::string binary_word(const Count& x) {
  if (x == 0) return "";
  std::string s;
  Count v = x;
  while (v > 0) {
    s.push_back((v & 1) == 1 ? '1' : '0');
    v >>= 1;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

TmRunResult run_tm(const TuringMachine& tm, std::string_view input_word, std::size_t space_cap,
                   std::uint64_t step_cap) {
  tm.validate();
  // Dense transition table over (state index, symbol index).
  std::vector<int> sym(256, -1);
  for (std::size_t i = 0; i < tm.alphabet.size(); ++i) {
    sym[static_cast<unsigned char>(tm.alphabet[i])] = static_cast<int>(i);
  }
  const std::size_t g = tm.alphabet.size();
  auto state_index = [&](const std::string& q) {
    return static_cast<std::size_t>(std::find(tm.states.begin(), tm.states.end(), q) -
                                    tm.states.begin());
  };
  struct Row {
    std::size_t next;
    char write;
    int move;
  };
  std::vector<Row> table(tm.states.size() * g);
  for (const auto& [key, t] : tm.delta) {
    table[state_index(key.first) * g + sym[static_cast<unsigned char>(key.second)]] = {
        state_index(t.next), t.write, t.move == 'L' ? -1 : 1};
  }
  const std::size_t halt = state_index(tm.halt);

  // Tape cells [lo, hi] stored in a vector with an offset.
  std::vector<char> tape;
  long origin = 0;  // index of cell 0 in tape
  auto ensure = [&](long cell) {
    if (cell + origin < 0) {
      const long grow = std::max<long>(-(cell + origin), static_cast<long>(tape.size()) + 16);
      tape.insert(tape.begin(), static_cast<std::size_t>(grow), tm.blank);
      origin += grow;
    }
    if (cell + origin >= static_cast<long>(tape.size())) {
      tape.resize(static_cast<std::size_t>(cell + origin) + tape.size() + 16, tm.blank);
    }
  };
  const long n = static_cast<long>(input_word.size());
  ensure(0);
  ensure(-n);
  for (long i = 0; i < n; ++i) {
    const char c = input_word[static_cast<std::size_t>(i)];
    if (sym[static_cast<unsigned char>(c)] < 0) {
      throw InvalidProgram("input symbol outside the alphabet");
    }
    tape[static_cast<std::size_t>(i - (n - 1) + origin)] = c;
  }
  long lo = n > 0 ? -(n - 1) : 0;
  long hi = 0;
  long head = 0;
  std::size_t q = state_index(tm.start);
  std::uint64_t steps = 0;
  auto space = [&] { return static_cast<std::size_t>(hi - lo + 1); };
  if (space() > space_cap) throw SpaceCap("input exceeds the space cap");
  while (q != halt) {
    if (steps >= step_cap) {
      throw StepCap("Turing machine ran " + std::to_string(step_cap) + " steps without halting");
    }
    ++steps;
    ensure(head);
    char& cell = tape[static_cast<std::size_t>(head + origin)];
    const Row& row = table[q * g + sym[static_cast<unsigned char>(cell)]];
    cell = row.write;
    head += row.move;
    q = row.next;
    lo = std::min(lo, head);
    hi = std::max(hi, head);
    if (space() > space_cap) {
      throw SpaceCap("Turing machine used more than " + std::to_string(space_cap) + " cells");
    }
  }
  TmRunResult out;
  out.space_used = space();
  out.steps = steps;
  Count value = 0;
  Count weight = 1;
  for (long c = head; c + origin >= 0 && c + origin < static_cast<long>(tape.size()); --c) {
    const char s = tape[static_cast<std::size_t>(c + origin)];
    if (s != '0' && s != '1') break;
    if (s == '1') value += weight;
    weight <<= 1;
  }
  out.output = value;
  return out;
}

TmRunResult run_tm(const TuringMachine& tm, const Count& input, std::size_t space_cap,
                   std::uint64_t step_cap) {
  return run_tm(tm, binary_word(input), space_cap, step_cap);
}

namespace {

void on(TuringMachine& tm, const std::string& q, char read, const std::string& next, char write,
        char move) {
  tm.delta[{q, read}] = {next, write, move};
}

}  // namespace

TuringMachine successor_tm() {
  TuringMachine tm;
  tm.states = {"carry", "home", "done"};
  tm.alphabet = "_01";
  tm.start = "carry";
  tm.halt = "done";
  on(tm, "carry", '1', "carry", '0', 'L');
  on(tm, "carry", '0', "home", '1', 'R');
  on(tm, "carry", '_', "home", '1', 'R');
  on(tm, "home", '0', "home", '0', 'R');
  on(tm, "home", '1', "home", '1', 'R');
  on(tm, "home", '_', "done", '_', 'L');
  return tm;
}

TuringMachine write_one_tm() {
  TuringMachine tm;
  tm.states = {"w", "back", "done"};
  tm.alphabet = "_01";
  tm.start = "w";
  tm.halt = "done";
  // Writes 1 at the head, steps right and comes back.
  for (char c : std::string("_01")) on(tm, "w", c, "back", '1', 'R');
  for (char c : std::string("_01")) on(tm, "back", c, "done", c, 'L');
  return tm;
}

TuringMachine doubling_tm() {
  TuringMachine tm;
  tm.states = {"scan", "put", "back", "done"};
  tm.alphabet = "_01";
  tm.start = "scan";
  tm.halt = "done";
  // Empty input is 0: halt at once (step right, then back).
  on(tm, "scan", '_', "back", '_', 'R');
  on(tm, "scan", '0', "put", '0', 'R');
  on(tm, "scan", '1', "put", '1', 'R');
  on(tm, "put", '_', "back", '0', 'R');
  on(tm, "put", '0', "back", '0', 'R');
  on(tm, "put", '1', "back", '0', 'R');
  for (char c : std::string("_01")) on(tm, "back", c, "done", c, 'L');
  return tm;
}

TuringMachine looping_tm() {
  TuringMachine tm;
  tm.states = {"a", "b", "done"};
  tm.alphabet = "_01";
  tm.start = "a";
  tm.halt = "done";
  for (char c : std::string("_01")) {
    on(tm, "a", c, "b", c, 'R');
    on(tm, "b", c, "a", c, 'L');
  }
  return tm;
}

TuringMachine immediate_halt_tm() {
  TuringMachine tm;
  tm.states = {"done"};
  tm.alphabet = "_01";
  tm.start = "done";
  tm.halt = "done";
  return tm;
}

}  // namespace crnkit
