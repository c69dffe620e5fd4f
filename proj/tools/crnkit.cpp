// crnkit command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crnkit/analysis.hpp"
#include "crnkit/dexp.hpp"
#include "crnkit/encoders.hpp"
#include "crnkit/errors.hpp"
#include "crnkit/io.hpp"
#include "crnkit/machines.hpp"
#include "crnkit/rm_compiler.hpp"

namespace {

using namespace crnkit;

constexpr int kOk = 0;
constexpr int kFails = 1;
constexpr int kTruncated = 2;
constexpr int kUsage = 64;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code(Status s) {
  switch (s) {
    case Status::Holds: return kOk;
    case Status::Fails: return kFails;
    case Status::Truncated: return kTruncated;
  }
  return kFails;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Count parse_count(const std::string& text) {
  try {
    Count c(text);
    if (c < 0) throw UsageError("expected a non-negative integer, got '" + text + "'");
    return c;
  } catch (const std::runtime_error&) {
    throw UsageError("expected a non-negative integer, got '" + text + "'");
  }
}

CrnDocument load(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("no such file '" + path + "'");
  return load_crn(path);
}

Machine load_machine(const std::string& path) {
  const std::string text = read_file(path);
  if (std::filesystem::path(path).extension() == ".json") {
    return TuringMachine::from_json(nlohmann::json::parse(text));
  }
  return RegisterMachineProgram::parse(text);
}

SpeciesId species(const Crn& crn, const std::string& name, const char* what) {
  auto s = crn.find(name);
  if (!s) throw UsageError(std::string(what) + " species '" + name + "' is not in the network");
  return *s;
}

Configuration initial_of(const CrnDocument& doc, const std::string& init) {
  if (!init.empty()) return parse_configuration(doc.crn, init);
  if (!doc.designated.leader) throw UsageError("no --init given and the network has no leader");
  return Configuration{{species(doc.crn, *doc.designated.leader, "leader"), 1}};
}

void print_verdict(const Crn& crn, const Verdict& v, bool json) {
  if (json) {
    std::cout << to_json(crn, v).dump(2) << "\n";
    return;
  }
  std::cout << "status: " << to_string(v.status) << "\n";
  if (!v.detail.empty()) std::cout << "detail: " << v.detail << "\n";
  if (v.configs_explored) std::cout << "configurations: " << v.configs_explored << "\n";
  if (v.runs) std::cout << "runs: " << v.runs << "\n";
  if (v.witness) std::cout << "witness: " << format_configuration(crn, *v.witness) << "\n";
  for (const auto& step : v.path) {
    std::cout << "  " << crn.format(step.reaction) << "  =>  "
              << format_configuration(crn, step.result) << "\n";
  }
}

// ---------------------------------------------------------------------------

struct CompileArgs {
  std::string method = "perm";
  std::string x;
  std::optional<unsigned> k;
  std::string counter = "gated";
  std::string step3 = "decoder";
  std::string machine;
  std::string out;
};

int run_compile(const CompileArgs& a) {
  if (a.x.empty()) throw UsageError("--x is required");
  const Count x = parse_count(a.x);
  EncodeOptions opts;
  opts.k_override = a.k;
  try {
    opts.counter = CounterChoice::parse(a.counter);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.step3 == "tm") {
    opts.step3 = Step3Backend::TmPipeline;
  } else if (a.step3 != "decoder") {
    throw UsageError("--step3 must be decoder or tm");
  }

  CompiledCrn c;
  if (a.method == "binary") {
    if (x == 0) throw UsageError("the binary method needs x >= 1");
    c = compile_binary(x);
  } else if (a.method == "perm") {
    c = compile_permutation(x, opts);
  } else if (a.method == "program") {
    if (a.machine.empty()) throw UsageError("--method program needs --machine FILE");
    c = compile_program(load_machine(a.machine), x, opts);
  } else {
    throw UsageError("unknown method '" + a.method + "'");
  }
  if (!a.out.empty()) c.save(a.out);
  std::cout << "method: " << c.manifest.method << "\n"
            << "reactions: " << c.crn.size() << "\n"
            << "species: " << c.crn.species_count() << "\n"
            << "leader: " << c.manifest.leader << "\n"
            << "output: " << c.manifest.output << "\n";
  if (!c.manifest.halt.empty()) std::cout << "halt: " << c.manifest.halt << "\n";
  if (a.out.empty()) std::cout << serialize_text(c.crn, c.manifest.designated());
  return kOk;
}

struct SimArgs {
  std::string file;
  std::string init;
  std::uint64_t max_steps = 1'000'000;
  std::string stop_on;
  bool trace = false;
};

int run_sim(const SimArgs& a, std::uint64_t seed) {
  const CrnDocument doc = load(a.file);
  SimOptions o;
  o.seed = seed;
  o.max_steps = a.max_steps;
  o.record_trace = a.trace;
  if (!a.stop_on.empty()) o.stop_on = species(doc.crn, a.stop_on, "stop");
  const SimResult r = simulate(doc.crn, initial_of(doc, a.init), o);
  if (a.trace) {
    for (auto i : r.trace) std::cout << doc.crn.format(i) << "\n";
  }
  std::cout << "steps: " << r.steps << "\n"
            << "stop: " << to_string(r.reason) << "\n"
            << "final: " << format_configuration(doc.crn, r.final) << "\n";
  return r.reason == StopReason::StepCap ? kTruncated : kOk;
}

struct VerifyArgs {
  std::string file;
  std::string x;
  std::string output;
  std::string halt;
  std::string init;
  std::string mode = "exhaustive";
  std::uint64_t trials = 200;
  std::size_t max_configs = 2'000'000;
  std::uint64_t max_steps = 50'000'000;
  bool json = false;
};

int run_verify(const VerifyArgs& a, std::uint64_t seed) {
  if (a.x.empty()) throw UsageError("--x is required");
  const CrnDocument doc = load(a.file);
  const Count x = parse_count(a.x);
  const std::string out_name = !a.output.empty() ? a.output : doc.designated.output.value_or("");
  if (out_name.empty()) throw UsageError("no --output given and the network designates none");
  const SpeciesId out = species(doc.crn, out_name, "output");
  std::optional<SpeciesId> halt;
  if (!a.halt.empty()) {
    halt = species(doc.crn, a.halt, "halt");
  } else if (doc.designated.halt) {
    halt = species(doc.crn, *doc.designated.halt, "halt");
  }
  const Configuration init = initial_of(doc, a.init);

  Verdict v;
  if (a.mode == "exhaustive") {
    ExploreCaps caps;
    caps.max_configs = a.max_configs;
    v = halt ? haltingly_computes(doc.crn, init, out, *halt, x, caps)
             : stably_computes(doc.crn, init, out, x, caps);
  } else if (a.mode == "stochastic") {
    StochasticOptions o;
    o.trials = a.trials;
    o.seed = seed;
    o.max_steps = a.max_steps;
    v = verify_stochastic(doc.crn, init, out, halt, x, o);
  } else {
    throw UsageError("--mode must be exhaustive or stochastic");
  }
  print_verdict(doc.crn, v, a.json);
  return exit_code(v.status);
}

struct CoverArgs {
  std::string file;
  std::string init;
  std::string target;
  std::size_t max_configs = 2'000'000;
  bool prune = false;
  bool json = false;
};

int run_cover(const CoverArgs& a) {
  CrnDocument doc = load(a.file);
  const Configuration init = initial_of(doc, a.init);
  const Configuration target = parse_configuration(doc.crn, a.target);
  ExploreCaps caps;
  caps.max_configs = a.max_configs;
  const Verdict v = coverability(doc.crn, init, target, caps, {a.prune});
  print_verdict(doc.crn, v, a.json);
  if (!a.json) {
    std::cout << "coverable: "
              << (v.status == Status::Holds ? "yes" : v.status == Status::Fails ? "no" : "unknown")
              << "\n";
  }
  return exit_code(v.status);
}

struct DexpArgs {
  unsigned layer = 0;
  unsigned index = 1;
  std::string target;
  std::string prefix;
  std::string out;
};

int run_dexp(const DexpArgs& a) {
  if (a.index < 1 || a.index > 4) throw UsageError("--index must be 1..4");
  MetaReactionSpec spec;
  spec.layer = a.layer;
  spec.index = a.index;
  if (!a.target.empty()) spec.target = a.target;
  if (!a.prefix.empty()) spec.prefix = a.prefix;
  const Fragment f = expand(spec);
  Designated d;
  d.leader = f.s_species;
  d.output = f.x_species;
  d.halt = f.h_species;
  if (!a.out.empty()) save_crn(a.out, f.crn, d, f.manifest());
  std::cout << "layer: " << f.layer << "\n"
            << "index: " << f.index << "\n"
            << "reactions: " << f.crn.size() << "\n"
            << "species: " << f.crn.species_count() << "\n"
            << "start: " << f.s_species << "\n"
            << "done: " << f.h_species << "\n"
            << "counted: " << f.x_species << " x " << to_string(f.expected_count) << "\n";
  if (a.out.empty()) std::cout << serialize_text(f.crn, d);
  return kOk;
}

struct ReportArgs {
  std::string x;
  std::vector<std::string> methods{"binary", "perm"};
  std::string counter = "gated";
  bool json = false;
};

int run_report(const ReportArgs& a) {
  if (a.x.empty()) throw UsageError("--x is required");
  EncodeOptions opts;
  try {
    opts.counter = CounterChoice::parse(a.counter);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Count x = parse_count(a.x);
  for (const auto& m : a.methods) {
    if (m != "binary" && m != "perm") throw UsageError("unknown method '" + m + "'");
  }
  const auto rows = ks_upper_bound(x, a.methods, opts);
  if (a.json) {
    std::cout << to_json(x, rows).dump(2) << "\n";
  } else {
    std::cout << to_text(x, rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chemical reaction network compiler and verifier"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.set_version_flag("--version", CRNKIT_VERSION);

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Compile an integer or a program into a network");
  compile->add_option("--method", ca.method, "binary, perm or program")->capture_default_str();
  compile->add_option("--x", ca.x, "Integer to encode (program input for --method program)");
  compile->add_option("--k", ca.k, "Permutation length (default: smallest k with k! > x)");
  compile->add_option("--counter", ca.counter, "ladder[:N], gated[:N] or dexp[:K]")
      ->capture_default_str();
  compile->add_option("--step3", ca.step3, "decoder or tm")->capture_default_str();
  compile->add_option("--machine", ca.machine, "Register machine text or Turing machine .json");
  compile->add_option("-o,--out", ca.out, "Output file (.json for the structured format)");

  SimArgs sa;
  auto* sim = app.add_subcommand("sim", "Simulate a network");
  sim->add_option("file", sa.file)->required();
  sim->add_option("--init", sa.init, "Initial configuration, e.g. \"1 L\"");
  sim->add_option("--max-steps", sa.max_steps)->capture_default_str();
  sim->add_option("--stop-on", sa.stop_on, "Stop once this species is present");
  sim->add_flag("--trace", sa.trace, "Print every fired reaction");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check that a network computes x");
  verify->add_option("file", va.file)->required();
  verify->add_option("--x", va.x, "Expected output count");
  verify->add_option("--output", va.output, "Output species");
  verify->add_option("--halt", va.halt, "Halting species");
  verify->add_option("--init", va.init, "Initial configuration");
  verify->add_option("--mode", va.mode, "exhaustive or stochastic")->capture_default_str();
  verify->add_option("--trials", va.trials)->capture_default_str();
  verify->add_option("--max-configs", va.max_configs)->capture_default_str();
  verify->add_option("--max-steps", va.max_steps, "Step cap per stochastic trial")
      ->capture_default_str();
  verify->add_flag("--json", va.json);

  CoverArgs co;
  auto* cover = app.add_subcommand("cover", "Decide whether a configuration can be covered");
  cover->add_option("file", co.file)->required();
  cover->add_option("--init", co.init, "Initial configuration");
  cover->add_option("--target", co.target, "Configuration to cover")->required();
  cover->add_option("--max-configs", co.max_configs)->capture_default_str();
  cover->add_flag("--prune", co.prune, "Skip configurations covered by explored ones");
  cover->add_flag("--json", co.json);

  DexpArgs da;
  auto* dexp = app.add_subcommand("dexp", "Emit a doubly exponential counter box");
  dexp->add_option("--layer", da.layer)->capture_default_str();
  dexp->add_option("--index", da.index, "1, 2 produce; 3, 4 consume")->capture_default_str();
  dexp->add_option("--target", da.target, "Species counted by the box");
  dexp->add_option("--prefix", da.prefix, "Name prefix for the top box's own species");
  dexp->add_option("-o,--out", da.out);

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Upper bounds on network size for x");
  report->add_option("--x", ra.x);
  report->add_option("--methods", ra.methods)->delimiter(',')->capture_default_str();
  report->add_option("--counter", ra.counter)->capture_default_str();
  report->add_flag("--json", ra.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::cout << "crnkit " << CRNKIT_VERSION << " seed " << seed << "\n";
  try {
    if (*compile) return run_compile(ca);
    if (*sim) return run_sim(sa, seed);
    if (*verify) return run_verify(va, seed);
    if (*cover) return run_cover(co);
    if (*dexp) return run_dexp(da);
    if (*report) return run_report(ra);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownSpecies& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTruncated;
  } catch (const StepCap& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTruncated;
  } catch (const SpaceCap& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTruncated;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFails;
  }
  return kUsage;
}
