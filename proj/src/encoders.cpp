#include "crnkit/encoders.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace crnkit {

CompiledCrn compile_binary(const Count& x) {
  if (x <= 0) throw std::invalid_argument("the binary baseline needs x >= 1");
  std::vector<bool> bits;
  for (Count v = x; v > 0; v >>= 1) bits.push_back((v & 1) == 1);
  const std::size_t n = bits.size();
  CompiledCrn out;
  auto X = [](std::size_t i) { return "X" + std::to_string(i); };
  out.crn.intern(X(0));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    NamedSide products = {{X(i + 1), 2}};
    if (bits[i]) products.push_back({"Y", 1});
    out.crn.add({{X(i), 1}}, products);
  }
  out.crn.add({{X(n - 1), 1}}, {{"Y", 1}});
  CompileManifest& m = out.manifest;
  m.method = "binary";
  m.leader = X(0);
  m.output = "Y";
  m.halt.clear();
  m.notes["halting"] = false;
  m.notes["bits"] = n;
  return out;
}

// ---------------------------------------------------------------------------
// Permutation pipeline

namespace {

Count max_of(std::initializer_list<Count> vs) { return std::max(vs); }

std::size_t bit_length(const Count& v) {
  return v == 0 ? 0 : static_cast<std::size_t>(boost::multiprecision::msb(v)) + 1;
}

RegisterMachineProgram step3_program(unsigned k, Step3Backend backend) {
  RegisterMachineProgram dec = build_rank_decoder(k);
  if (backend == Step3Backend::DirectDecoder) return dec;
  // Decoder as a Turing machine, arithmetized back into a register machine.
  const TuringMachine tm = rm_to_tm(lower_copies(dec, "dec.aux"));
  RegisterMachineProgram p = tm_to_rm(tm).program;
  return rename_registers(p, {{"tm.in", "I"}, {"tm.out", "rank"}});
}

Registers analytic_maxima(unsigned k, const Count& m, Step3Backend backend,
                          const RegisterMachineProgram& program) {
  Registers r;
  for (unsigned i = 1; i <= k; ++i) r["r" + std::to_string(i)] = k;
  r["I"] = m;
  r["T"] = m;
  if (backend == Step3Backend::DirectDecoder) {
    for (const auto& [name, v] : rank_decoder_register_maxima(k, m)) r[name] = v;
    r["copy.aux"] = max_of({m, factorial(k), Count(1) << k, Count(k)});
    return r;
  }
  // The decoder tape holds the input or output bits, '$', and every decoder
  // register in unary closed by '#'; tape registers stay below 5^cells.
  const Count aux = max_of({m, factorial(k), Count(1) << k, Count(k)});
  Count cells = std::max(bit_length(m), bit_length(factorial(k))) + 3 + aux + 1;
  for (const auto& [name, v] : rank_decoder_register_maxima(k, m)) cells += v + 1;
  const Count big = boost::multiprecision::pow(Count(5), static_cast<unsigned>(cells));
  for (const auto& reg : program.registers) {
    if (!r.contains(reg)) r[reg] = big;
  }
  r["I"] = m;
  r["rank"] = factorial(k);
  r["copy.aux"] = big;
  return r;
}

}  // namespace

PermutationPlan plan_permutation(const Count& x, const EncodeOptions& opts) {
  if (x < 0) throw std::invalid_argument("x must be non-negative");
  PermutationPlan plan;
  plan.x = x;
  plan.k = opts.k_override ? *opts.k_override : min_k_for(x);
  plan.perm = lehmer_unrank(x, plan.k);
  plan.m = encode_counts_to_m(plan.perm);

  const RegisterMachineProgram gen = build_permutation_generator(plan.perm, "r");
  const RegisterMachineProgram enc = build_count_encoder(plan.k, "r");
  const RegisterMachineProgram dec = step3_program(plan.k, opts.step3);
  plan.step2_state = gen.instructions.size() + enc.initial_state;
  plan.step3_state = gen.instructions.size() + enc.instructions.size() + dec.initial_state;
  plan.program = concat(concat(gen, enc), dec);
  plan.program.input_register.reset();
  plan.program.output_register = "rank";

  plan.maxima = analytic_maxima(plan.k, plan.m, opts.step3, plan.program);
  plan.certification = "analytic";
  if (opts.step3 == Step3Backend::DirectDecoder && plan.m <= opts.oracle_limit) {
    const RmRunResult run = run_rm(lower_copies(plan.program), {}, std::nullopt, 2'000'000'000);
    if (run.regs.at("rank") != x) {
      throw InvalidProgram("permutation pipeline computed " + to_string(run.regs.at("rank")) +
                           " instead of " + to_string(x));
    }
    for (const auto& [reg, v] : run.max_values) {
      if (v > plan.maxima.at(reg)) {
        throw InvalidProgram("register '" + reg + "' exceeded its proven maximum");
      }
    }
    plan.maxima = run.max_values;
    plan.certification = "oracle";
  }
  return plan;
}

CompiledCrn compile_permutation(const Count& x, const EncodeOptions& opts,
                                const CompileNames& names) {
  const PermutationPlan plan = plan_permutation(x, opts);
  CompiledCrn out = compile_rm(plan.program, choose_bounds(plan.maxima, opts.counter), names);
  CompileManifest& man = out.manifest;
  man.method = "perm";
  man.notes["x"] = to_string(x);
  man.notes["k"] = plan.k;
  man.notes["permutation"] = plan.perm;
  man.notes["m"] = to_string(plan.m);
  man.notes["counter"] = opts.counter.to_string();
  man.notes["step3"] = opts.step3 == Step3Backend::DirectDecoder ? "decoder" : "tm";
  man.notes["certification"] = plan.certification;
  man.notes["step2_state"] = plan.step2_state;
  man.notes["step3_state"] = plan.step3_state;
  man.notes["step2_species"] = man.states.at(plan.step2_state);
  man.notes["step3_species"] = man.states.at(plan.step3_state);
  return out;
}

// ---------------------------------------------------------------------------
// Program compiler

Count run_machine(const Machine& machine, const Count& p) {
  if (const auto* tm = std::get_if<TuringMachine>(&machine)) return run_tm(*tm, p).output;
  const auto& prog = std::get<RegisterMachineProgram>(machine);
  if (!prog.input_register) throw InvalidProgram("program has no input register");
  return run_rm(prog, {{*prog.input_register, p}}).regs.at(prog.output_register);
}

CompiledCrn compile_program(const Machine& machine, const Count& p, const EncodeOptions& opts) {
  RegisterMachineProgram prog;
  if (const auto* tm = std::get_if<TuringMachine>(&machine)) {
    prog = tm_to_rm(*tm).program;
  } else {
    prog = std::get<RegisterMachineProgram>(machine);
  }
  prog.validate();
  if (!prog.input_register) throw InvalidProgram("program has no input register");
  const Count expected = run_machine(machine, p);

  // Stage 1 leaves p copies of P and hands the leader to L2.
  CompileNames first;
  first.output = "P";
  first.halt = "L2";
  first.prefix = "p.";
  const CompiledCrn stage1 = compile_permutation(p, opts, first);
  const RegisterInfo& rank = stage1.manifest.registers.at("rank");

  // Stage 2: move P into the input register, then run the machine.
  std::string xfer = "xfer";
  while (prog.has_register(xfer)) xfer += "_";
  ProgramBuilder b;
  ProgramBuilder::Label top = b.here(), move = b.label(), done = b.label();
  b.dec(xfer, move, done);
  b.bind(move);
  b.inc(*prog.input_register, top);
  b.bind(done);
  b.halt();
  RegisterMachineProgram head = b.build(prog.output_register);
  RegisterMachineProgram full = concat(head, prog);
  full.input_register = xfer;

  const Registers maxima =
      run_rm(lower_copies(full), {{xfer, p}}, std::nullopt, 2'000'000'000).max_values;
  auto bounds = choose_bounds(maxima, opts.counter);
  bounds[xfer] = rank.bound;

  CompileNames second;
  second.leader = "L2";
  second.external[xfer] = {first.prefix + "rank", "P"};
  CompiledCrn stage2 = compile_rm(full, bounds, second);

  CompiledCrn out;
  out.crn = merge(stage1.crn, stage2.crn);
  CompileManifest& man = out.manifest;
  man = stage2.manifest;
  man.method = "program";
  man.leader = "L";
  for (const auto& [name, info] : stage1.manifest.registers) man.registers["p." + name] = info;
  for (const auto& l : stage1.manifest.leader_names) {
    if (std::find(man.leader_names.begin(), man.leader_names.end(), l) == man.leader_names.end()) {
      man.leader_names.push_back(l);
    }
  }
  man.notes["p"] = to_string(p);
  man.notes["expected"] = to_string(expected);
  man.notes["machine"] = std::holds_alternative<TuringMachine>(machine) ? "tm" : "rm";
  man.notes["stage1"] = stage1.manifest.notes;
  man.notes["stage1_states"] = stage1.manifest.states;
  return out;
}

// ---------------------------------------------------------------------------
// Reports

std::vector<KsRow> ks_upper_bound(const Count& x, const std::vector<std::string>& methods,
                                  const EncodeOptions& opts) {
  std::vector<KsRow> rows;
  for (const auto& m : methods) {
    if (m == "binary") {
      if (x == 0) continue;
      const CompiledCrn c = compile_binary(x);
      rows.push_back({m, c.crn.size(), c.crn.species_count(), "-"});
    } else if (m == "perm") {
      const CompiledCrn c = compile_permutation(x, opts);
      rows.push_back({m, c.crn.size(), c.crn.species_count(), opts.counter.to_string()});
    } else {
      throw std::invalid_argument("unknown method '" + m + "'");
    }
  }
  return rows;
}

nlohmann::json to_json(const Count& x, const std::vector<KsRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"method", r.method},
                   {"reactions", r.reactions},
                   {"species", r.species},
                   {"counter", r.counter}});
  }
  return {{"x", to_string(x)}, {"kind", "upper bounds on the smallest network size"},
          {"rows", arr}};
}

std::string to_text(const Count& x, const std::vector<KsRow>& rows) {
  std::ostringstream out;
  out << "upper bounds on network size for x = " << to_string(x) << "\n";
  out << std::left << std::setw(10) << "method" << std::right << std::setw(11) << "reactions"
      << std::setw(9) << "species" << "  counter\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(10) << r.method << std::right << std::setw(11) << r.reactions
        << std::setw(9) << r.species << "  " << r.counter << "\n";
  }
  return out.str();
}

}  // namespace crnkit
