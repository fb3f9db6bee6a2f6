// Command-line front end: solve, audit, gen, check-valuation, fuzz, corpus.
//
// Exit codes:
//   0  success
//   1  I/O, parse or invalid-input error
//   2  enumeration budget exceeded (InstanceTooLarge)
//   3  invariant violation or iteration cap (solver bug)
//   4  audit or check failed

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "mxsefl/mxsefl.hpp"

namespace {

using namespace mxsefl;

enum Exit { kOk = 0, kInput = 1, kTooLarge = 2, kBug = 3, kFailed = 4 };

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InstanceTooLarge: return kTooLarge;
    case ErrorCode::InvariantViolation:
    case ErrorCode::IterationCapExceeded: return kBug;
    default: return kInput;
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_text(path, text);
  }
}

struct SolveArgs {
  std::string instance, out, trace;
  bool debug = false;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

int run_solve(const SolveArgs& a) {
  const Instance inst = io::read_instance(a.instance);
  SolverConfig cfg;
  cfg.enumeration_budget = a.budget;
  cfg.debug_assertions = a.debug;
  try {
    SolveResult res = mxs_efl_allocate(inst, cfg);
    emit(a.out, io::dump(io::allocation_to_json(res.allocation)));
    if (!a.trace.empty()) io::write_text(a.trace, res.trace.to_json_lines());
  } catch (const SolverFailure& e) {
    if (!a.trace.empty()) io::write_text(a.trace, e.trace().to_json_lines());
    throw;
  }
  return kOk;
}

struct AuditArgs {
  std::string instance, allocation;
  std::uint64_t gmms_budget = oracle::AuditOptions{}.gmms_budget;
};

int run_audit(const AuditArgs& a) {
  const Instance inst = io::read_instance(a.instance);
  const Allocation alloc = io::read_allocation(a.allocation, inst);
  oracle::AuditOptions opt;
  opt.gmms_budget = a.gmms_budget;
  const oracle::AuditReport report = oracle::audit_allocation(inst, alloc, opt);
  std::cout << io::dump(report.to_json());
  return report.passed() ? kOk : kFailed;
}

struct GenArgs {
  GeneratorSpec spec;
  std::string kind = "additive";
  std::optional<std::int64_t> lo;
  std::string out;
};

int run_gen(GenArgs a) {
  a.spec.kind = parse_valuation_kind(a.kind);
  a.spec.lo = a.lo.value_or(a.spec.kind == ValuationKind::Multiplicative ? 1 : 0);
  emit(a.out, io::dump(io::instance_to_json(generate(a.spec))));
  return kOk;
}

struct CheckArgs {
  std::string instance;
  std::size_t kmax = 3;
  std::size_t mbudget = 5;
};

int run_check(const CheckArgs& a) {
  const Instance inst = io::read_instance(a.instance);
  bool all_feasible = true;
  for (AgentId i = 0; i < inst.agents(); ++i) {
    const Valuation& v = inst.valuation(i);
    const auto rmms = restricted_mms_feasible_check(v, a.kmax, a.mbudget);
    const auto gc = good_cancelable_check(v, a.mbudget);
    all_feasible = all_feasible && rmms.feasible;
    std::cout << "agent " << i << " (" << to_string(v.kind()) << "): restricted-MMS-feasible: "
              << (rmms.feasible ? "yes" : "no") << ", good-cancelable: " << (gc.cancelable ? "yes" : "no") << "\n";
    if (rmms.witness) {
      const auto& w = *rmms.witness;
      auto show = [](const std::vector<Bundle>& ys) {
        std::string s;
        for (Bundle b : ys) s += b.str() + " ";
        return s;
      };
      std::cout << "  witness: S=" << w.goods.str() << " k=" << w.k << " min-max partition [ "
                << show(w.min_max_partition) << "] max " << w.min_max << " < max-min partition [ "
                << show(w.max_min_partition) << "] min " << w.max_min << "\n";
    }
    if (gc.witness) {
      const auto& w = *gc.witness;
      std::cout << "  counterexample: Q=" << w.q.str() << " R=" << w.r.str() << " S=" << w.s.str()
                << " T=" << w.t.str() << "\n";
    }
  }
  std::cout << "restricted-MMS-feasible: " << (all_feasible ? "yes" : "no") << "\n";
  return all_feasible ? kOk : kFailed;
}

struct FuzzArgs {
  std::size_t runs = 100;
  std::size_t nmax = 3;
  std::size_t mmax = 6;
  std::uint64_t seed = 1;
  std::string kind = "additive";
  std::int64_t max = 8;
  bool no_debug = false;
  bool inject_fault = false;
  std::string repro;
};

int run_fuzz(const FuzzArgs& a) {
  const ValuationKind kind = parse_valuation_kind(a.kind);
  std::mt19937_64 master(a.seed);
  std::size_t phase2 = 0;
  for (std::size_t r = 0; r < a.runs; ++r) {
    GeneratorSpec spec;
    spec.seed = master();
    spec.n = a.nmax <= 2 ? a.nmax : 2 + master() % (a.nmax - 1);
    spec.m = master() % (a.mmax + 1);
    spec.kind = kind;
    spec.lo = kind == ValuationKind::Multiplicative ? 1 : 0;
    spec.hi = std::max(spec.lo, a.max);
    spec.budget_hi = std::max<std::int64_t>(1, a.max * 2);
    const Instance inst = generate(spec);

    SolverConfig cfg;
    cfg.debug_assertions = !a.no_debug;
    if (a.inject_fault) {
      cfg.phase1_fault = [](std::size_t iter, Partition&, AssociationFunction& f) {
        if (iter == 0 && !f.is_free(0)) f.release(0);
      };
    }
    std::string failure;
    int code = kOk;
    try {
      SolveResult res = mxs_efl_allocate(inst, cfg);
      phase2 += res.trace.counters.phase2_entries;
      const auto report = oracle::audit_allocation(inst, res.allocation);
      if (!report.passed()) {
        failure = "audit failed: " + report.to_json().dump();
        code = kFailed;
      }
    } catch (const Error& e) {
      failure = e.what();
      code = exit_code_for(e.code()) == kInput ? kFailed : exit_code_for(e.code());
    }
    if (code != kOk) {
      std::cerr << "fuzz failure at run " << r << " (n=" << spec.n << " m=" << spec.m << " kind=" << a.kind
                << " seed=" << spec.seed << "): " << failure << "\n";
      std::cerr << "reproduce with: gen --n " << spec.n << " --m " << spec.m << " --kind " << a.kind << " --max "
                << spec.hi << " --seed " << spec.seed << "\n";
      if (!a.repro.empty()) io::write_text(a.repro, io::dump(io::instance_to_json(inst)));
      return code;
    }
  }
  std::cout << "fuzz: " << a.runs << " runs, 0 failures, " << phase2 << " phase-2 entries\n";
  return kOk;
}

int run_corpus(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const CorpusEntry& e : adversarial_corpus()) {
    const std::string base = (std::filesystem::path(dir) / e.name).string();
    io::write_text(base + ".instance.json", io::dump(io::instance_to_json(e.instance)));
    const SolveResult res = mxs_efl_allocate(e.instance);
    io::write_text(base + ".allocation.json", io::dump(io::allocation_to_json(res.allocation)));
    io::write_text(base + ".trace.jsonl", res.trace.to_json_lines());
    std::cout << e.name << ": " << e.intent << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MXS+EFL allocation of indivisible goods"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "compute an MXS+EFL allocation");
  solve_cmd->add_option("--instance", solve.instance, "instance file")->required();
  solve_cmd->add_option("--out", solve.out, "allocation output (default stdout)");
  solve_cmd->add_option("--trace", solve.trace, "write the solver trace as JSON lines");
  solve_cmd->add_flag("--debug-assert", solve.debug, "check loop invariants at runtime");
  solve_cmd->add_option("--budget", solve.budget, "max labeled partitions per share enumeration")
      ->check(CLI::PositiveNumber);

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "check an allocation against every fairness notion");
  audit_cmd->add_option("--instance", audit.instance, "instance file")->required();
  audit_cmd->add_option("--allocation", audit.allocation, "allocation file")->required();
  audit_cmd->add_option("--gmms-budget", audit.gmms_budget, "labeled partitions the GMMS sweep may visit");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("--n", gen.spec.n, "agents")->required();
  gen_cmd->add_option("--m", gen.spec.m, "goods")->required();
  gen_cmd->add_option("--kind", gen.kind, "additive|budget|unit|mult|table");
  gen_cmd->add_option("--min", gen.lo, "least good value (default 0, or 1 for mult)");
  gen_cmd->add_option("--max", gen.spec.hi, "largest good value");
  gen_cmd->add_option("--budget-min", gen.spec.budget_lo, "least budget (budget kind)");
  gen_cmd->add_option("--budget-max", gen.spec.budget_hi, "largest budget (budget kind)");
  gen_cmd->add_option("--denominator", gen.spec.denominator, "draw values on a 1/d grid");
  gen_cmd->add_option("--seed", gen.spec.seed, "PRNG seed")->required();
  gen_cmd->add_option("--out", gen.out, "instance output (default stdout)");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check-valuation", "test restricted-MMS-feasibility and good-cancelability");
  check_cmd->add_option("--instance", check.instance, "instance file")->required();
  check_cmd->add_option("--kmax", check.kmax, "largest partition size");
  check_cmd->add_option("--mbudget", check.mbudget, "largest bundle size examined");

  FuzzArgs fuzz;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "generate, solve and audit random instances");
  fuzz_cmd->add_option("--runs", fuzz.runs, "number of instances");
  fuzz_cmd->add_option("--nmax", fuzz.nmax, "largest number of agents (at least 2 are used)");
  fuzz_cmd->add_option("--mmax", fuzz.mmax, "largest number of goods");
  fuzz_cmd->add_option("--seed", fuzz.seed, "master seed");
  fuzz_cmd->add_option("--kind", fuzz.kind, "valuation kind");
  fuzz_cmd->add_option("--max", fuzz.max, "largest good value");
  fuzz_cmd->add_flag("--no-debug-assert", fuzz.no_debug, "skip runtime invariant checks");
  fuzz_cmd->add_flag("--inject-fault", fuzz.inject_fault, "corrupt the association function in phase 1");
  fuzz_cmd->add_option("--repro", fuzz.repro, "write the failing instance here");

  std::string corpus_dir = "samples/corpus";
  auto* corpus_cmd = app.add_subcommand("corpus", "write the adversarial corpus with solver outputs");
  corpus_cmd->add_option("--out-dir", corpus_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*audit_cmd) return run_audit(audit);
    if (*gen_cmd) return run_gen(gen);
    if (*check_cmd) return run_check(check);
    if (*fuzz_cmd) return run_fuzz(fuzz);
    if (*corpus_cmd) return run_corpus(corpus_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
