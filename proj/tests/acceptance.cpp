// Acceptance campaign. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. All comparisons are exact.

#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mxsefl/mxsefl.hpp"

namespace {

using namespace mxsefl;

constexpr std::uint64_t kMasterSeed = 20240601;
constexpr std::size_t kAdditiveRuns = 1000;
constexpr std::size_t kOtherRunsPerKind = 1000;
constexpr std::size_t kOracleRuns = 200;
constexpr std::size_t kValuationChecksPerKind = 200;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

int report(int number, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " (" << o.detail;
  if (!o.pass) std::cout << "; first failure: " << o.first_failure;
  std::cout << ")" << std::endl;
  return o.pass ? 0 : 1;
}

std::string describe(const GeneratorSpec& s) {
  std::ostringstream ss;
  ss << "kind=" << to_string(s.kind) << " n=" << s.n << " m=" << s.m << " seed=" << s.seed;
  return ss.str();
}

std::string describe(const Valuation& v) {
  std::string s = std::string(to_string(v.kind())) + " [";
  if (v.kind() != ValuationKind::Table) {
    for (std::size_t g = 0; g < v.per_good().size(); ++g) s += (g ? "," : "") + v.per_good()[g].str();
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// Criteria 1, 2, 3, 5: solve with debug assertions, audit, check the trace.

struct CampaignStats {
  std::size_t runs = 0;
  std::size_t certified = 0;
  std::size_t phase2_entries = 0;
  std::size_t phase2_iterations = 0;
  std::size_t assertion_failures = 0;
  std::size_t potential_failures = 0;
  std::size_t threshold_failures = 0;
  Rational min_mms = 1, min_efx = 1, min_pmms = 1, min_gmms = 1;
};

void run_campaign(ValuationKind kind, std::size_t runs, std::size_t n_lo, std::size_t n_hi, std::size_t m_max,
                  bool thresholds, std::mt19937_64& rng, CampaignStats& stats, Outcome& solve_outcome,
                  Outcome& trace_outcome, Outcome& threshold_outcome) {
  for (std::size_t r = 0; r < runs; ++r) {
    GeneratorSpec spec;
    spec.seed = rng();
    spec.n = n_lo + rng() % (n_hi - n_lo + 1);
    spec.m = rng() % (m_max + 1);
    spec.kind = kind;
    spec.lo = kind == ValuationKind::Multiplicative ? 1 : 0;
    spec.hi = 8;
    const Instance inst = generate(spec);
    ++stats.runs;

    SolverConfig cfg;
    cfg.debug_assertions = true;
    SolveResult res;
    try {
      res = mxs_efl_allocate(inst, cfg);
    } catch (const SolverFailure& e) {
      if (e.code() == ErrorCode::InvariantViolation) {
        ++stats.assertion_failures;
        trace_outcome.fail(describe(spec) + ": " + e.what());
      }
      solve_outcome.fail(describe(spec) + ": " + e.what());
      continue;
    }
    stats.phase2_entries += res.trace.counters.phase2_entries;
    stats.phase2_iterations += res.trace.counters.phase2_iterations;
    const auto potential = phase2_potential_check(res.trace);
    if (!potential.ok) {
      ++stats.potential_failures;
      trace_outcome.fail(describe(spec) + ": " + potential.witness);
    }

    const auto audit = oracle::audit_allocation(inst, res.allocation);
    bool ok = true;
    for (const auto& a : audit.agents) ok = ok && a.efl && a.mxs;
    if (ok) {
      ++stats.certified;
    } else {
      solve_outcome.fail(describe(spec) + ": audit " + audit.to_json().dump());
    }
    if (!thresholds) continue;
    for (const auto& a : audit.agents) {
      stats.min_mms = std::min(stats.min_mms, a.alpha_mms);
      stats.min_efx = std::min(stats.min_efx, a.alpha_efx);
      stats.min_pmms = std::min(stats.min_pmms, a.alpha_pmms);
      const bool gmms_ok = a.alpha_gmms && *a.alpha_gmms >= Rational(1, 2);
      if (a.alpha_gmms) stats.min_gmms = std::min(stats.min_gmms, *a.alpha_gmms);
      if (a.alpha_mms < Rational(4, 7) || a.alpha_efx < Rational(1, 2) || a.alpha_pmms < Rational(2, 3) || !gmms_ok ||
          !a.ef1) {
        ++stats.threshold_failures;
        threshold_outcome.fail(describe(spec) + ": agent " + std::to_string(a.agent));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 4: matching against brute force on every queried partition.

void check_oracle_equivalence(const Instance& inst, const std::string& label, Outcome& o, std::size_t& queries) {
  const ShareCache shares(inst);
  SolverConfig cfg;
  cfg.on_fair_query = [&](const Partition& x, bool answer) {
    ++queries;
    if (oracle::brute_force_fair_association_exists(shares, x) != answer) o.fail(label + ": " + x.str());
  };
  try {
    mxs_efl_allocate(inst, cfg);
  } catch (const Error& e) {
    o.fail(label + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Criterion 6: exhaustive definitional suite on n = 2, m <= 4, values {0,1,2}.

void for_each_tiny_instance(std::size_t m, const std::function<void(const Instance&)>& visit) {
  std::vector<int> digits(2 * m, 0);
  while (true) {
    std::vector<Valuation> vals;
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<Rational> row;
      for (std::size_t g = 0; g < m; ++g) row.emplace_back(digits[i * m + g]);
      vals.push_back(Valuation::additive(std::move(row)));
    }
    visit(Instance(m, std::move(vals)));
    std::size_t t = 0;
    for (; t < digits.size(); ++t) {
      if (++digits[t] <= 2) break;
      digits[t] = 0;
    }
    if (t == digits.size()) return;
  }
}

std::set<std::size_t> support_of(const AssociationFunction& f) {
  const auto s = f.support();
  return {s.begin(), s.end()};
}

Outcome definitional_suite() {
  Outcome o;
  std::size_t hierarchy = 0, mu = 0, elim = 0, shifts = 0;
  const std::vector<std::vector<std::optional<AgentId>>> raw_assocs = {
      {0, 1}, {1, 0}, {0, std::nullopt}, {std::nullopt, 0}, {1, std::nullopt}, {std::nullopt, 1},
      {std::nullopt, std::nullopt}};
  for (std::size_t m = 0; m <= 4; ++m) {
    std::vector<std::vector<Partition>> partitions(3);
    for (std::size_t k = 1; k <= 2; ++k) {
      oracle::LabeledPartitions(Bundle::full(m), k).for_each([&](const std::vector<Bundle>& ys) {
        partitions[k].emplace_back(ys);
        return true;
      });
    }
    for_each_tiny_instance(m, [&](const Instance& inst) {
      const ShareCache shares(inst);
      const std::string label = "m=" + std::to_string(m) + " " + describe(inst.valuation(0)) + " " +
                                describe(inst.valuation(1));
      for (std::size_t k = 1; k <= 2; ++k) {
        for (const Partition& x : partitions[k]) {
          for (AgentId i = 0; i < 2; ++i) {
            for (std::size_t l = 0; l < k; ++l) {
              ++hierarchy;
              if (is_efx_best(inst, i, l, x) && !efx_feasible(inst, i, l, x)) o.fail(label + " EFX-best not EFX");
              if (efx_feasible(inst, i, l, x) && !efl_feasible(inst, i, l, x)) o.fail(label + " EFX not EFL");
              if (eefx_feasible(inst, i, l, x) && !mxs_feasible(shares, i, l, x)) o.fail(label + " EEFX not MXS");
            }
          }
        }
      }
      for (AgentId i = 0; i < 2; ++i) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
          const Bundle s(mask);
          for (std::size_t k = 1; k <= 3; ++k) {
            ++mu;
            const Rational share = oracle::mms_share(inst, i, k, s).value;
            if (share * Rational(static_cast<std::int64_t>(k)) > inst.value(i, s)) o.fail(label + " mu > v(S)/k");
            if (share != shares.mms_share(i, k, s)) o.fail(label + " mu cache disagrees with oracle");
            if (k < 2) continue;
            for (GoodId h : s) {
              if (oracle::mms_share(inst, i, k - 1, s.without(h)).value < share) {
                o.fail(label + " mu(k-1, S\\h) < mu(k, S)");
              }
            }
          }
        }
      }
      for (const Partition& x : partitions[2]) {
        for (const auto& raw : raw_assocs) {
          const AssociationFunction f0(raw);
          ++elim;
          const AssociationFunction f = eliminate_cycles(inst, x, f0);
          if (!is_acyclic(build_envy_graph(inst, x, f))) o.fail(label + " cycle left after elimination");
          if (support_of(f) != support_of(f0)) o.fail(label + " elimination changed the support");
          for (std::size_t l = 0; l < 2; ++l) {
            if (!f0[l]) continue;
            const auto now = f.bundle_of(*f0[l]);
            if (!now || inst.value(*f0[l], x[*now]) < inst.value(*f0[l], x[l])) {
              o.fail(label + " elimination made an agent worse off");
            }
          }
          for (std::size_t t = 0; t < 2; ++t) {
            for (const Subchain& c : chains_to(inst, x, f, t)) {
              ++shifts;
              auto expect = support_of(f);
              expect.insert(c.back());
              expect.erase(c.front());
              if (support_of(shift_subchain(f, c)) != expect) o.fail(label + " shift support arithmetic");
            }
          }
        }
      }
    });
  }
  o.detail = std::to_string(hierarchy) + " hierarchy cases, " + std::to_string(mu) + " share cases, " +
             std::to_string(elim) + " eliminations, " + std::to_string(shifts) + " shifts";
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 7: valuation-class checks.

Outcome valuation_class_checks(std::mt19937_64& rng) {
  Outcome o;
  std::size_t rmms = 0, cancelable = 0;
  bool unit_counterexample = false;
  for (std::size_t t = 0; t < kValuationChecksPerKind; ++t) {
    const std::size_t m = 1 + rng() % 5;
    std::vector<Rational> vals;
    for (std::size_t g = 0; g < m; ++g) vals.emplace_back(static_cast<std::int64_t>(rng() % 9));
    std::vector<Rational> mult_vals;
    for (std::size_t g = 0; g < m; ++g) mult_vals.emplace_back(static_cast<std::int64_t>(1 + rng() % 8));
    const Rational budget(static_cast<std::int64_t>(1 + rng() % 16));
    const std::vector<Valuation> closed = {Valuation::additive(vals), Valuation::budget_additive(vals, budget),
                                           Valuation::unit_demand(vals), Valuation::multiplicative(mult_vals)};
    for (const Valuation& v : closed) {
      ++rmms;
      if (!restricted_mms_feasible_check(v, 3, m).feasible) o.fail(describe(v) + " not restricted-MMS-feasible");
    }
    for (const Valuation& v : {closed[0], closed[3]}) {
      ++cancelable;
      if (!good_cancelable_check(v, m).cancelable) o.fail(describe(v) + " not good-cancelable");
    }
    if (!good_cancelable_check(closed[2], m).cancelable) unit_counterexample = true;
  }
  if (!unit_counterexample) o.fail("no unit-demand counterexample to good-cancelability found");
  o.detail = std::to_string(rmms) + " restricted-MMS checks, " + std::to_string(cancelable) +
             " good-cancelable checks, unit-demand counterexample " + (unit_counterexample ? "found" : "missing");
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 8: determinism.

Outcome determinism(std::mt19937_64& rng) {
  Outcome o;
  std::size_t runs = 0;
  auto compare = [&](const Instance& inst, const std::string& label) {
    ++runs;
    const auto a = mxs_efl_allocate(inst);
    const auto b = mxs_efl_allocate(inst);
    if (io::dump(io::allocation_to_json(a.allocation)) != io::dump(io::allocation_to_json(b.allocation))) {
      o.fail(label + ": allocation files differ");
    }
    if (a.trace.to_json_lines() != b.trace.to_json_lines()) o.fail(label + ": traces differ");
  };
  for (std::size_t r = 0; r < kOracleRuns; ++r) {
    GeneratorSpec spec;
    spec.seed = rng();
    spec.n = 2 + rng() % 3;
    spec.m = rng() % 8;
    compare(generate(spec), describe(spec));
  }
  for (const auto& e : adversarial_corpus()) compare(e.instance, e.name);
  o.detail = std::to_string(runs) + " instances solved twice";
  return o;
}

}  // namespace

int main() {
  std::mt19937_64 rng(kMasterSeed);
  int failures = 0;

  Outcome c1, c2, c3, c5;
  CampaignStats additive, others;
  run_campaign(ValuationKind::Additive, kAdditiveRuns, 2, 4, 7, true, rng, additive, c1, c5, c3);
  for (ValuationKind kind : {ValuationKind::BudgetAdditive, ValuationKind::UnitDemand, ValuationKind::Multiplicative}) {
    Outcome unused;
    run_campaign(kind, kOtherRunsPerKind, 2, 3, 6, false, rng, others, c2, c5, unused);
  }
  c1.detail = std::to_string(additive.certified) + "/" + std::to_string(additive.runs) +
              " additive runs certified EFL and MXS";
  c2.detail = std::to_string(others.certified) + "/" + std::to_string(others.runs) +
              " budget-additive, unit-demand and multiplicative runs certified";
  c3.detail = "min alpha-MMS " + additive.min_mms.str() + " (>= 4/7), min alpha-EFX " + additive.min_efx.str() +
              " (>= 1/2), min alpha-PMMS " + additive.min_pmms.str() + " (>= 2/3), min alpha-GMMS " +
              additive.min_gmms.str() + " (>= 1/2), EF1 everywhere";
  c5.detail = std::to_string(additive.runs + others.runs) + " runs with debug assertions, " +
              std::to_string(additive.phase2_entries + others.phase2_entries) + " phase-2 entries, " +
              std::to_string(additive.phase2_iterations + others.phase2_iterations) + " phase-2 iterations, " +
              std::to_string(additive.assertion_failures + others.assertion_failures) + " assertion failures, " +
              std::to_string(additive.potential_failures + others.potential_failures) + " potential failures";
  if (additive.phase2_entries + others.phase2_entries == 0) c5.fail("phase 2 never entered");

  Outcome c4;
  std::size_t queries = 0;
  for (std::size_t r = 0; r < kOracleRuns; ++r) {
    GeneratorSpec spec;
    spec.seed = rng();
    spec.n = 2 + rng() % 2;
    spec.m = rng() % 7;
    spec.kind = static_cast<ValuationKind>(r % 4);
    spec.lo = spec.kind == ValuationKind::Multiplicative ? 1 : 0;
    check_oracle_equivalence(generate(spec), describe(spec), c4, queries);
  }
  for (const auto& e : adversarial_corpus()) check_oracle_equivalence(e.instance, e.name, c4, queries);
  c4.detail = std::to_string(queries) + " fairness queries compared on " + std::to_string(kOracleRuns) +
              " fuzz runs and the corpus";

  const Outcome c6 = definitional_suite();
  const Outcome c7 = valuation_class_checks(rng);
  const Outcome c8 = determinism(rng);

  failures += report(1, "additive end-to-end, n in {2,3,4}, m <= 7, values <= 8", c1);
  failures += report(2, "other closed-form classes end-to-end, n <= 3, m <= 6", c2);
  failures += report(3, "implication thresholds on additive outputs", c3);
  failures += report(4, "matching agrees with brute-force association search", c4);
  failures += report(5, "runtime invariants and phase-2 potential from traces", c5);
  failures += report(6, "exhaustive definitional suite, n = 2, m <= 4, values in {0,1,2}", c6);
  failures += report(7, "valuation-class checks, m <= 5, kMax = 3", c7);
  failures += report(8, "determinism of allocation files and traces", c8);
  return failures == 0 ? 0 : 1;
}
