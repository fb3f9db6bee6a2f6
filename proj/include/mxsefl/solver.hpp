#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mxsefl/codec.hpp"
#include "mxsefl/envy_graph.hpp"
#include "mxsefl/error.hpp"
#include "mxsefl/fairness.hpp"
#include "mxsefl/matching.hpp"
#include "mxsefl/partition.hpp"
#include "mxsefl/preference.hpp"
#include "mxsefl/valuation.hpp"

namespace mxsefl {

// ---------------------------------------------------------------------------
// Trace

struct TraceEvent {
  std::string name;
  codec::Json payload;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SolverCounters {
  std::size_t phase1_iterations = 0;
  std::size_t phase2_iterations = 0;
  std::size_t phase2_entries = 0;
  std::size_t cycle_rotations = 0;
  std::size_t fair_queries = 0;

  friend bool operator==(const SolverCounters&, const SolverCounters&) = default;
};

/// Ordered log of every state change the solver makes. Replaying the events
/// from the first one reproduces the returned allocation (see replay_trace).
class SolverTrace {
 public:
  void emit(std::string name, codec::Json payload = codec::Json::object()) {
    events_.push_back({std::move(name), std::move(payload)});
  }
  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  std::vector<const TraceEvent*> named(std::string_view name) const {
    std::vector<const TraceEvent*> out;
    for (const auto& e : events_) {
      if (e.name == name) out.push_back(&e);
    }
    return out;
  }

  /// One JSON object per line: {"event": name, ...payload}.
  std::string to_json_lines() const {
    std::string out;
    for (const auto& e : events_) {
      codec::Json line = {{"event", e.name}};
      for (const auto& [key, value] : e.payload.items()) line[key] = value;
      out += line.dump();
      out += '\n';
    }
    return out;
  }

  SolverCounters counters;

  friend bool operator==(const SolverTrace&, const SolverTrace&) = default;

 private:
  std::vector<TraceEvent> events_;
};

/// Any error escaping a solver run, together with the trace up to the failure.
class SolverFailure : public Error {
 public:
  SolverFailure(ErrorCode code, const std::string& what, SolverTrace trace)
      : Error(code, what), trace_(std::move(trace)) {}
  const SolverTrace& trace() const { return trace_; }

 private:
  SolverTrace trace_;
};

// ---------------------------------------------------------------------------
// Configuration

struct SolverConfig {
  std::uint64_t enumeration_budget = kDefaultEnumerationBudget;
  std::size_t phase1_cap = 10'000'000;
  std::size_t phase2_cap = 10'000'000;
  /// Rotations per eliminate_cycles call; unset means n * k * 2^m capped at 10^7.
  std::optional<std::size_t> cycle_cap;
  bool debug_assertions = false;
  /// Run restricted_mms_feasible_check on every valuation before solving.
  bool check_restricted_mms = false;

  /// Called with every partition handed to has_fair_association and the answer.
  std::function<void(const Partition&, bool)> on_fair_query;
  /// Test hook run at the head of every phase-1 iteration; may corrupt state.
  std::function<void(std::size_t, Partition&, AssociationFunction&)> phase1_fault;

  void validate() const {
    if (enumeration_budget == 0 || phase1_cap == 0 || phase2_cap == 0 || (cycle_cap && *cycle_cap == 0)) {
      throw Error(ErrorCode::InvalidSpec, "solver caps and budget must be positive");
    }
  }
};

struct SolveResult {
  Allocation allocation;
  SolverTrace trace;
};

// ---------------------------------------------------------------------------
// Subroutines

/// Goods of smallest marginal value in p for agents i and j. A good that is
/// minimal for both is returned for both; otherwise each gets the lowest-index
/// member of its own argmax set.
inline std::pair<GoodId, GoodId> find_mins(const Instance& inst, Bundle p, AgentId i, AgentId j) {
  if (p.empty()) throw Error(ErrorCode::EmptyBundle, "find_mins of the empty bundle");
  auto argmax = [&](AgentId a) {
    Bundle out;
    std::optional<Rational> best;
    for (GoodId g : p) {
      Rational v = inst.value(a, p.without(g));
      if (!best || v > *best) {
        best = v;
        out = Bundle::single(g);
      } else if (v == *best) {
        out.insert(g);
      }
    }
    return out;
  };
  const Bundle min_i = argmax(i);
  const Bundle min_j = argmax(j);
  const Bundle shared = min_i & min_j;
  if (!shared.empty()) return {shared.front(), shared.front()};
  return {min_i.front(), min_j.front()};
}

/// Bundles (left) against agents (right), with an edge wherever the bundle is
/// MXS+EFL-feasible for the agent.
inline BipartiteMatcher fairness_graph(const ShareCache& shares, const Partition& x) {
  const std::size_t n = shares.instance().agents();
  BipartiteMatcher g(x.size(), n);
  for (std::size_t l = 0; l < x.size(); ++l) {
    for (AgentId i = 0; i < n; ++i) {
      if (mxs_efl_feasible(shares, i, l, x)) g.add_edge(l, i);
    }
  }
  return g;
}

inline bool has_fair_association(const ShareCache& shares, const Partition& x) {
  if (x.size() > shares.instance().agents()) return false;
  return fairness_graph(shares, x).left_perfect();
}

/// A full MXS+EFL association function for x; bundles are matched in index
/// order, each trying agents from the lowest index.
inline AssociationFunction fair_association(const ShareCache& shares, const Partition& x) {
  if (x.size() > shares.instance().agents()) {
    throw Error(ErrorCode::NoFairAssociation, "more bundles than agents");
  }
  const auto match = fairness_graph(shares, x).solve();
  AssociationFunction f(x.size());
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (!match[l]) throw Error(ErrorCode::NoFairAssociation, "no full MXS+EFL association for " + x.str());
    f.set(l, static_cast<AgentId>(*match[l]));
  }
  return f;
}

// ---------------------------------------------------------------------------
// The algorithm

namespace detail {

class SolverRun {
 public:
  SolverRun(const Instance& inst, const SolverConfig& cfg)
      : inst_(inst), cfg_(cfg), shares_(inst, cfg.enumeration_budget) {
    cfg_.validate();
  }

  SolverTrace& trace() { return trace_; }

  Allocation allocate() {
    const std::size_t n = inst_.agents();
    if (cfg_.check_restricted_mms) {
      for (AgentId i = 0; i < n; ++i) {
        auto check = restricted_mms_feasible_check(inst_.valuation(i), n, inst_.goods(), cfg_.enumeration_budget);
        if (!check.feasible) {
          throw Error(ErrorCode::NotRestrictedMmsFeasible,
                      "valuation of agent " + std::to_string(i) + " fails on " + check.witness->goods.str() +
                          " with k=" + std::to_string(check.witness->k));
        }
      }
    }
    trace_.emit("start", {{"n", n}, {"m", inst_.goods()}});
    Partition x({inst_.all_goods()});
    AssociationFunction f(std::vector<std::optional<AgentId>>{AgentId{0}});
    for (std::size_t k = 2; k <= n; ++k) {
      f = eliminate(x, std::move(f), "outer");
      x.push_back(Bundle{});
      f.push_free();
      trace_.emit("append_bundle", {{"k", k}});
      Allocation next = rebalance(std::move(x), std::move(f));
      x = std::move(next.partition);
      f = std::move(next.assoc);
    }
    trace_.emit("done", {{"partition", codec::partition(x)}, {"assoc", codec::assoc(f)}});
    return {x, f};
  }

  Allocation rebalance(Partition x, AssociationFunction f) {
    const std::size_t k = x.size();
    trace_.emit("rebalance_begin", {{"n", inst_.agents()},
                                    {"m", inst_.goods()},
                                    {"k", k},
                                    {"partition", codec::partition(x)}, {"assoc", codec::assoc(f)}});
    check_rebalance_input(x, f);

    // Phase 1.
    AgentId i = 0, j = 0;
    std::size_t p = 0, q = 0;
    GoodId xj = 0;
    Subchain chain;
    for (std::size_t iter = 0;; ++iter) {
      if (iter >= cfg_.phase1_cap) {
        throw Error(ErrorCode::IterationCapExceeded, "phase 1 exceeded " + std::to_string(cfg_.phase1_cap));
      }
      ++trace_.counters.phase1_iterations;
      if (cfg_.phase1_fault) cfg_.phase1_fault(iter, x, f);
      if (cfg_.debug_assertions) {
        auto check = phase1_invariant_check(shares_, x, f);
        if (!check.ok) violation("phase-1 invariant at iteration " + std::to_string(iter) + ": " + check.witness);
      }
      if (has_fair(x)) return finish(1, x);

      i = lowest_free_agent(f);
      p = efx_best(inst_, i, x).front();
      if (f.is_free(p)) violation("EFX-best bundle " + std::to_string(p) + " of free agent is free");
      j = *f[p];
      trace_.emit("phase1_iter", {{"iter", iter}, {"i", i}, {"p", p}, {"j", j}});
      if (!is_efx_best(inst_, j, p, x)) {
        f.set(p, i);
        trace_.emit("phase1_reassign", {{"bundle", p}, {"agent", i}});
        continue;
      }
      const auto [gi, gj] = find_mins(inst_, x[p], i, j);
      xj = gj;
      chain = any_chain_to(inst_, x, f, k - 1);
      q = chain.front();
      if (q == p) violation("phase-1 chain starts at the EFX-best bundle");

      bool moved = false;
      for (const auto& [u, g] : std::array<std::pair<AgentId, GoodId>, 2>{{{i, gi}, {j, gj}}}) {
        if (inst_.value(u, x[q].with(g)) <= inst_.value(u, x[p].without(g))) {
          x = x.moved(g, p, q);
          f.set(p, u);
          trace_.emit("phase1_move", {{"good", g}, {"from", p}, {"to", q}, {"agent", u}});
          f = eliminate(x, std::move(f), "phase1");
          moved = true;
          break;
        }
      }
      if (moved) continue;
      trace_.emit("phase1_break", {{"i", i}, {"j", j}, {"p", p}, {"q", q}, {"chain", codec::subchain(chain)}});
      break;
    }

    // Transition.
    f = shift(std::move(f), chain);
    f.release(p);
    trace_.emit("release", {{"bundle", p}});
    Bundle e = x[p].without(xj);
    ++trace_.counters.phase2_entries;
    trace_.emit("phase2_enter", {{"i", i},
                                 {"j", j},
                                 {"p", p},
                                 {"q", q},
                                 {"E", codec::bundle(e)},
                                 {"vj_E", codec::rational(inst_.value(j, e))},
                                 {"size_p", x[p].size()}});
    Rational last_vj = inst_.value(j, e);
    std::size_t last_p = p;
    std::size_t last_size = x[p].size();

    // Phase 2.
    for (std::size_t iter = 0;; ++iter) {
      if (iter >= cfg_.phase2_cap) {
        throw Error(ErrorCode::IterationCapExceeded, "phase 2 exceeded " + std::to_string(cfg_.phase2_cap));
      }
      ++trace_.counters.phase2_iterations;
      f = eliminate(x, std::move(f), "phase2");
      chain = any_chain_to(inst_, x, f, q);
      const std::size_t r = chain.front();
      if (r == p) violation("phase-2 chain starts at the free bundle p");
      const auto [gi, gj] = find_mins(inst_, x[p], i, j);
      trace_.emit("phase2_iter", {{"iter", iter},
                                  {"p", p},
                                  {"q", q},
                                  {"r", r},
                                  {"chain", codec::subchain(chain)},
                                  {"xi", gi},
                                  {"xj", gj}});

      const Partition x1 = x.moved(gj, p, r);
      if (has_fair(x1)) {
        trace_.emit("phase2_move", {{"good", gj}, {"from", p}, {"to", r}});
        return finish(2, x1);
      }
      const Partition x2 = x.moved(gi, p, r);
      if (has_fair(x2)) {
        trace_.emit("phase2_move", {{"good", gi}, {"from", p}, {"to", r}});
        return finish(2, x2);
      }

      const std::array<Bundle, 3> triple{e, x1[p], x1[r]};
      e = next_best_bundle(inst_, j, triple).second;
      trace_.emit("phase2_move", {{"good", gj}, {"from", p}, {"to", r}});
      std::string branch = "none";
      if (inst_.value(j, x1[r]) > inst_.value(j, x1[p])) {
        f = shift(std::move(f), chain);
        q = p;
        p = r;
        branch = "j_prefers_r";
      } else if (inst_.value(i, x1[r]) >= inst_.value(i, x[q])) {
        f = shift(std::move(f), chain);
        q = r;
        branch = "i_prefers_r";
      }
      x = x1;
      const Rational vj = inst_.value(j, e);
      trace_.emit("phase2_end", {{"iter", iter},
                                 {"branch", branch},
                                 {"p", p},
                                 {"q", q},
                                 {"E", codec::bundle(e)},
                                 {"vj_E", codec::rational(vj)},
                                 {"size_p", x[p].size()}});
      if (cfg_.debug_assertions) {
        auto check = phase2_invariant_a_check(shares_, x, e, j, p);
        if (!check.ok) violation("invariant A at phase-2 iteration " + std::to_string(iter) + ": " + check.witness);
        // The equal case needs invariant A at the start of the iteration, which
        // only exists from the second iteration on.
        if (vj < last_vj || (iter > 0 && vj == last_vj && (p != last_p || x[p].size() >= last_size))) {
          violation("phase-2 potential did not progress at iteration " + std::to_string(iter));
        }
      }
      last_vj = vj;
      last_p = p;
      last_size = x[p].size();
    }
  }

 private:
  [[noreturn]] void violation(const std::string& what) {
    throw Error(ErrorCode::InvariantViolation, what + " (after " + std::to_string(trace_.size()) + " trace events)");
  }

  void check_rebalance_input(const Partition& x, const AssociationFunction& f) {
    const std::size_t k = x.size();
    if (f.size() != k) throw Error(ErrorCode::DimensionMismatch, "association function size differs from partition");
    if (k < 2 || k > inst_.agents()) violation("rebalance needs 2 <= k <= n");
    for (std::size_t l = 0; l < k; ++l) {
      if (f.is_free(l) != (l + 1 == k)) violation("rebalance input must associate exactly bundles 0..k-2");
    }
    if (!is_mxs_efl_association(shares_, x, f)) violation("rebalance input is not MXS+EFL");
    if (!is_acyclic(build_envy_graph(inst_, x, f))) violation("rebalance input envy graph has a cycle");
  }

  bool has_fair(const Partition& x) {
    ++trace_.counters.fair_queries;
    const bool ok = has_fair_association(shares_, x);
    if (cfg_.on_fair_query) cfg_.on_fair_query(x, ok);
    return ok;
  }

  Allocation finish(int phase, const Partition& x) {
    AssociationFunction f = fair_association(shares_, x);
    trace_.emit("return", {{"phase", phase}, {"partition", codec::partition(x)}, {"assoc", codec::assoc(f)}});
    return {x, std::move(f)};
  }

  AgentId lowest_free_agent(const AssociationFunction& f) const {
    for (AgentId a = 0; a < inst_.agents(); ++a) {
      if (!f.holds(a)) return a;
    }
    throw Error(ErrorCode::InvariantViolation, "no free agent");
  }

  AssociationFunction eliminate(const Partition& x, AssociationFunction f, const char* where) {
    std::vector<std::vector<std::size_t>> rotated;
    const std::size_t cap = cfg_.cycle_cap.value_or(default_cycle_cap(inst_.agents(), x.size(), inst_.goods()));
    f = eliminate_cycles(inst_, x, std::move(f), &rotated, cap);
    trace_.counters.cycle_rotations += rotated.size();
    codec::Json cycles = codec::Json::array();
    for (const auto& c : rotated) cycles.push_back(codec::subchain(c));
    trace_.emit("eliminate_cycles", {{"where", where}, {"cycles", cycles}, {"assoc", codec::assoc(f)}});
    return f;
  }

  AssociationFunction shift(AssociationFunction f, const Subchain& c) {
    f = shift_subchain(std::move(f), c);
    trace_.emit("shift", {{"chain", codec::subchain(c)}, {"assoc", codec::assoc(f)}});
    return f;
  }

  const Instance& inst_;
  SolverConfig cfg_;
  ShareCache shares_;
  SolverTrace trace_;
};

template <typename Body>
SolveResult run_solver(const Instance& inst, const SolverConfig& cfg, Body&& body) {
  SolverRun run(inst, cfg);
  try {
    Allocation a = body(run);
    return {std::move(a), std::move(run.trace())};
  } catch (const SolverFailure&) {
    throw;
  } catch (const Error& e) {
    throw SolverFailure(e.code(), e.what(), std::move(run.trace()));
  }
}

}  // namespace detail

/// Rebalances a k-partition whose last bundle is free into one with a full
/// MXS+EFL association. The input must be MXS+EFL on bundles 0..k-2 with an
/// acyclic envy graph.
inline SolveResult rebalance(const Instance& inst, Partition x, AssociationFunction f, const SolverConfig& cfg = {}) {
  return detail::run_solver(inst, cfg, [&](detail::SolverRun& run) {
    return run.rebalance(std::move(x), std::move(f));
  });
}

/// Full n-bundle allocation that is MXS and EFL for every agent.
inline SolveResult mxs_efl_allocate(const Instance& inst, const SolverConfig& cfg = {}) {
  return detail::run_solver(inst, cfg, [](detail::SolverRun& run) { return run.allocate(); });
}

// ---------------------------------------------------------------------------
// Trace consumers

/// Re-applies the recorded actions and returns the final allocation. Every
/// recorded snapshot is cross-checked; a mismatch raises InvariantViolation.
inline Allocation replay_trace(const SolverTrace& trace) {
  std::optional<Partition> x;
  AssociationFunction f;
  std::size_t n = 0, m = 0;
  auto mismatch = [](const std::string& what) {
    throw Error(ErrorCode::InvariantViolation, "trace replay mismatch: " + what);
  };
  auto require = [&](const TraceEvent& e) {
    if (!x) mismatch("event '" + e.name + "' before any state");
  };
  auto read_partition = [&](const codec::Json& j) {
    Partition out;
    for (const auto& b : j) out.push_back(codec::bundle(b, m));
    return out;
  };
  for (const TraceEvent& e : trace.events()) {
    const auto& pl = e.payload;
    if (e.name == "start") {
      n = pl.at("n").get<std::size_t>();
      m = pl.at("m").get<std::size_t>();
      x = Partition({Bundle::full(m)});
      f = AssociationFunction(std::vector<std::optional<AgentId>>{AgentId{0}});
    } else if (e.name == "rebalance_begin") {
      if (!x) {
        // Stand-alone rebalance trace: adopt the recorded state.
        n = pl.at("n").get<std::size_t>();
        m = pl.at("m").get<std::size_t>();
        x = read_partition(pl.at("partition"));
        f = codec::assoc(pl.at("assoc"), n);
      } else if (codec::partition(*x) != pl.at("partition") || codec::assoc(f) != pl.at("assoc")) {
        mismatch("state at rebalance_begin");
      }
    } else if (e.name == "append_bundle") {
      require(e);
      x->push_back(Bundle{});
      f.push_free();
    } else if (e.name == "eliminate_cycles") {
      require(e);
      for (const auto& c : pl.at("cycles")) {
        const auto cyc = c.get<std::vector<std::size_t>>();
        AssociationFunction next = f;
        for (std::size_t t = 0; t < cyc.size(); ++t) next.set(cyc[(t + 1) % cyc.size()], f[cyc[t]]);
        f = next;
      }
      if (codec::assoc(f) != pl.at("assoc")) mismatch("association after cycle elimination");
    } else if (e.name == "phase1_reassign") {
      require(e);
      f.set(pl.at("bundle").get<std::size_t>(), pl.at("agent").get<AgentId>());
    } else if (e.name == "phase1_move") {
      require(e);
      const auto from = pl.at("from").get<std::size_t>();
      *x = x->moved(pl.at("good").get<GoodId>(), from, pl.at("to").get<std::size_t>());
      f.set(from, pl.at("agent").get<AgentId>());
    } else if (e.name == "phase2_move") {
      require(e);
      *x = x->moved(pl.at("good").get<GoodId>(), pl.at("from").get<std::size_t>(), pl.at("to").get<std::size_t>());
    } else if (e.name == "shift") {
      require(e);
      f = shift_subchain(std::move(f), pl.at("chain").get<std::vector<std::size_t>>());
      if (codec::assoc(f) != pl.at("assoc")) mismatch("association after shift");
    } else if (e.name == "release") {
      require(e);
      f.release(pl.at("bundle").get<std::size_t>());
    } else if (e.name == "return") {
      require(e);
      if (codec::partition(*x) != pl.at("partition")) mismatch("partition at return");
      std::vector<std::optional<AgentId>> raw;
      for (const auto& a : pl.at("assoc")) {
        raw.push_back(a.is_null() ? std::nullopt : std::optional<AgentId>(a.get<AgentId>()));
      }
      f = AssociationFunction(std::move(raw));
    }
  }
  if (!x) throw Error(ErrorCode::InvariantViolation, "empty trace");
  return {*x, f};
}

/// Checks from the trace alone that every phase-2 iteration weakly raised
/// v_j(E), and that on equality p stayed put while X_p shrank. The equality
/// clause starts with the second iteration: on entry E is X_p minus j's least
/// good, so the first iteration may keep v_j(E) while moving p.
inline CheckResult phase2_potential_check(const SolverTrace& trace) {
  std::optional<Rational> vj;
  std::size_t p = 0, size = 0;
  for (const TraceEvent& e : trace.events()) {
    if (e.name != "phase2_enter" && e.name != "phase2_end") continue;
    const Rational now = codec::rational(e.payload.at("vj_E"));
    const auto now_p = e.payload.at("p").get<std::size_t>();
    const auto now_size = e.payload.at("size_p").get<std::size_t>();
    if (e.name == "phase2_end" && vj) {
      if (now < *vj) return CheckResult::fail("v_j(E) dropped from " + vj->str() + " to " + now.str());
      const bool first = e.payload.at("iter").get<std::size_t>() == 0;
      if (!first && now == *vj && (now_p != p || now_size >= size)) {
        return CheckResult::fail("v_j(E) stalled at " + now.str() + " without shrinking X_p");
      }
    }
    vj = now;
    p = now_p;
    size = now_size;
  }
  return {};
}

/// Checks that each outer iteration eliminates cycles right before appending
/// the new empty bundle, and that every rebalance starts with that bundle empty.
inline CheckResult outer_loop_check(const SolverTrace& trace) {
  const auto& ev = trace.events();
  for (std::size_t t = 0; t < ev.size(); ++t) {
    if (ev[t].name == "append_bundle") {
      if (t == 0 || ev[t - 1].name != "eliminate_cycles" || ev[t - 1].payload.at("where") != "outer") {
        return CheckResult::fail("append_bundle not preceded by cycle elimination");
      }
      if (t + 1 >= ev.size() || ev[t + 1].name != "rebalance_begin") {
        return CheckResult::fail("append_bundle not followed by rebalance");
      }
      const auto& bundles = ev[t + 1].payload.at("partition");
      if (bundles.empty() || !bundles.back().empty()) return CheckResult::fail("appended bundle is not empty");
    }
  }
  return {};
}

}  // namespace mxsefl
