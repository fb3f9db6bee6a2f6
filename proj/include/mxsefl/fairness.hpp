#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "mxsefl/bundle.hpp"
#include "mxsefl/enumerate.hpp"
#include "mxsefl/envy_graph.hpp"
#include "mxsefl/error.hpp"
#include "mxsefl/partition.hpp"
#include "mxsefl/preference.hpp"
#include "mxsefl/valuation.hpp"

namespace mxsefl {

enum class FeasibilityKind { EFXFeasible, EFLFeasible, EEFXFeasible, MXSFeasible, MXSEFLFeasible, EFXBest };

// ---------------------------------------------------------------------------
// Envy predicates. "Agent i envies t relative to s" and its relaxations.

inline bool envies(const Instance& inst, AgentId i, Bundle s, Bundle t) {
  return inst.value(i, s) < inst.value(i, t);
}

/// Value of t after dropping i's least marginal good; v_i(t) for t = {}.
inline Rational removal_value(const Instance& inst, AgentId i, Bundle t) {
  if (t.empty()) return inst.value(i, t);
  return inst.value(i, t.without(min_marginal_good(inst, i, t)));
}

/// Some g in t with v_i(s) < v_i(t \ g).
inline bool efx_envies(const Instance& inst, AgentId i, Bundle s, Bundle t) {
  if (t.empty()) return false;
  return inst.value(i, s) < removal_value(inst, i, t);
}

/// |t| > 1 and every g in t has v_i(s) < v_i(t \ g) or v_i(s) < v_i({g}).
inline bool efl_envies(const Instance& inst, AgentId i, Bundle s, Bundle t) {
  if (t.size() <= 1) return false;
  const Rational own = inst.value(i, s);
  for (GoodId g : t) {
    if (!(own < inst.value(i, t.without(g)) || own < inst.value(i, Bundle::single(g)))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Feasibility of a bundle inside a partition.

inline bool efx_feasible(const Instance& inst, AgentId i, std::size_t l, const Partition& x) {
  for (std::size_t z = 0; z < x.size(); ++z) {
    if (z != l && efx_envies(inst, i, x[l], x[z])) return false;
  }
  return true;
}

/// EFL-feasibility of an arbitrary bundle s against every bundle of x.
inline bool efl_feasible_bundle(const Instance& inst, AgentId i, Bundle s, const Partition& x) {
  for (const Bundle& t : x) {
    if (efl_envies(inst, i, s, t)) return false;
  }
  return true;
}

inline bool efl_feasible(const Instance& inst, AgentId i, std::size_t l, const Partition& x) {
  return efl_feasible_bundle(inst, i, x[l], x);
}

/// Indices z such that every other nonempty bundle l has
/// v_i(X_l \ x_l^i) <= v_i(X_z \ x_z^i). An empty X_z scores v_i({}).
inline std::vector<std::size_t> efx_best(const Instance& inst, AgentId i, const Partition& x) {
  std::vector<Rational> score(x.size());
  for (std::size_t l = 0; l < x.size(); ++l) score[l] = removal_value(inst, i, x[l]);
  std::vector<std::size_t> out;
  for (std::size_t z = 0; z < x.size(); ++z) {
    bool best = true;
    for (std::size_t l = 0; l < x.size() && best; ++l) {
      if (l != z && !x[l].empty() && score[z] < score[l]) best = false;
    }
    if (best) out.push_back(z);
  }
  return out;
}

inline bool is_efx_best(const Instance& inst, AgentId i, std::size_t z, const Partition& x) {
  for (std::size_t l : efx_best(inst, i, x)) {
    if (l == z) return true;
  }
  return false;
}

namespace detail {

// For k bundles, whether `own` (the value of bundle `self`) is at least the
// removal value of every other nonempty bundle.
struct RemovalProfile {
  Rational top1, top2;
  std::size_t top1_index = 0;
  bool has_top1 = false;
  bool has_top2 = false;

  RemovalProfile(const Instance& inst, AgentId i, std::span<const Bundle> ys) {
    for (std::size_t b = 0; b < ys.size(); ++b) {
      if (ys[b].empty()) continue;
      Rational r = removal_value(inst, i, ys[b]);
      if (!has_top1 || r > top1) {
        if (has_top1) {
          top2 = top1;
          has_top2 = true;
        }
        top1 = r;
        top1_index = b;
        has_top1 = true;
      } else if (!has_top2 || r > top2) {
        top2 = r;
        has_top2 = true;
      }
    }
  }

  bool feasible(std::size_t self, const Rational& own) const {
    if (!has_top1) return true;
    if (top1_index != self) return own >= top1;
    return !has_top2 || own >= top2;
  }
};

}  // namespace detail

/// Whether bundle e, kept intact, is EFX-feasible for i in some k-partition of
/// the goods that contains it. The goods outside e are spread over the other
/// k-1 bundles; only unordered set partitions are visited since labels of the
/// other bundles do not matter. The budget counts the (k-1)^|M\e| labeled
/// assignments this stands for.
inline bool eefx_feasible_bundle(const Instance& inst, AgentId i, Bundle e, std::size_t k,
                                 std::uint64_t budget = kDefaultEnumerationBudget) {
  const Bundle rest = inst.all_goods() - e;
  if (k == 0) return false;
  if (k == 1) return rest.empty();
  require_budget(k - 1, rest.size(), budget, "EEFX feasibility");
  const Rational own = inst.value(i, e);
  bool found = false;
  std::vector<Bundle> ys(k);
  ys[0] = e;
  for_each_set_partition(rest, k - 1, [&](std::span<const Bundle> others) {
    for (std::size_t b = 0; b < others.size(); ++b) ys[b + 1] = others[b];
    if (detail::RemovalProfile(inst, i, ys).feasible(0, own)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

inline bool eefx_feasible(const Instance& inst, AgentId i, std::size_t l, const Partition& x,
                          std::uint64_t budget = kDefaultEnumerationBudget) {
  return eefx_feasible_bundle(inst, i, x[l], x.size(), budget);
}

// ---------------------------------------------------------------------------
// Shares.

/// Memoized MXS and MMS shares of one instance. Readers may run concurrently;
/// fills take an exclusive lock. Cached and fresh values are identical because
/// both come from the same exhaustive enumeration.
class ShareCache {
 public:
  explicit ShareCache(const Instance& inst, std::uint64_t budget = kDefaultEnumerationBudget)
      : inst_(&inst), budget_(budget) {}

  const Instance& instance() const { return *inst_; }
  std::uint64_t budget() const { return budget_; }

  /// Least value i can get at an EFX-feasible bundle over all k-partitions of
  /// the goods.
  Rational mxs_share(AgentId i, std::size_t k) const {
    if (k == 0) throw Error(ErrorCode::InvalidSpec, "mxs_share needs k >= 1");
    const auto key = std::make_tuple(i, k, std::uint64_t{0});
    if (auto hit = lookup(mxs_, key)) return *hit;
    Rational share = compute_mxs(i, k);
    store(mxs_, key, share);
    return share;
  }

  /// k-maximin share of i over the goods in s.
  Rational mms_share(AgentId i, std::size_t k, Bundle s) const {
    if (k == 0) throw Error(ErrorCode::InvalidSpec, "mms_share needs k >= 1");
    const auto key = std::make_tuple(i, k, s.mask());
    if (auto hit = lookup(mms_, key)) return *hit;
    Rational share = compute_mms(i, k, s);
    store(mms_, key, share);
    return share;
  }

  /// Uncached recomputations, exposed for the cache-consistency contract.
  Rational compute_mxs(AgentId i, std::size_t k) const {
    const Instance& inst = *inst_;
    require_budget(k, inst.goods(), budget_, "MXS share");
    std::optional<Rational> share;
    for_each_set_partition(inst.all_goods(), k, [&](std::span<const Bundle> ys) {
      detail::RemovalProfile profile(inst, i, ys);
      for (std::size_t b = 0; b < ys.size(); ++b) {
        Rational v = inst.value(i, ys[b]);
        if ((!share || v < *share) && profile.feasible(b, v)) share = v;
      }
      return true;
    });
    return share.value_or(inst.value(i, Bundle{}));
  }

  Rational compute_mms(AgentId i, std::size_t k, Bundle s) const {
    const Instance& inst = *inst_;
    require_budget(k, s.size(), budget_, "MMS share");
    std::optional<Rational> share;
    for_each_set_partition(s, k, [&](std::span<const Bundle> ys) {
      Rational worst = inst.value(i, ys[0]);
      for (const Bundle& y : ys) {
        Rational v = inst.value(i, y);
        if (v < worst) worst = v;
      }
      if (!share || worst > *share) share = worst;
      return true;
    });
    return share.value_or(inst.value(i, Bundle{}));
  }

 private:
  using Key = std::tuple<AgentId, std::size_t, std::uint64_t>;

  std::optional<Rational> lookup(const std::map<Key, Rational>& memo, const Key& key) const {
    std::shared_lock lock(mutex_);
    auto it = memo.find(key);
    if (it == memo.end()) return std::nullopt;
    return it->second;
  }
  void store(std::map<Key, Rational>& memo, const Key& key, const Rational& v) const {
    std::unique_lock lock(mutex_);
    memo.emplace(key, v);
  }

  const Instance* inst_;
  std::uint64_t budget_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Key, Rational> mxs_;
  mutable std::map<Key, Rational> mms_;
};

inline bool mxs_feasible(const ShareCache& shares, AgentId i, std::size_t l, const Partition& x) {
  return shares.instance().value(i, x[l]) >= shares.mxs_share(i, x.size());
}

inline bool mxs_efl_feasible(const ShareCache& shares, AgentId i, std::size_t l, const Partition& x) {
  return efl_feasible(shares.instance(), i, l, x) && mxs_feasible(shares, i, l, x);
}

/// f is MXS+EFL for x: every associated bundle is MXS+EFL-feasible for its agent.
inline bool is_mxs_efl_association(const ShareCache& shares, const Partition& x, const AssociationFunction& f) {
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (f[l] && !mxs_efl_feasible(shares, *f[l], l, x)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Valuation-class checks.

struct RestrictedMmsWitness {
  Bundle goods;
  std::size_t k = 0;
  std::vector<Bundle> min_max_partition;  // partition whose largest bundle is smallest
  std::vector<Bundle> max_min_partition;  // partition whose smallest bundle is largest
  Rational min_max;
  Rational max_min;
};

struct RestrictedMmsResult {
  bool feasible = true;
  std::optional<RestrictedMmsWitness> witness;
};

/// Checks, for every bundle s with |s| <= m_budget and every k in [2, k_max],
/// that the smallest possible largest-bundle value over k-partitions of s is at
/// least the k-maximin share of s. Returns the first violation found.
inline RestrictedMmsResult restricted_mms_feasible_check(const Valuation& v, std::size_t k_max,
                                                         std::size_t m_budget,
                                                         std::uint64_t budget = kDefaultEnumerationBudget) {
  const Instance solo(v.goods(), {v});
  const std::size_t m = v.goods();
  if (m_budget > m) m_budget = m;
  if (k_max >= 2) require_budget(k_max, m_budget, budget, "restricted-MMS check");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    const Bundle s(mask);
    if (s.size() > m_budget) continue;
    for (std::size_t k = 2; k <= k_max; ++k) {
      std::optional<Rational> min_max, max_min;
      std::vector<Bundle> arg_min_max, arg_max_min;
      for_each_set_partition(s, k, [&](std::span<const Bundle> ys) {
        Rational hi = solo.value(0, ys[0]);
        Rational lo = hi;
        for (const Bundle& y : ys) {
          Rational val = solo.value(0, y);
          if (val > hi) hi = val;
          if (val < lo) lo = val;
        }
        if (!min_max || hi < *min_max) {
          min_max = hi;
          arg_min_max.assign(ys.begin(), ys.end());
        }
        if (!max_min || lo > *max_min) {
          max_min = lo;
          arg_max_min.assign(ys.begin(), ys.end());
        }
        return true;
      });
      if (*min_max < *max_min) {
        return {false, RestrictedMmsWitness{s, k, arg_min_max, arg_max_min, *min_max, *max_min}};
      }
    }
  }
  return {};
}

struct GoodCancelableWitness {
  Bundle q, r, s, t;
};

struct GoodCancelableResult {
  bool cancelable = true;
  std::optional<GoodCancelableWitness> witness;
};

/// Exhaustive search for Q, R, S, T with Q∩S = R∩T = {}, v(Q) >= v(R) and
/// v(S) > v(T) but v(Q∪S) <= v(R∪T). Only pairs whose union has at most
/// m_budget goods are considered. The budget bounds the number of pair-of-pairs
/// comparisons.
inline GoodCancelableResult good_cancelable_check(const Valuation& v, std::size_t m_budget,
                                                  std::uint64_t budget = std::uint64_t{1} << 26) {
  const Instance solo(v.goods(), {v});
  const std::size_t m = v.goods();
  struct Pair {
    Bundle a, b;
    Rational va, vb, vab;
  };
  std::vector<Pair> pairs;
  const std::uint64_t pair_count = saturating_pow(3, m);
  if (pair_count > budget || saturating_pow(pair_count, 2) > budget * budget) {
    throw Error(ErrorCode::InstanceTooLarge, "good-cancelable check over " + std::to_string(m) + " goods");
  }
  // Each good is in a, in b, or in neither.
  for (std::uint64_t code = 0; code < pair_count; ++code) {
    Bundle a, b;
    std::uint64_t rest = code;
    for (GoodId g = 0; g < m; ++g) {
      if (rest % 3 == 1) a.insert(g);
      if (rest % 3 == 2) b.insert(g);
      rest /= 3;
    }
    if ((a | b).size() > m_budget) continue;
    pairs.push_back({a, b, solo.value(0, a), solo.value(0, b), solo.value(0, a | b)});
  }
  if (saturating_pow(pairs.size(), 2) > budget) {
    throw Error(ErrorCode::InstanceTooLarge, "good-cancelable check exceeds budget");
  }
  // (Q, S) ranges over pairs as (a, b); (R, T) likewise.
  for (const Pair& qs : pairs) {
    for (const Pair& rt : pairs) {
      if (qs.va >= rt.va && qs.vb > rt.vb && !(qs.vab > rt.vab)) {
        return {false, GoodCancelableWitness{qs.a, rt.a, qs.b, rt.b}};
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Runtime invariant checks used by the solver's debug hooks.

struct CheckResult {
  bool ok = true;
  std::string witness;

  static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

/// f is MXS+EFL for x, exactly the last bundle is free, and every subchain to
/// the last bundle extends backwards to a chain (a source-anchored path).
inline CheckResult phase1_invariant_check(const ShareCache& shares, const Partition& x,
                                          const AssociationFunction& f) {
  const Instance& inst = shares.instance();
  const std::size_t k = x.size();
  if (k == 0 || f.size() != k) return CheckResult::fail("dimension mismatch");
  for (std::size_t l = 0; l < k; ++l) {
    const bool should_be_free = l + 1 == k;
    if (f.is_free(l) != should_be_free) {
      return CheckResult::fail("support is not [k-1]: bundle " + std::to_string(l) +
                               (f.is_free(l) ? " is free" : " is associated"));
    }
    if (f[l] && !mxs_efl_feasible(shares, *f[l], l, x)) {
      return CheckResult::fail("bundle " + std::to_string(l) + " is not MXS+EFL-feasible for agent " +
                               std::to_string(*f[l]));
    }
  }
  const EnvyGraph g = build_envy_graph(inst, x, f);
  const std::size_t target = k - 1;
  std::vector<std::size_t> path{target};
  std::vector<bool> on_path(k, false);
  on_path[target] = true;
  std::optional<std::string> failure;

  auto extends_to_chain = [&](std::size_t first) {
    // Simple backward path from `first` to a source avoiding the subchain.
    std::vector<bool> seen = on_path;
    std::deque<std::size_t> queue{first};
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      auto preds = g.predecessors(v);
      if (preds.empty()) return true;
      for (std::size_t u : preds) {
        if (!seen[u]) {
          seen[u] = true;
          queue.push_back(u);
        }
      }
    }
    return false;
  };
  auto dfs = [&](auto&& self, std::size_t v) -> void {
    if (failure) return;
    if (!extends_to_chain(v)) {
      std::string desc;
      for (auto it = path.rbegin(); it != path.rend(); ++it) desc += std::to_string(*it) + " ";
      failure = "subchain ( " + desc + ") is not contained in a chain";
      return;
    }
    for (std::size_t u : g.predecessors(v)) {
      if (on_path[u]) continue;
      on_path[u] = true;
      path.push_back(u);
      self(self, u);
      path.pop_back();
      on_path[u] = false;
    }
  };
  dfs(dfs, target);
  if (failure) return CheckResult::fail(*failure);
  return {};
}

/// Invariant A of the second phase: e is EFL-feasible for j in x, e is not
/// EEFX-feasible for j, and j does not EFX-envy any bundle other than X_p
/// relative to e.
inline CheckResult phase2_invariant_a_check(const ShareCache& shares, const Partition& x, Bundle e, AgentId j,
                                            std::size_t p) {
  const Instance& inst = shares.instance();
  if (!efl_feasible_bundle(inst, j, e, x)) return CheckResult::fail("E is not EFL-feasible for j");
  if (eefx_feasible_bundle(inst, j, e, x.size(), shares.budget())) {
    return CheckResult::fail("E is EEFX-feasible for j");
  }
  for (std::size_t z = 0; z < x.size(); ++z) {
    if (z != p && efx_envies(inst, j, e, x[z])) {
      return CheckResult::fail("j EFX-envies bundle " + std::to_string(z) + " relative to E");
    }
  }
  return {};
}

}  // namespace mxsefl
