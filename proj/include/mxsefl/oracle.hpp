#pragma once

// Definition-level verification. Nothing here calls the fast paths in
// fairness.hpp or enumerate.hpp: shares come from labeled k^|S| enumeration
// and every predicate is spelled out from its quantified definition.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mxsefl/bundle.hpp"
#include "mxsefl/codec.hpp"
#include "mxsefl/error.hpp"
#include "mxsefl/fairness.hpp"
#include "mxsefl/partition.hpp"
#include "mxsefl/valuation.hpp"

namespace mxsefl::oracle {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 22;

/// Every labeled assignment of the goods of s to k bundles, k^|s| in total,
/// visited in odometer order (the lowest good varies fastest).
class LabeledPartitions {
 public:
  LabeledPartitions(Bundle s, std::size_t k, std::uint64_t budget = kDefaultBudget)
      : goods_(s.goods()), k_(k) {
    count_ = 1;
    for (std::size_t t = 0; t < goods_.size(); ++t) {
      if (k_ != 0 && count_ > UINT64_MAX / k_) {
        count_ = UINT64_MAX;
        break;
      }
      count_ *= k_;
    }
    if (goods_.empty()) count_ = k_ == 0 ? 0 : 1;
    if (count_ > budget) {
      throw Error(ErrorCode::InstanceTooLarge, std::to_string(k) + "^" + std::to_string(goods_.size()) +
                                                   " labeled partitions exceed the budget of " + std::to_string(budget));
    }
  }

  std::uint64_t count() const { return count_; }

  /// visit(const std::vector<Bundle>&) returns false to stop.
  template <typename Visitor>
  void for_each(Visitor&& visit) const {
    if (count_ == 0) return;
    std::vector<std::size_t> digit(goods_.size(), 0);
    std::vector<Bundle> ys(k_);
    for (GoodId g : goods_) ys[0].insert(g);
    while (true) {
      if (!visit(static_cast<const std::vector<Bundle>&>(ys))) return;
      std::size_t t = 0;
      for (; t < goods_.size(); ++t) {
        ys[digit[t]].erase(goods_[t]);
        digit[t] = (digit[t] + 1) % k_;
        ys[digit[t]].insert(goods_[t]);
        if (digit[t] != 0) break;
      }
      if (t == goods_.size()) return;
    }
  }

 private:
  std::vector<GoodId> goods_;
  std::size_t k_;
  std::uint64_t count_ = 0;
};

// ---------------------------------------------------------------------------
// Definitions

/// Some g in t with v_i(s) < v_i(t \ g).
inline bool efx_envies(const Instance& inst, AgentId i, Bundle s, Bundle t) {
  const Rational own = inst.value(i, s);
  for (GoodId g : t) {
    if (own < inst.value(i, t.without(g))) return true;
  }
  return false;
}

/// EFL toward t: |t| <= 1, or some g in t with v_i(s) >= v_i(t \ g) and v_i(s) >= v_i({g}).
inline bool efl_toward(const Instance& inst, AgentId i, Bundle s, Bundle t) {
  if (t.size() <= 1) return true;
  const Rational own = inst.value(i, s);
  for (GoodId g : t) {
    if (own >= inst.value(i, t.without(g)) && own >= inst.value(i, Bundle::single(g))) return true;
  }
  return false;
}

/// EF1 toward t: no envy, or some g in t whose removal ends it.
inline bool ef1_toward(const Instance& inst, AgentId i, Bundle s, Bundle t) {
  const Rational own = inst.value(i, s);
  if (own >= inst.value(i, t)) return true;
  for (GoodId g : t) {
    if (own >= inst.value(i, t.without(g))) return true;
  }
  return false;
}

inline bool efx_feasible_in(const Instance& inst, AgentId i, std::size_t l, const std::vector<Bundle>& ys) {
  for (std::size_t z = 0; z < ys.size(); ++z) {
    if (z != l && oracle::efx_envies(inst, i, ys[l], ys[z])) return false;
  }
  return true;
}

struct ShareWitness {
  Rational value;
  std::vector<Bundle> partition;
  std::size_t bundle = 0;
};

/// min over labeled k-partitions of M of v_i at an EFX-feasible bundle.
inline ShareWitness mxs_share(const Instance& inst, AgentId i, std::size_t k, std::uint64_t budget = kDefaultBudget) {
  std::optional<ShareWitness> best;
  LabeledPartitions(inst.all_goods(), k, budget).for_each([&](const std::vector<Bundle>& ys) {
    for (std::size_t l = 0; l < ys.size(); ++l) {
      const Rational v = inst.value(i, ys[l]);
      if (best && !(v < best->value)) continue;
      if (efx_feasible_in(inst, i, l, ys)) best = ShareWitness{v, ys, l};
    }
    return true;
  });
  if (!best) throw Error(ErrorCode::EmptyCollection, "no partition to take an MXS share over");
  return *best;
}

/// max over labeled k-partitions of s of the least bundle value.
inline ShareWitness mms_share(const Instance& inst, AgentId i, std::size_t k, Bundle s,
                              std::uint64_t budget = kDefaultBudget) {
  std::optional<ShareWitness> best;
  LabeledPartitions(s, k, budget).for_each([&](const std::vector<Bundle>& ys) {
    std::size_t worst = 0;
    for (std::size_t l = 1; l < ys.size(); ++l) {
      if (inst.value(i, ys[l]) < inst.value(i, ys[worst])) worst = l;
    }
    const Rational v = inst.value(i, ys[worst]);
    if (!best || v > best->value) best = ShareWitness{v, ys, worst};
    return true;
  });
  if (!best) throw Error(ErrorCode::EmptyCollection, "no partition to take an MMS share over");
  return *best;
}

/// num/den capped at 1; 1 when den is zero.
inline Rational capped_ratio(const Rational& num, const Rational& den) {
  if (den == Rational(0)) return 1;
  const Rational r = num / den;
  return r > Rational(1) ? Rational(1) : r;
}

// ---------------------------------------------------------------------------
// Audit

struct AgentAudit {
  AgentId agent = 0;
  std::size_t bundle = 0;
  Rational value;
  bool efl = true;
  bool mxs = true;
  Rational mxs_share;
  bool ef1 = true;
  bool efx = true;
  Rational alpha_efx = 1;
  Rational mms_share;
  Rational alpha_mms = 1;
  Rational alpha_pmms = 1;
  std::optional<Rational> alpha_gmms;  // unset when GMMS was not fully evaluated
  bool proportional = true;
  codec::Json witnesses = codec::Json::object();
};

struct AuditOptions {
  std::uint64_t budget = kDefaultBudget;
  /// Labeled partitions the GMMS sweep may visit in total.
  std::uint64_t gmms_budget = std::uint64_t{1} << 22;
};

struct AuditReport {
  std::vector<AgentAudit> agents;
  bool mxs_efl = true;
  std::size_t gmms_subsets_total = 0;
  std::size_t gmms_subsets_evaluated = 0;

  bool gmms_complete() const { return gmms_subsets_evaluated == gmms_subsets_total; }
  bool passed() const { return mxs_efl; }

  codec::Json to_json() const;
};

namespace detail {

inline codec::Json bundles_json(const std::vector<Bundle>& ys) {
  codec::Json out = codec::Json::array();
  for (Bundle b : ys) out.push_back(codec::bundle(b));
  return out;
}

}  // namespace detail

/// Audits a full allocation from first principles.
inline AuditReport audit_allocation(const Instance& inst, const Allocation& alloc, const AuditOptions& opt = {}) {
  const Partition& x = alloc.partition;
  const AssociationFunction& f = alloc.assoc;
  const std::size_t n = inst.agents();
  if (x.size() != n || f.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "allocation must have one bundle per agent");
  }
  if (!f.full() || !f.injective()) throw Error(ErrorCode::InvalidSpec, "allocation is not a full association");
  Bundle covered;
  for (Bundle b : x) {
    if (!b.disjoint(covered)) throw Error(ErrorCode::InvalidSpec, "allocation bundles overlap");
    covered = covered | b;
  }
  if (covered != inst.all_goods()) throw Error(ErrorCode::InvalidSpec, "allocation does not cover all goods");

  std::vector<Bundle> own(n);
  for (std::size_t l = 0; l < n; ++l) own[*f[l]] = x[l];

  AuditReport report;
  report.agents.resize(n);
  for (AgentId i = 0; i < n; ++i) {
    AgentAudit& a = report.agents[i];
    a.agent = i;
    a.bundle = *f.bundle_of(i);
    a.value = inst.value(i, own[i]);

    for (AgentId j = 0; j < n; ++j) {
      if (j == i) continue;
      const Bundle t = own[j];
      if (a.efl && !efl_toward(inst, i, own[i], t)) {
        a.efl = false;
        a.witnesses["efl"] = {{"agent", j}, {"bundle", codec::bundle(t)}};
      }
      if (a.ef1 && !ef1_toward(inst, i, own[i], t)) {
        a.ef1 = false;
        a.witnesses["ef1"] = {{"agent", j}, {"bundle", codec::bundle(t)}};
      }
      if (a.efx && oracle::efx_envies(inst, i, own[i], t)) {
        a.efx = false;
        a.witnesses["efx"] = {{"agent", j}, {"bundle", codec::bundle(t)}};
      }
      if (!t.empty()) {
        Rational worst_rest = inst.value(i, t.without(t.front()));
        for (GoodId g : t) worst_rest = std::max(worst_rest, inst.value(i, t.without(g)));
        const Rational r = capped_ratio(a.value, worst_rest);
        if (r < a.alpha_efx) {
          a.alpha_efx = r;
          a.witnesses["alpha_efx"] = {{"agent", j}, {"ratio", codec::rational(r)}};
        }
      }
      const ShareWitness pair = mms_share(inst, i, 2, own[i] | t, opt.budget);
      const Rational r = capped_ratio(a.value, pair.value);
      if (r < a.alpha_pmms) {
        a.alpha_pmms = r;
        a.witnesses["alpha_pmms"] = {
            {"agent", j}, {"share", codec::rational(pair.value)}, {"partition", detail::bundles_json(pair.partition)}};
      }
    }

    const ShareWitness mxs = mxs_share(inst, i, n, opt.budget);
    a.mxs_share = mxs.value;
    a.mxs = a.value >= mxs.value;
    if (!a.mxs) {
      a.witnesses["mxs"] = {{"share", codec::rational(mxs.value)},
                            {"partition", detail::bundles_json(mxs.partition)},
                            {"bundle", mxs.bundle}};
    }
    const ShareWitness mms = mms_share(inst, i, n, inst.all_goods(), opt.budget);
    a.mms_share = mms.value;
    a.alpha_mms = capped_ratio(a.value, mms.value);
    if (a.alpha_mms < Rational(1)) {
      a.witnesses["alpha_mms"] = {{"share", codec::rational(mms.value)},
                                  {"partition", detail::bundles_json(mms.partition)}};
    }
    Rational total = inst.value(i, inst.all_goods());
    a.proportional = a.value * Rational(static_cast<std::int64_t>(n)) >= total;
    if (!a.proportional) a.witnesses["proportional"] = {{"total", codec::rational(total)}};

    if (!(a.efl && a.mxs)) report.mxs_efl = false;
  }

  // GMMS: agent subsets of size >= 2 in order of size, then by mask.
  std::vector<std::uint64_t> subsets;
  if (n <= 20) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (std::popcount(mask) >= 2) subsets.push_back(mask);
    }
  }
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) < std::popcount(b); });
  report.gmms_subsets_total = n <= 20 ? subsets.size() : SIZE_MAX;
  std::vector<Rational> gmms(n, Rational(1));
  std::vector<codec::Json> gmms_witness(n);
  std::uint64_t spent = 0;
  for (std::uint64_t mask : subsets) {
    const Bundle agents(mask);
    Bundle pool;
    for (AgentId j : agents) pool = pool | own[j];
    const std::size_t size = agents.size();
    std::uint64_t cost = 1;
    for (std::size_t t = 0; t < pool.size() && cost <= opt.gmms_budget; ++t) cost *= size;
    cost *= size;  // once per member agent
    if (spent + cost > opt.gmms_budget) break;
    spent += cost;
    for (AgentId i : agents) {
      const ShareWitness w = mms_share(inst, i, size, pool, opt.gmms_budget);
      const Rational r = capped_ratio(report.agents[i].value, w.value);
      if (r < gmms[i]) {
        gmms[i] = r;
        codec::Json members = codec::Json::array();
        for (AgentId j : agents) members.push_back(j);
        gmms_witness[i] = {{"agents", members}, {"share", codec::rational(w.value)}};
      }
    }
    ++report.gmms_subsets_evaluated;
  }
  if (report.gmms_complete()) {
    for (AgentId i = 0; i < n; ++i) {
      report.agents[i].alpha_gmms = gmms[i];
      if (!gmms_witness[i].is_null()) report.agents[i].witnesses["alpha_gmms"] = gmms_witness[i];
    }
  }
  return report;
}

inline codec::Json AuditReport::to_json() const {
  codec::Json out;
  out["verdict"] = mxs_efl ? "pass" : "fail";
  out["mxs_efl"] = mxs_efl;
  out["gmms"] = {{"evaluated", gmms_complete()},
                 {"subsets_evaluated", gmms_subsets_evaluated},
                 {"subsets_total", gmms_subsets_total}};
  codec::Json list = codec::Json::array();
  for (const AgentAudit& a : agents) {
    codec::Json j;
    j["agent"] = a.agent;
    j["bundle"] = a.bundle;
    j["value"] = codec::rational(a.value);
    j["efl"] = a.efl;
    j["mxs"] = a.mxs;
    j["mxs_share"] = codec::rational(a.mxs_share);
    j["ef1"] = a.ef1;
    j["efx"] = a.efx;
    j["alpha_efx"] = codec::rational(a.alpha_efx);
    j["mms_share"] = codec::rational(a.mms_share);
    j["alpha_mms"] = codec::rational(a.alpha_mms);
    j["alpha_pmms"] = codec::rational(a.alpha_pmms);
    if (a.alpha_gmms) {
      j["alpha_gmms"] = codec::rational(*a.alpha_gmms);
    } else {
      j["alpha_gmms"] = "not evaluated";
    }
    j["proportional"] = a.proportional;
    j["witnesses"] = a.witnesses;
    list.push_back(std::move(j));
  }
  out["agents"] = std::move(list);
  return out;
}

/// Exhaustive search over injective bundle-to-agent maps, each checked with
/// the fairness-module predicates. Cross-checks the solver's matching.
inline bool brute_force_fair_association_exists(const ShareCache& shares, const Partition& x,
                                                std::uint64_t budget = kDefaultBudget) {
  const std::size_t n = shares.instance().agents();
  const std::size_t k = x.size();
  if (k > n) return false;
  std::uint64_t arrangements = 1;
  for (std::size_t t = 0; t < k; ++t) {
    arrangements *= n - t;
    if (arrangements > budget) throw Error(ErrorCode::InstanceTooLarge, "too many association functions");
  }
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, std::size_t l) -> bool {
    if (l == k) return true;
    for (AgentId i = 0; i < n; ++i) {
      if (used[i] || !mxs_efl_feasible(shares, i, l, x)) continue;
      used[i] = true;
      const bool ok = self(self, l + 1);
      used[i] = false;
      if (ok) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace mxsefl::oracle
