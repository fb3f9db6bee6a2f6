#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "mxsefl/bundle.hpp"
#include "mxsefl/error.hpp"
#include "mxsefl/valuation.hpp"

namespace mxsefl {

/// Position of a bundle in a list together with the bundle itself.
using Ranked = std::pair<std::size_t, Bundle>;

namespace detail {

// Total preference order used by Best/NextBest/Worst: higher value first, then
// more goods, then lower list position.
inline bool ranks_above(const Instance& inst, AgentId i, std::span<const Bundle> ys, std::size_t a,
                        std::size_t b) {
  Rational va = inst.value(i, ys[a]);
  Rational vb = inst.value(i, ys[b]);
  if (va != vb) return va > vb;
  if (ys[a].size() != ys[b].size()) return ys[a].size() > ys[b].size();
  return a < b;
}

}  // namespace detail

/// Most valuable bundle for agent i; ties go to the larger bundle, then to the
/// lower list position.
inline Ranked best_bundle(const Instance& inst, AgentId i, std::span<const Bundle> ys) {
  if (ys.empty()) throw Error(ErrorCode::EmptyCollection, "best_bundle of an empty list");
  std::size_t best = 0;
  for (std::size_t z = 1; z < ys.size(); ++z) {
    if (detail::ranks_above(inst, i, ys, z, best)) best = z;
  }
  return {best, ys[best]};
}

/// Best bundle after the best_bundle winner is removed. Equal bundles at
/// different positions count as distinct entries.
inline Ranked next_best_bundle(const Instance& inst, AgentId i, std::span<const Bundle> ys) {
  if (ys.size() < 2) throw Error(ErrorCode::EmptyCollection, "next_best_bundle needs two bundles");
  const std::size_t winner = best_bundle(inst, i, ys).first;
  std::size_t second = winner == 0 ? 1 : 0;
  for (std::size_t z = 0; z < ys.size(); ++z) {
    if (z != winner && detail::ranks_above(inst, i, ys, z, second)) second = z;
  }
  return {second, ys[second]};
}

/// Last bundle in the same total order: least value, then fewer goods, then
/// the higher list position.
inline Ranked worst_bundle(const Instance& inst, AgentId i, std::span<const Bundle> ys) {
  if (ys.empty()) throw Error(ErrorCode::EmptyCollection, "worst_bundle of an empty list");
  std::size_t worst = 0;
  for (std::size_t z = 1; z < ys.size(); ++z) {
    if (detail::ranks_above(inst, i, ys, worst, z)) worst = z;
  }
  return {worst, ys[worst]};
}

/// Good of smallest marginal value for i in p: maximizes v_i(p \ g), lowest
/// index on ties.
inline GoodId min_marginal_good(const Instance& inst, AgentId i, Bundle p) {
  if (p.empty()) throw Error(ErrorCode::EmptyBundle, "min_marginal_good of the empty bundle");
  GoodId best = p.front();
  Rational best_value = inst.value(i, p.without(best));
  for (GoodId g : p) {
    Rational v = inst.value(i, p.without(g));
    if (v > best_value) {
      best = g;
      best_value = v;
    }
  }
  return best;
}

}  // namespace mxsefl
