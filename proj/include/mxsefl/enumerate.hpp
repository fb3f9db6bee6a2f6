#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mxsefl/bundle.hpp"
#include "mxsefl/error.hpp"

namespace mxsefl {

/// Default number of labeled assignments any single enumeration may visit.
inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 22;

/// base^exp, saturating at UINT64_MAX.
inline std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t e = 0; e < exp; ++e) {
    if (base != 0 && out > UINT64_MAX / base) return UINT64_MAX;
    out *= base;
  }
  return out;
}

/// Raises InstanceTooLarge if k^goods labeled assignments exceed the budget.
inline void require_budget(std::uint64_t k, std::size_t goods, std::uint64_t budget, const char* what) {
  const std::uint64_t need = saturating_pow(k, goods);
  if (need > budget) {
    throw Error(ErrorCode::InstanceTooLarge, std::string(what) + " needs " + std::to_string(k) + "^" +
                                                 std::to_string(goods) + " assignments, budget is " +
                                                 std::to_string(budget));
  }
}

/// Visits every unordered partition of s into at most k blocks, presented as k
/// bundles (unused blocks are empty, nonempty blocks ordered by smallest good).
/// Each set partition is visited exactly once via restricted growth strings;
/// label permutations are skipped, which is exact for any label-invariant
/// quantity. The visitor returns false to stop early.
template <typename Visitor>
void for_each_set_partition(Bundle s, std::size_t k, Visitor&& visit) {
  if (k == 0) return;
  const std::vector<GoodId> goods = s.goods();
  std::vector<Bundle> blocks(k);
  bool stop = false;
  auto rec = [&](auto&& self, std::size_t t, std::size_t used) -> void {
    if (stop) return;
    if (t == goods.size()) {
      if (!visit(std::span<const Bundle>(blocks))) stop = true;
      return;
    }
    const std::size_t limit = used < k ? used + 1 : k;
    for (std::size_t b = 0; b < limit && !stop; ++b) {
      blocks[b].insert(goods[t]);
      self(self, t + 1, b == used ? used + 1 : used);
      blocks[b].erase(goods[t]);
    }
  };
  rec(rec, 0, 0);
}

}  // namespace mxsefl
