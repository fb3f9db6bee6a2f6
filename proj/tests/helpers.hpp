#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

#include "mxsefl/mxsefl.hpp"

namespace mxsefl::testing {

inline std::vector<Rational> ints(std::initializer_list<std::int64_t> xs) { return {xs.begin(), xs.end()}; }

inline Instance additive(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  std::vector<Valuation> vals;
  std::size_t m = 0;
  for (auto row : rows) {
    m = row.size();
    vals.push_back(Valuation::additive(ints(row)));
  }
  return Instance(m, std::move(vals));
}

inline Partition part(std::initializer_list<Bundle> bundles) { return Partition(std::vector<Bundle>(bundles)); }

inline AssociationFunction assoc(std::initializer_list<int> agents) {
  std::vector<std::optional<AgentId>> raw;
  for (int a : agents) raw.push_back(a < 0 ? std::nullopt : std::optional<AgentId>(static_cast<AgentId>(a)));
  return AssociationFunction(std::move(raw));
}

inline constexpr int kFree = -1;

/// Calls visit(instance) for every n-agent additive instance over m goods with
/// values drawn from {0, ..., max_value}.
inline void for_each_small_additive(std::size_t n, std::size_t m, std::int64_t max_value,
                                    const std::function<void(const Instance&)>& visit) {
  const std::size_t cells = n * m;
  std::vector<std::int64_t> digits(cells, 0);
  while (true) {
    std::vector<Valuation> vals;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> row;
      for (std::size_t g = 0; g < m; ++g) row.emplace_back(digits[i * m + g]);
      vals.push_back(Valuation::additive(std::move(row)));
    }
    visit(Instance(m, std::move(vals)));
    std::size_t t = 0;
    for (; t < cells; ++t) {
      if (++digits[t] <= max_value) break;
      digits[t] = 0;
    }
    if (t == cells) return;
  }
}

/// Every labeled k-partition of m goods.
inline std::vector<Partition> all_partitions(std::size_t m, std::size_t k) {
  std::vector<Partition> out;
  oracle::LabeledPartitions(Bundle::full(m), k).for_each([&](const std::vector<Bundle>& ys) {
    out.emplace_back(ys);
    return true;
  });
  return out;
}

}  // namespace mxsefl::testing
