#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mxsefl/bundle.hpp"
#include "mxsefl/error.hpp"
#include "mxsefl/rational.hpp"
#include "mxsefl/valuation.hpp"

namespace mxsefl {

/// Parameters of a random instance. Every number is drawn as
/// lo + (raw % (hi - lo + 1)) from std::mt19937_64 seeded with `seed`, where raw
/// is the engine's next 64-bit output. Draw order: agent by agent, good by
/// good, then the agent's budget (budget-additive only).
///
/// With denominator d > 1, numerators are drawn from [lo*d, hi*d] and divided
/// by d, so values land on a 1/d grid.
///
/// Table instances draw, for each bundle in increasing mask order, a value in
/// [lo, hi * |S|] and raise it to the largest value of its one-good-smaller
/// subsets, which keeps the table monotone. Such tables need not be
/// restricted-MMS-feasible.
struct GeneratorSpec {
  std::size_t n = 2;
  std::size_t m = 4;
  ValuationKind kind = ValuationKind::Additive;
  std::int64_t lo = 0;
  std::int64_t hi = 8;
  std::int64_t budget_lo = 1;
  std::int64_t budget_hi = 8;
  std::uint64_t seed = 0;
  std::int64_t denominator = 1;

  void validate() const {
    if (n < 1) throw Error(ErrorCode::InvalidSpec, "n must be at least 1");
    if (m > kMaxGoods) throw Error(ErrorCode::InvalidSpec, "m must be at most 64");
    if (kind == ValuationKind::Table && m > 16) throw Error(ErrorCode::InvalidSpec, "table instances need m <= 16");
    if (lo < 0 || hi < lo) throw Error(ErrorCode::InvalidSpec, "value range must satisfy 0 <= lo <= hi");
    if (kind == ValuationKind::Multiplicative && lo < 1) {
      throw Error(ErrorCode::InvalidSpec, "multiplicative values need a lower bound of at least 1");
    }
    if (kind == ValuationKind::BudgetAdditive && (budget_lo < 1 || budget_hi < budget_lo)) {
      throw Error(ErrorCode::InvalidSpec, "budget range must satisfy 1 <= lo <= hi");
    }
    if (denominator < 1) throw Error(ErrorCode::InvalidSpec, "denominator must be positive");
  }
};

namespace detail {

inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

}  // namespace detail

inline Instance generate(const GeneratorSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const std::int64_t d = spec.denominator;
  auto value = [&](std::int64_t lo, std::int64_t hi) {
    if (d == 1) return Rational(detail::draw(rng, lo, hi));
    return Rational(detail::draw(rng, lo * d, hi * d), d);
  };

  std::vector<Valuation> vals;
  vals.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (spec.kind == ValuationKind::Table) {
      std::map<std::uint64_t, Rational> table;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << spec.m); ++mask) {
        const Bundle s(mask);
        Rational v = s.empty() ? Rational(0) : value(spec.lo, spec.hi * static_cast<std::int64_t>(s.size()));
        for (GoodId g : s) v = std::max(v, table.at(s.without(g).mask()));
        table.emplace(mask, v);
      }
      vals.push_back(Valuation::table(spec.m, std::move(table)));
      continue;
    }
    std::vector<Rational> goods;
    goods.reserve(spec.m);
    for (std::size_t g = 0; g < spec.m; ++g) goods.push_back(value(spec.lo, spec.hi));
    switch (spec.kind) {
      case ValuationKind::Additive: vals.push_back(Valuation::additive(std::move(goods))); break;
      case ValuationKind::BudgetAdditive:
        vals.push_back(Valuation::budget_additive(std::move(goods), value(spec.budget_lo, spec.budget_hi)));
        break;
      case ValuationKind::UnitDemand: vals.push_back(Valuation::unit_demand(std::move(goods))); break;
      case ValuationKind::Multiplicative: vals.push_back(Valuation::multiplicative(std::move(goods))); break;
      case ValuationKind::Table: break;
    }
  }
  return Instance(spec.m, std::move(vals));
}

struct CorpusEntry {
  std::string name;
  std::string intent;
  Instance instance;
};

namespace detail {

inline std::vector<Rational> ints(std::initializer_list<std::int64_t> xs) { return {xs.begin(), xs.end()}; }

inline Instance additive(std::size_t m, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  std::vector<Valuation> vals;
  for (auto row : rows) vals.push_back(Valuation::additive(ints(row)));
  return Instance(m, std::move(vals));
}

inline Instance identical_additive(std::size_t n, std::initializer_list<std::int64_t> row) {
  std::vector<Valuation> vals(n, Valuation::additive(ints(row)));
  return Instance(row.size(), std::move(vals));
}

}  // namespace detail

/// Fixed hand-built instances, each with a one-line intent. Golden solver
/// outputs for these live under samples/corpus/.
inline std::vector<CorpusEntry> adversarial_corpus() {
  using detail::additive;
  using detail::ints;
  std::vector<CorpusEntry> out;
  auto add = [&](std::string name, std::string intent, Instance inst) {
    out.push_back({std::move(name), std::move(intent), std::move(inst)});
  };

  add("single_agent", "n = 1: the lone agent keeps every good", additive(3, {{1, 2, 3}}));
  add("no_goods", "m = 0: every bundle is empty and every notion holds vacuously",
      Instance(0, {Valuation::additive({}), Valuation::additive({}), Valuation::additive({})}));
  add("all_zero", "every good is worthless to everyone", additive(4, {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}));
  add("fewer_goods_than_agents", "m < n forces empty bundles in the output",
      additive(2, {{3, 1}, {1, 3}, {2, 2}, {5, 5}}));
  add("identical_three_six", "identical agents, repeated values", detail::identical_additive(3, {3, 3, 2, 2, 1, 1}));
  add("shared_min_findmins", "both agents' least marginal good is good 0, so FindMins returns it twice",
      additive(2, {{1, 5}, {2, 9}}));
  add("distinct_min_findmins", "agents' least marginal goods differ", additive(2, {{2, 5}, {3, 1}}));
  add("two_agent_example", "small two-agent additive instance with opposed tastes", additive(3, {{4, 3, 1}, {1, 2, 5}}));
  add("one_valuable_good", "a single good carries all value for everyone",
      additive(4, {{10, 0, 0, 0}, {10, 0, 0, 0}, {10, 0, 0, 0}}));
  add("all_ones", "all goods and agents tie", detail::identical_additive(3, {1, 1, 1, 1, 1}));
  add("zero_and_heavy", "zero-value goods mixed with two heavy goods", additive(4, {{0, 0, 5, 5}, {0, 0, 5, 5}}));
  add("opposed_three", "each agent values a different third of the goods",
      additive(6, {{4, 4, 0, 0, 1, 1}, {1, 1, 4, 4, 0, 0}, {0, 0, 1, 1, 4, 4}}));
  add("rational_values", "non-integer values exercise exact arithmetic",
      Instance(4, {Valuation::additive({Rational(1, 2), Rational(1, 3), Rational(1, 6), Rational(1)}),
                   Valuation::additive({Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1, 7)})}));
  add("budget_tight", "budget caps bind well below the total value",
      Instance(5, {Valuation::budget_additive(ints({3, 3, 3, 1, 1}), 4),
                   Valuation::budget_additive(ints({1, 2, 3, 4, 5}), 6),
                   Valuation::budget_additive(ints({2, 2, 2, 2, 2}), 3)}));
  add("unit_demand_ties", "unit-demand agents with tied favourite goods",
      Instance(4, {Valuation::unit_demand(ints({5, 5, 1, 0})), Valuation::unit_demand(ints({5, 4, 4, 1})),
                   Valuation::unit_demand(ints({1, 5, 5, 5}))}));
  add("multiplicative_pair", "multiplicative agents (values >= 1)",
      Instance(4, {Valuation::multiplicative(ints({2, 3, 1, 4})), Valuation::multiplicative(ints({4, 1, 2, 2}))}));
  add("mixed_kinds", "one agent of each closed-form kind",
      Instance(4, {Valuation::additive(ints({3, 1, 2, 2})), Valuation::budget_additive(ints({2, 2, 3, 1}), 4),
                   Valuation::unit_demand(ints({1, 4, 2, 3}))}));
  {
    std::map<std::uint64_t, Rational> a, b;
    const std::int64_t wa[3] = {2, 1, 3};
    const std::int64_t wb[3] = {1, 3, 1};
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
      std::int64_t sa = 0, sb = 0;
      for (GoodId g : Bundle(mask)) {
        sa += wa[g];
        sb += wb[g];
      }
      a.emplace(mask, sa);
      b.emplace(mask, std::min<std::int64_t>(sb, 4));
    }
    add("table_valuations", "explicit tables equal to additive and capped-additive functions",
        Instance(3, {Valuation::table(3, a), Valuation::table(3, b)}));
  }
  add("four_agents_seven_goods", "largest desk-scale shape used by the acceptance campaign",
      additive(7, {{8, 1, 3, 0, 5, 2, 7}, {2, 6, 6, 1, 0, 4, 3}, {5, 5, 1, 7, 2, 0, 4}, {1, 3, 8, 2, 6, 5, 0}}));
  add("single_good_many_agents", "one good, three agents: two bundles stay empty",
      additive(1, {{1}, {2}, {3}}));
  add("phase2_three_agents", "three agents; the k = 3 rebalance runs two phase-2 iterations",
      additive(6, {{8, 6, 1, 6, 5, 8}, {6, 8, 0, 5, 7, 6}, {7, 7, 4, 2, 7, 7}}));
  add("phase2_two_agents", "two agents; phase 2 moves p on its first iteration without raising v_j(E)",
      additive(4, {{3, 6, 3, 7}, {1, 4, 3, 6}}));
  return out;
}

}  // namespace mxsefl
