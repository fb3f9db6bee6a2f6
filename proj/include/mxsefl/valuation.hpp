#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mxsefl/bundle.hpp"
#include "mxsefl/error.hpp"
#include "mxsefl/rational.hpp"

namespace mxsefl {

enum class ValuationKind { Additive, BudgetAdditive, UnitDemand, Multiplicative, Table };

constexpr std::string_view to_string(ValuationKind kind) {
  switch (kind) {
    case ValuationKind::Additive: return "additive";
    case ValuationKind::BudgetAdditive: return "budget_additive";
    case ValuationKind::UnitDemand: return "unit_demand";
    case ValuationKind::Multiplicative: return "multiplicative";
    case ValuationKind::Table: return "table";
  }
  return "unknown";
}

inline ValuationKind parse_valuation_kind(std::string_view name) {
  if (name == "additive") return ValuationKind::Additive;
  if (name == "budget_additive" || name == "budget") return ValuationKind::BudgetAdditive;
  if (name == "unit_demand" || name == "unit") return ValuationKind::UnitDemand;
  if (name == "multiplicative" || name == "mult") return ValuationKind::Multiplicative;
  if (name == "table") return ValuationKind::Table;
  throw Error(ErrorCode::ParseError, "unknown valuation kind '" + std::string(name) + "'");
}

/// A monotone set function over goods 0..m-1 with exact rational values.
///
/// Closed-form kinds keep one value per good. Table valuations keep an explicit
/// (possibly partial) map from bundle to value; a lookup of a missing bundle
/// raises MissingTableEntry. All invariants are validated on construction and
/// the object is immutable afterwards.
class Valuation {
 public:
  static Valuation additive(std::vector<Rational> values) {
    const std::size_t m = values.size();
    return Valuation(ValuationKind::Additive, m, std::move(values), 0, {});
  }
  static Valuation budget_additive(std::vector<Rational> values, Rational budget) {
    const std::size_t m = values.size();
    return Valuation(ValuationKind::BudgetAdditive, m, std::move(values), budget, {});
  }
  static Valuation unit_demand(std::vector<Rational> values) {
    const std::size_t m = values.size();
    return Valuation(ValuationKind::UnitDemand, m, std::move(values), 0, {});
  }
  static Valuation multiplicative(std::vector<Rational> values) {
    const std::size_t m = values.size();
    return Valuation(ValuationKind::Multiplicative, m, std::move(values), 0, {});
  }
  static Valuation table(std::size_t m, std::map<std::uint64_t, Rational> entries) {
    return Valuation(ValuationKind::Table, m, {}, 0, std::move(entries));
  }

  ValuationKind kind() const { return kind_; }
  std::size_t goods() const { return m_; }
  const std::vector<Rational>& per_good() const { return values_; }
  const Rational& budget() const { return budget_; }
  const std::map<std::uint64_t, Rational>& entries() const { return table_; }
  bool table_complete() const {
    return kind_ != ValuationKind::Table || table_.size() == (std::size_t{1} << m_);
  }

  Rational value(Bundle s) const {
    if (!s.subset_of(Bundle::full(m_))) {
      throw Error(ErrorCode::DimensionMismatch, "bundle " + s.str() + " outside goods");
    }
    switch (kind_) {
      case ValuationKind::Additive: {
        Rational sum;
        for (GoodId g : s) sum += values_[g];
        return sum;
      }
      case ValuationKind::BudgetAdditive: {
        Rational sum;
        for (GoodId g : s) sum += values_[g];
        return sum < budget_ ? sum : budget_;
      }
      case ValuationKind::UnitDemand: {
        Rational best;
        for (GoodId g : s) {
          if (best < values_[g]) best = values_[g];
        }
        return best;
      }
      case ValuationKind::Multiplicative: {
        Rational product(1);
        for (GoodId g : s) product *= values_[g];
        return product;
      }
      case ValuationKind::Table: {
        auto it = table_.find(s.mask());
        if (it == table_.end()) {
          throw Error(ErrorCode::MissingTableEntry, "no table entry for " + s.str());
        }
        return it->second;
      }
    }
    return {};
  }

 private:
  Valuation(ValuationKind kind, std::size_t m, std::vector<Rational> values, Rational budget,
            std::map<std::uint64_t, Rational> table)
      : kind_(kind), m_(m), values_(std::move(values)), budget_(budget), table_(std::move(table)) {
    validate();
  }

  void validate() const {
    if (m_ > kMaxGoods) throw Error(ErrorCode::InstanceTooLarge, "more than 64 goods");
    const Rational floor = kind_ == ValuationKind::Multiplicative ? Rational(1) : Rational(0);
    for (const Rational& v : values_) {
      if (v < floor) {
        throw Error(ErrorCode::InvalidValuation,
                    std::string(to_string(kind_)) + " good value " + v.str() + " below " + floor.str());
      }
    }
    if (kind_ == ValuationKind::BudgetAdditive && budget_ <= Rational(0)) {
      throw Error(ErrorCode::InvalidValuation, "budget must be positive");
    }
    if (kind_ != ValuationKind::Table) return;

    const Bundle all = Bundle::full(m_);
    for (const auto& [mask, v] : table_) {
      if (!Bundle(mask).subset_of(all)) {
        throw Error(ErrorCode::InvalidValuation, "table entry outside goods");
      }
      if (v < Rational(0)) throw Error(ErrorCode::InvalidValuation, "negative table value");
    }
    if (table_complete()) {
      // Complete tables: checking single-good removals is equivalent to full monotonicity.
      for (const auto& [mask, v] : table_) {
        for (GoodId g : Bundle(mask)) {
          if (table_.at(mask & ~(std::uint64_t{1} << g)) > v) {
            throw Error(ErrorCode::InvalidValuation, "table is not monotone at " + Bundle(mask).str());
          }
        }
      }
      return;
    }
    for (const auto& [small, vs] : table_) {
      for (const auto& [large, vl] : table_) {
        if (Bundle(small).subset_of(Bundle(large)) && vs > vl) {
          throw Error(ErrorCode::InvalidValuation, "table is not monotone: " + Bundle(small).str() +
                                                       " exceeds " + Bundle(large).str());
        }
      }
    }
  }

  ValuationKind kind_;
  std::size_t m_;
  std::vector<Rational> values_;
  Rational budget_;
  std::map<std::uint64_t, Rational> table_;
};

/// Goods 0..m-1, agents 0..n-1, one valuation per agent.
///
/// For m <= kTabulatedGoods every agent's valuation is tabulated over all 2^m
/// bundles at construction, so value() is a table lookup on the hot paths of
/// share enumeration.
class Instance {
 public:
  static constexpr std::size_t kTabulatedGoods = 16;

  Instance(std::size_t m, std::vector<Valuation> valuations)
      : m_(m), valuations_(std::move(valuations)) {
    if (valuations_.empty()) throw Error(ErrorCode::InvalidSpec, "an instance needs at least one agent");
    if (m_ > kMaxGoods) throw Error(ErrorCode::InstanceTooLarge, "more than 64 goods");
    for (const Valuation& v : valuations_) {
      if (v.goods() != m_) {
        throw Error(ErrorCode::DimensionMismatch, "valuation defined over " + std::to_string(v.goods()) +
                                                      " goods, instance has " + std::to_string(m_));
      }
    }
    if (m_ <= kTabulatedGoods) {
      auto tables = std::make_shared<std::vector<std::vector<Rational>>>();
      tables->reserve(valuations_.size());
      for (const Valuation& v : valuations_) {
        if (!v.table_complete()) {
          tables.reset();
          break;
        }
        std::vector<Rational> row(std::size_t{1} << m_);
        for (std::uint64_t mask = 0; mask < row.size(); ++mask) row[mask] = v.value(Bundle(mask));
        tables->push_back(std::move(row));
      }
      tables_ = std::move(tables);
    }
  }

  std::size_t agents() const { return valuations_.size(); }
  std::size_t goods() const { return m_; }
  Bundle all_goods() const { return Bundle::full(m_); }
  const Valuation& valuation(AgentId i) const { return valuations_.at(i); }
  const std::vector<Valuation>& valuations() const { return valuations_; }

  Rational value(AgentId i, Bundle s) const {
    if (tables_) {
      if (!s.subset_of(all_goods())) {
        throw Error(ErrorCode::DimensionMismatch, "bundle " + s.str() + " outside goods");
      }
      return (*tables_)[i][s.mask()];
    }
    return valuations_.at(i).value(s);
  }

 private:
  std::size_t m_;
  std::vector<Valuation> valuations_;
  std::shared_ptr<const std::vector<std::vector<Rational>>> tables_;
};

}  // namespace mxsefl
