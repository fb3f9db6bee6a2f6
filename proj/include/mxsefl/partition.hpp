#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mxsefl/bundle.hpp"
#include "mxsefl/error.hpp"

namespace mxsefl {

/// Ordered list of pairwise-disjoint bundles covering goods 0..m-1. Empty
/// bundles are allowed.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<Bundle> bundles) : bundles_(std::move(bundles)) {}

  /// Validates disjointness and coverage against m goods.
  static Partition checked(std::vector<Bundle> bundles, std::size_t m) {
    Bundle seen;
    for (Bundle b : bundles) {
      if (!b.disjoint(seen)) throw Error(ErrorCode::InvalidSpec, "partition bundles overlap");
      seen = seen | b;
    }
    if (seen != Bundle::full(m)) throw Error(ErrorCode::InvalidSpec, "partition does not cover all goods");
    return Partition(std::move(bundles));
  }

  std::size_t size() const { return bundles_.size(); }
  const Bundle& operator[](std::size_t l) const { return bundles_[l]; }
  Bundle& operator[](std::size_t l) { return bundles_[l]; }
  const std::vector<Bundle>& bundles() const { return bundles_; }
  auto begin() const { return bundles_.begin(); }
  auto end() const { return bundles_.end(); }

  void push_back(Bundle b) { bundles_.push_back(b); }

  /// Copy with good g moved from bundle `from` to bundle `to`.
  Partition moved(GoodId g, std::size_t from, std::size_t to) const {
    Partition out = *this;
    out.bundles_[from].erase(g);
    out.bundles_[to].insert(g);
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

  std::string str() const {
    std::string out = "(";
    for (std::size_t l = 0; l < bundles_.size(); ++l) {
      if (l) out += ", ";
      out += bundles_[l].str();
    }
    return out + ")";
  }

 private:
  std::vector<Bundle> bundles_;
};

/// Map from bundle index to an agent or to "free"; injective on its support.
class AssociationFunction {
 public:
  AssociationFunction() = default;
  explicit AssociationFunction(std::size_t k) : assoc_(k) {}
  explicit AssociationFunction(std::vector<std::optional<AgentId>> assoc) : assoc_(std::move(assoc)) {
    for (std::size_t a = 0; a < assoc_.size(); ++a) {
      for (std::size_t b = a + 1; b < assoc_.size(); ++b) {
        if (assoc_[a] && assoc_[a] == assoc_[b]) {
          throw Error(ErrorCode::InvalidSpec, "agent " + std::to_string(*assoc_[a]) +
                                                  " associated with two bundles");
        }
      }
    }
  }

  std::size_t size() const { return assoc_.size(); }
  const std::optional<AgentId>& operator[](std::size_t l) const { return assoc_[l]; }
  bool is_free(std::size_t l) const { return !assoc_[l].has_value(); }

  /// Associates bundle l with agent i, detaching i from any other bundle.
  void assign(std::size_t l, AgentId i) {
    for (auto& a : assoc_) {
      if (a == i) a.reset();
    }
    assoc_[l] = i;
  }
  void release(std::size_t l) { assoc_[l].reset(); }
  void set(std::size_t l, std::optional<AgentId> a) { assoc_[l] = a; }
  void push_free() { assoc_.emplace_back(); }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < assoc_.size(); ++l) {
      if (assoc_[l]) out.push_back(l);
    }
    return out;
  }
  std::vector<AgentId> image() const {
    std::vector<AgentId> out;
    for (const auto& a : assoc_) {
      if (a) out.push_back(*a);
    }
    return out;
  }
  bool holds(AgentId i) const {
    for (const auto& a : assoc_) {
      if (a == i) return true;
    }
    return false;
  }
  std::optional<std::size_t> bundle_of(AgentId i) const {
    for (std::size_t l = 0; l < assoc_.size(); ++l) {
      if (assoc_[l] == i) return l;
    }
    return std::nullopt;
  }
  bool full() const {
    for (const auto& a : assoc_) {
      if (!a) return false;
    }
    return true;
  }
  bool injective() const {
    for (std::size_t a = 0; a < assoc_.size(); ++a) {
      for (std::size_t b = a + 1; b < assoc_.size(); ++b) {
        if (assoc_[a] && assoc_[a] == assoc_[b]) return false;
      }
    }
    return true;
  }
  const std::vector<std::optional<AgentId>>& raw() const { return assoc_; }

  friend bool operator==(const AssociationFunction&, const AssociationFunction&) = default;

  std::string str() const {
    std::string out = "(";
    for (std::size_t l = 0; l < assoc_.size(); ++l) {
      if (l) out += ", ";
      out += assoc_[l] ? std::to_string(*assoc_[l]) : std::string("free");
    }
    return out + ")";
  }

 private:
  std::vector<std::optional<AgentId>> assoc_;
};

struct Allocation {
  Partition partition;
  AssociationFunction assoc;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

}  // namespace mxsefl
