#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "mxsefl/error.hpp"

namespace mxsefl {

using GoodId = std::uint32_t;
using AgentId = std::uint32_t;

/// Largest number of goods a bundle can address.
inline constexpr std::size_t kMaxGoods = 64;

/// A set of goods stored as a 64-bit mask; subset, union and difference are
/// single word operations. Iteration visits members in increasing index order.
class Bundle {
 public:
  constexpr Bundle() = default;
  constexpr explicit Bundle(std::uint64_t mask) : mask_(mask) {}
  Bundle(std::initializer_list<GoodId> goods) {
    for (GoodId g : goods) insert(g);
  }
  explicit Bundle(const std::vector<GoodId>& goods) {
    for (GoodId g : goods) insert(g);
  }

  /// Bundle holding goods 0..m-1.
  static Bundle full(std::size_t m) {
    if (m > kMaxGoods) throw Error(ErrorCode::InstanceTooLarge, "more than 64 goods");
    return Bundle(m == kMaxGoods ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1));
  }
  static constexpr Bundle single(GoodId g) { return Bundle(std::uint64_t{1} << g); }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr bool contains(GoodId g) const { return g < kMaxGoods && ((mask_ >> g) & 1U) != 0; }
  constexpr bool subset_of(Bundle other) const { return (mask_ & ~other.mask_) == 0; }
  constexpr bool disjoint(Bundle other) const { return (mask_ & other.mask_) == 0; }

  void insert(GoodId g) {
    if (g >= kMaxGoods) throw Error(ErrorCode::InstanceTooLarge, "good index beyond 63");
    mask_ |= std::uint64_t{1} << g;
  }
  void erase(GoodId g) {
    if (g < kMaxGoods) mask_ &= ~(std::uint64_t{1} << g);
  }

  constexpr Bundle with(GoodId g) const { return Bundle(mask_ | (std::uint64_t{1} << g)); }
  constexpr Bundle without(GoodId g) const { return Bundle(mask_ & ~(std::uint64_t{1} << g)); }

  friend constexpr Bundle operator|(Bundle a, Bundle b) { return Bundle(a.mask_ | b.mask_); }
  friend constexpr Bundle operator&(Bundle a, Bundle b) { return Bundle(a.mask_ & b.mask_); }
  friend constexpr Bundle operator-(Bundle a, Bundle b) { return Bundle(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(Bundle a, Bundle b) = default;
  friend constexpr auto operator<=>(Bundle a, Bundle b) = default;

  /// Lowest member; undefined for the empty bundle.
  constexpr GoodId front() const { return static_cast<GoodId>(std::countr_zero(mask_)); }

  class iterator {
   public:
    using value_type = GoodId;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr GoodId operator*() const { return static_cast<GoodId>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    friend constexpr bool operator==(iterator a, iterator b) = default;

   private:
    std::uint64_t rest_ = 0;
  };
  constexpr iterator begin() const { return iterator(mask_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<GoodId> goods() const { return {begin(), end()}; }

  /// "{0,2,5}"
  std::string str() const {
    std::string out = "{";
    bool first = true;
    for (GoodId g : *this) {
      if (!first) out += ',';
      out += std::to_string(g);
      first = false;
    }
    return out + "}";
  }

 private:
  std::uint64_t mask_ = 0;
};

}  // namespace mxsefl
