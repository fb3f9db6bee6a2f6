#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace mxsefl {

/// Maximum bipartite matching by augmenting paths (Kuhn). Left vertices are
/// tried in increasing order; each takes its lowest free neighbour if it has
/// one and otherwise augments, exploring right vertices in increasing order.
/// The result is a deterministic function of the edge set.
/// Returns, per left vertex, its matched right vertex.
class BipartiteMatcher {
 public:
  BipartiteMatcher(std::size_t left, std::size_t right)
      : right_(right), adj_(left, std::vector<bool>(right, false)) {}

  void add_edge(std::size_t l, std::size_t r) { adj_[l][r] = true; }
  bool has_edge(std::size_t l, std::size_t r) const { return adj_[l][r]; }

  std::vector<std::optional<std::size_t>> solve() const {
    std::vector<std::optional<std::size_t>> match_right(right_);
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      std::vector<bool> visited(right_, false);
      augment(l, visited, match_right);
    }
    std::vector<std::optional<std::size_t>> match_left(adj_.size());
    for (std::size_t r = 0; r < right_; ++r) {
      if (match_right[r]) match_left[*match_right[r]] = r;
    }
    return match_left;
  }

  /// Whether every left vertex can be matched.
  bool left_perfect() const {
    for (const auto& m : solve()) {
      if (!m) return false;
    }
    return true;
  }

 private:
  bool augment(std::size_t l, std::vector<bool>& visited, std::vector<std::optional<std::size_t>>& match_right) const {
    for (std::size_t r = 0; r < right_; ++r) {
      if (adj_[l][r] && !visited[r] && !match_right[r]) {
        visited[r] = true;
        match_right[r] = l;
        return true;
      }
    }
    for (std::size_t r = 0; r < right_; ++r) {
      if (!adj_[l][r] || visited[r]) continue;
      visited[r] = true;
      if (!match_right[r] || augment(*match_right[r], visited, match_right)) {
        match_right[r] = l;
        return true;
      }
    }
    return false;
  }

  std::size_t right_;
  std::vector<std::vector<bool>> adj_;
};

}  // namespace mxsefl
