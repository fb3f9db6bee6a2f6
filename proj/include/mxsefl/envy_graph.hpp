#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mxsefl/error.hpp"
#include "mxsefl/partition.hpp"
#include "mxsefl/valuation.hpp"

namespace mxsefl {

/// Simple path (q_s, ..., q_1, q_0) stored first-vertex-first; q_0 is the
/// target. A single vertex is a subchain of length zero.
using Subchain = std::vector<std::size_t>;

/// Generalized envy graph on bundle indices: edge (l, z) iff bundle l is
/// associated with an agent who strictly prefers bundle z.
class EnvyGraph {
 public:
  explicit EnvyGraph(std::size_t k) : adj_(k, std::vector<bool>(k, false)) {}

  std::size_t size() const { return adj_.size(); }
  bool has_edge(std::size_t from, std::size_t to) const { return adj_[from][to]; }
  void add_edge(std::size_t from, std::size_t to) { adj_[from][to] = true; }

  std::vector<std::size_t> successors(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t z = 0; z < size(); ++z) {
      if (adj_[v][z]) out.push_back(z);
    }
    return out;
  }
  std::vector<std::size_t> predecessors(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < size(); ++l) {
      if (adj_[l][v]) out.push_back(l);
    }
    return out;
  }
  std::size_t in_degree(std::size_t v) const { return predecessors(v).size(); }
  std::size_t edge_count() const {
    std::size_t count = 0;
    for (const auto& row : adj_) count += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
    return count;
  }

  /// One "l -> z" line per edge, in lexicographic edge order.
  std::string to_edge_list() const {
    std::string out;
    for (std::size_t l = 0; l < size(); ++l) {
      for (std::size_t z = 0; z < size(); ++z) {
        if (adj_[l][z]) out += std::to_string(l) + " -> " + std::to_string(z) + "\n";
      }
    }
    return out;
  }

  friend bool operator==(const EnvyGraph&, const EnvyGraph&) = default;

 private:
  std::vector<std::vector<bool>> adj_;
};

inline EnvyGraph build_envy_graph(const Instance& inst, const Partition& x, const AssociationFunction& f) {
  if (x.size() != f.size()) {
    throw Error(ErrorCode::DimensionMismatch, "partition has " + std::to_string(x.size()) +
                                                  " bundles, association function " + std::to_string(f.size()));
  }
  EnvyGraph g(x.size());
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (!f[l]) continue;
    const AgentId owner = *f[l];
    const Rational own = inst.value(owner, x[l]);
    for (std::size_t z = 0; z < x.size(); ++z) {
      if (z != l && own < inst.value(owner, x[z])) g.add_edge(l, z);
    }
  }
  return g;
}

inline bool is_source(const EnvyGraph& g, std::size_t l) { return g.in_degree(l) == 0; }

namespace detail {

// Vertices that can reach `target` without visiting any vertex in `blocked`.
inline std::vector<bool> reaches(const EnvyGraph& g, std::size_t target, const std::vector<bool>& blocked) {
  std::vector<bool> ok(g.size(), false);
  std::deque<std::size_t> queue{target};
  ok[target] = true;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t u : g.predecessors(v)) {
      if (!ok[u] && !blocked[u]) {
        ok[u] = true;
        queue.push_back(u);
      }
    }
  }
  return ok;
}

}  // namespace detail

/// Lexicographically smallest directed cycle, listed from its smallest vertex
/// along the edge direction, or nullopt if the graph is acyclic.
inline std::optional<std::vector<std::size_t>> find_cycle(const EnvyGraph& g) {
  const std::size_t k = g.size();
  for (std::size_t start = 0; start < k; ++start) {
    std::vector<bool> blocked(k, false);
    for (std::size_t v = 0; v < start; ++v) blocked[v] = true;
    bool on_cycle = false;
    {
      auto back = detail::reaches(g, start, blocked);
      for (std::size_t z : g.successors(start)) {
        if (z >= start && back[z]) on_cycle = true;
      }
    }
    if (!on_cycle) continue;

    // `start` is the smallest vertex on any cycle, so every cycle through it
    // uses vertices >= start. Greedy smallest-successor walk yields the
    // lexicographically smallest cycle.
    std::vector<std::size_t> cycle{start};
    std::vector<bool> on_path = blocked;
    on_path[start] = true;
    std::size_t cur = start;
    while (true) {
      if (g.has_edge(cur, start) && cycle.size() > 1) return cycle;
      auto back = detail::reaches(g, start, on_path);
      std::optional<std::size_t> next;
      for (std::size_t z : g.successors(cur)) {
        if (z == start) continue;
        if (!on_path[z] && back[z]) {
          next = z;
          break;
        }
      }
      if (!next) {
        throw Error(ErrorCode::InvariantViolation, "cycle walk lost its way");
      }
      cycle.push_back(*next);
      on_path[*next] = true;
      cur = *next;
    }
  }
  return std::nullopt;
}

inline bool is_acyclic(const EnvyGraph& g) { return !find_cycle(g).has_value(); }

/// Default tripwire for eliminate_cycles: n * k * 2^m, saturated at 10^7.
inline std::size_t default_cycle_cap(std::size_t n, std::size_t k, std::size_t m) {
  constexpr std::size_t limit = 10'000'000;
  std::size_t cap = std::max<std::size_t>(1, n) * std::max<std::size_t>(1, k);
  for (std::size_t g = 0; g < m && cap < limit; ++g) cap *= 2;
  return std::min(cap, limit);
}

/// Rotates envy cycles one at a time until the graph is acyclic. Each rotation
/// hands every bundle on the cycle to the agent who envied it. Rotated cycles
/// are appended to `rotated` when given.
inline AssociationFunction eliminate_cycles(const Instance& inst, const Partition& x, AssociationFunction f,
                                            std::vector<std::vector<std::size_t>>* rotated = nullptr,
                                            std::size_t cap = 0) {
  if (cap == 0) cap = default_cycle_cap(inst.agents(), x.size(), inst.goods());
  for (std::size_t iter = 0;; ++iter) {
    auto cycle = find_cycle(build_envy_graph(inst, x, f));
    if (!cycle) return f;
    if (iter >= cap) {
      throw Error(ErrorCode::IterationCapExceeded, "eliminate_cycles exceeded " + std::to_string(cap) + " rotations");
    }
    const auto& c = *cycle;
    AssociationFunction next = f;
    for (std::size_t t = 0; t < c.size(); ++t) next.set(c[(t + 1) % c.size()], f[c[t]]);
    f = std::move(next);
    if (rotated) rotated->push_back(c);
  }
}

/// All chains (source-anchored simple paths) ending at t, sorted
/// lexicographically. Raises CyclicGraph if a cycle can reach t.
inline std::vector<Subchain> chains_to(const Instance& inst, const Partition& x, const AssociationFunction& f,
                                       std::size_t t) {
  const EnvyGraph g = build_envy_graph(inst, x, f);
  if (t >= g.size()) throw Error(ErrorCode::DimensionMismatch, "target bundle out of range");
  std::vector<Subchain> out;
  std::vector<std::size_t> path{t};  // built backwards: t, q_1, ..., q_s
  std::vector<bool> on_path(g.size(), false);
  on_path[t] = true;

  auto dfs = [&](auto&& self, std::size_t v) -> void {
    auto preds = g.predecessors(v);
    if (preds.empty()) out.emplace_back(path.rbegin(), path.rend());
    for (std::size_t u : preds) {
      if (on_path[u]) throw Error(ErrorCode::CyclicGraph, "cycle through bundle " + std::to_string(u));
      on_path[u] = true;
      path.push_back(u);
      self(self, u);
      path.pop_back();
      on_path[u] = false;
    }
  };
  dfs(dfs, t);
  std::sort(out.begin(), out.end());
  return out;
}

/// Shortest chain ending at t; among shortest, the lexicographically smallest
/// index sequence. Works on the part of the graph that reaches t, so cycles
/// elsewhere are harmless; raises CyclicGraph only if no chain exists.
inline Subchain any_chain_to(const Instance& inst, const Partition& x, const AssociationFunction& f,
                             std::size_t t) {
  const EnvyGraph g = build_envy_graph(inst, x, f);
  if (t >= g.size()) throw Error(ErrorCode::DimensionMismatch, "target bundle out of range");
  constexpr std::size_t unreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.size(), unreached);
  std::deque<std::size_t> queue{t};
  dist[t] = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t u : g.predecessors(v)) {
      if (dist[u] == unreached) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  std::optional<std::size_t> first;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (dist[v] != unreached && is_source(g, v) && (!first || dist[v] < dist[*first])) first = v;
  }
  if (!first) throw Error(ErrorCode::CyclicGraph, "no chain reaches bundle " + std::to_string(t));
  Subchain chain{*first};
  for (std::size_t v = *first; v != t;) {
    for (std::size_t z : g.successors(v)) {
      if (dist[z] == dist[v] - 1) {
        v = z;
        break;
      }
    }
    chain.push_back(v);
  }
  return chain;
}

/// Moves every agent on c one step towards the target: the agent at q_{l+1}
/// takes q_l, the first bundle q_s becomes free, and the agent formerly at q_0
/// (if any) is freed.
inline AssociationFunction shift_subchain(AssociationFunction f, const Subchain& c) {
  if (c.empty()) throw Error(ErrorCode::EmptyCollection, "empty subchain");
  for (std::size_t idx : c) {
    if (idx >= f.size()) throw Error(ErrorCode::DimensionMismatch, "subchain vertex out of range");
  }
  for (std::size_t pos = 0; pos + 1 < c.size(); ++pos) {
    if (f.is_free(c[pos])) {
      throw Error(ErrorCode::FreeInteriorVertex, "bundle " + std::to_string(c[pos]) + " on the subchain is free");
    }
  }
  // c = (q_s, ..., q_0); walk from the target backwards.
  for (std::size_t pos = c.size() - 1; pos > 0; --pos) f.set(c[pos], f[c[pos - 1]]);
  f.release(c.front());
  return f;
}

}  // namespace mxsefl
