#pragma once

// Synthetic k-regular graphs and the two controlled perturbations used by
// the sparsification simulations: label flips and degree-preserving
// double-edge swaps. Every function is a pure function of its arguments.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "glod/graph.hpp"

namespace glod {

using Rng = std::mt19937_64;

inline constexpr int kRegularMaxAttempts = 10'000;
inline constexpr int kRewireMaxFailures = 1'000;

namespace detail {

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// One pairing-model attempt that never creates a loop or multi-edge.
/// Points are matched one pair at a time, only among admissible pairs; an
/// attempt fails (returns false) when the remaining points admit no pair.
inline bool try_pairing(std::size_t n, std::size_t k, Rng& rng, std::vector<Edge>& edges) {
  std::vector<NodeId> points;
  points.reserve(n * k);
  for (NodeId v = 0; v < n; ++v) points.insert(points.end(), k, v);
  std::vector<std::set<NodeId>> adj(n);
  edges.clear();

  const auto admissible = [&](NodeId a, NodeId b) { return a != b && !adj[a].count(b); };
  const auto take = [&](std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);  // remove the larger index first
    const NodeId a = points[i];
    const NodeId b = points[j];
    points[i] = points.back();
    points.pop_back();
    points[j] = points.back();
    points.pop_back();
    adj[a].insert(b);
    adj[b].insert(a);
    edges.emplace_back(std::min(a, b), std::max(a, b));
  };

  while (!points.empty()) {
    bool paired = false;
    for (int trial = 0; trial < 64 && !paired; ++trial) {
      const auto i = uniform_index(rng, points.size());
      const auto j = uniform_index(rng, points.size());
      if (i != j && admissible(points[i], points[j])) {
        take(i, j);
        paired = true;
      }
    }
    if (paired) continue;
    // Random probing failed: enumerate the admissible pairs that remain.
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        if (admissible(points[i], points[j])) candidates.emplace_back(i, j);
      }
    }
    if (candidates.empty()) return false;
    const auto [i, j] = candidates[uniform_index(rng, candidates.size())];
    take(i, j);
  }
  return true;
}

inline Graph complement(const Graph& g) {
  std::vector<Edge> edges;
  const auto n = static_cast<NodeId>(g.node_count());
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (!g.has_edge(u, v)) edges.emplace_back(u, v);
    }
  }
  return Graph(n, std::move(edges), g.labels());
}

}  // namespace detail

/// Random simple k-regular graph on n nodes, all labeled 0.
///
/// Pairing model with admissibility-constrained matching and full restart
/// on dead ends (at most kRegularMaxAttempts restarts). For k > (n-1)/2 the
/// complement of an (n-1-k)-regular graph is returned instead, so dense
/// cases such as k = n-1 are exact.
inline Graph generate_k_regular(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k >= n) {
    throw ParameterError("k-regular graph needs k < n (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
  }
  if ((n * k) % 2 != 0) {
    throw ParameterError("n*k must be even (n=" + std::to_string(n) +
                         ", k=" + std::to_string(k) + ")");
  }
  if (2 * k > n - 1) {
    return detail::complement(generate_k_regular(n, n - 1 - k, seed));
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int attempt = 0; attempt < kRegularMaxAttempts; ++attempt) {
    if (detail::try_pairing(n, k, rng, edges)) {
      return Graph(n, std::move(edges), std::vector<LabelId>(n, 0));
    }
  }
  throw GenerationError("k-regular generation exceeded " +
                        std::to_string(kRegularMaxAttempts) + " attempts");
}

/// Relabels exactly m uniformly chosen nodes carrying `from` to `to`.
inline Graph flip_labels(const Graph& g, std::size_t m, LabelId from, LabelId to,
                         std::uint64_t seed) {
  std::vector<NodeId> candidates;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.label(v) == from) candidates.push_back(v);
  }
  if (candidates.size() < m) {
    throw ParameterError("cannot flip " + std::to_string(m) + " labels: only " +
                         std::to_string(candidates.size()) + " candidates");
  }
  Rng rng(seed);
  // Partial Fisher-Yates: the first m entries are a uniform m-subset.
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + detail::uniform_index(rng, candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
  }
  auto labels = g.labels();
  for (std::size_t i = 0; i < m; ++i) labels[candidates[i]] = to;
  return g.with_labels(std::move(labels));
}

/// Applies r successful double-edge swaps: (a,b),(c,d) -> (a,d),(c,b).
///
/// The second edge is oriented at random so both swap patterns are
/// reachable. Draws with shared endpoints or that would create an existing
/// edge are rejected and re-drawn; more than kRewireMaxFailures consecutive
/// rejections raise GenerationError.
inline Graph rewire_edges(const Graph& g, std::size_t r, std::uint64_t seed) {
  if (r == 0) return g;
  if (g.edge_count() < 2) throw ParameterError("rewiring needs at least 2 edges");
  Rng rng(seed);
  std::vector<Edge> edges = g.edges();
  std::set<Edge> present(edges.begin(), edges.end());
  const auto key = [](NodeId x, NodeId y) { return Edge{std::min(x, y), std::max(x, y)}; };

  for (std::size_t done = 0; done < r; ++done) {
    int failures = 0;
    while (true) {
      if (failures >= kRewireMaxFailures) {
        throw GenerationError("rewiring exceeded " + std::to_string(kRewireMaxFailures) +
                              " consecutive failed draws");
      }
      const auto i = detail::uniform_index(rng, edges.size());
      const auto j = detail::uniform_index(rng, edges.size());
      auto [a, b] = edges[i];
      auto [c, d] = edges[j];
      if (std::bernoulli_distribution(0.5)(rng)) std::swap(c, d);
      if (i == j || a == c || a == d || b == c || b == d ||
          present.count(key(a, d)) || present.count(key(c, b))) {
        ++failures;
        continue;
      }
      present.erase(key(a, b));
      present.erase(key(c, d));
      edges[i] = key(a, d);
      edges[j] = key(c, b);
      present.insert(edges[i]);
      present.insert(edges[j]);
      break;
    }
  }
  return Graph(g.node_count(), std::move(edges), g.labels());
}

}  // namespace glod
