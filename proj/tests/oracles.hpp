#pragma once

// Independent reference computations for the tests. Nothing in here calls
// into the code path it is used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "glod/graph.hpp"

namespace oracle {

/// Plain LOF from the definition: full sorts, no shared neighborhood cache.
inline double k_distance(const Eigen::MatrixXd& d, std::size_t a, std::size_t k) {
  std::vector<double> others;
  for (Eigen::Index b = 0; b < d.rows(); ++b) {
    if (static_cast<std::size_t>(b) != a) others.push_back(d(static_cast<Eigen::Index>(a), b));
  }
  std::sort(others.begin(), others.end());
  return others[k - 1];
}

inline std::vector<std::size_t> k_neighbors(const Eigen::MatrixXd& d, std::size_t a, std::size_t k) {
  const double kd = k_distance(d, a, k);
  std::vector<std::size_t> out;
  for (Eigen::Index b = 0; b < d.rows(); ++b) {
    if (static_cast<std::size_t>(b) != a && d(static_cast<Eigen::Index>(a), b) <= kd) out.push_back(static_cast<std::size_t>(b));
  }
  return out;
}

inline double lrd(const Eigen::MatrixXd& d, std::size_t a, std::size_t k) {
  const auto nb = k_neighbors(d, a, k);
  double total = 0.0;
  for (auto b : nb) total += std::max(k_distance(d, b, k), d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
  return 1.0 / std::max(total / static_cast<double>(nb.size()), 1e-10);
}

inline std::vector<double> lof(const Eigen::MatrixXd& d, std::size_t k) {
  std::vector<double> out;
  for (Eigen::Index a = 0; a < d.rows(); ++a) {
    const auto nb = k_neighbors(d, static_cast<std::size_t>(a), k);
    double total = 0.0;
    for (auto b : nb) total += lrd(d, b, k);
    out.push_back(total / static_cast<double>(nb.size()) / lrd(d, static_cast<std::size_t>(a), k));
  }
  return out;
}

/// Effective resistance of a connected graph via (L + J/n)^-1 - J/n.
inline Eigen::MatrixXd effective_resistance(const glod::Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : g.edges()) {
    lap(u, u) += 1;
    lap(v, v) += 1;
    lap(u, v) -= 1;
    lap(v, u) -= 1;
  }
  const Eigen::MatrixXd j = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd pinv = Eigen::FullPivLU<Eigen::MatrixXd>(lap + j).inverse() - j;
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) r(x, y) = pinv(x, x) + pinv(y, y) - 2 * pinv(x, y);
  }
  return r;
}

/// Exact solution of the nu-one-class dual by enumerating every
/// assignment of {at 0, at C, free} and solving the KKT system.
struct QpSolution {
  Eigen::VectorXd alpha;
  double objective = std::numeric_limits<double>::infinity();
};

inline QpSolution ocsvm_active_set(const Eigen::MatrixXd& k, double c) {
  const auto n = k.rows();
  QpSolution best;
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 = zero, 1 = at C, 2 = free
  long total = 1;
  for (Eigen::Index i = 0; i < n; ++i) total *= 3;
  constexpr double eps = 1e-10;
  for (long code = 0; code < total; ++code) {
    long rest = code;
    std::vector<Eigen::Index> free;
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      state[static_cast<std::size_t>(i)] = static_cast<int>(rest % 3);
      rest /= 3;
      if (state[static_cast<std::size_t>(i)] == 1) alpha(i) = c;
      if (state[static_cast<std::size_t>(i)] == 2) free.push_back(i);
    }
    const double bound_mass = alpha.sum();
    const auto f = static_cast<Eigen::Index>(free.size());
    double rho = 0.0;
    if (f == 0) {
      if (std::abs(bound_mass - 1.0) > eps) continue;
    } else {
      // [K_FF  -1][a_F]   [-K_FB a_B]
      // [ 1'    0][rho] = [1 - sum a_B]
      Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(f + 1, f + 1);
      Eigen::VectorXd rhs(f + 1);
      for (Eigen::Index a = 0; a < f; ++a) {
        for (Eigen::Index b = 0; b < f; ++b) sys(a, b) = k(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
        sys(a, f) = -1.0;
        sys(f, a) = 1.0;
        rhs(a) = -(k.row(free[static_cast<std::size_t>(a)]) * alpha)(0);
      }
      rhs(f) = 1.0 - bound_mass;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
      if (lu.rank() < f + 1) continue;
      const Eigen::VectorXd x = lu.solve(rhs);
      bool ok = true;
      for (Eigen::Index a = 0; a < f; ++a) {
        if (x(a) <= eps || x(a) >= c - eps) ok = false;
        alpha(free[static_cast<std::size_t>(a)]) = x(a);
      }
      if (!ok) continue;
      rho = x(f);
    }
    const Eigen::VectorXd grad = k * alpha;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (state[static_cast<std::size_t>(i)] == 1) lo = std::max(lo, grad(i));
      if (state[static_cast<std::size_t>(i)] == 0) hi = std::min(hi, grad(i));
    }
    if (f > 0 && (lo > rho + 1e-9 || hi < rho - 1e-9)) continue;
    if (f == 0 && lo > hi + 1e-9) continue;
    const double obj = 0.5 * alpha.dot(grad);
    if (obj < best.objective) {
      best.objective = obj;
      best.alpha = alpha;
    }
  }
  return best;
}

/// Random connected simple graph: random spanning tree plus extra edges.
inline glod::Graph random_connected_graph(std::size_t n, double extra_density, std::mt19937_64& rng) {
  std::vector<glod::Edge> edges;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (glod::NodeId v = 1; v < n; ++v) {
    const auto u = static_cast<glod::NodeId>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
    edges.emplace_back(u, v);
    adj[u][v] = adj[v][u] = true;
  }
  std::bernoulli_distribution extra(extra_density);
  for (glod::NodeId u = 0; u < n; ++u) {
    for (glod::NodeId v = u + 1; v < n; ++v) {
      if (!adj[u][v] && extra(rng)) edges.emplace_back(u, v);
    }
  }
  return glod::Graph(n, std::move(edges), std::vector<glod::LabelId>(n, 0));
}

/// Random labeled graph (not necessarily connected) over `alphabet` labels.
inline glod::Graph random_labeled_graph(std::size_t n, double p, std::size_t alphabet, std::mt19937_64& rng) {
  std::vector<glod::Edge> edges;
  std::bernoulli_distribution coin(p);
  for (glod::NodeId u = 0; u < n; ++u) {
    for (glod::NodeId v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  std::vector<glod::LabelId> labels(n);
  std::uniform_int_distribution<glod::LabelId> pick(0, static_cast<glod::LabelId>(alphabet - 1));
  for (auto& l : labels) l = pick(rng);
  return glod::Graph(n, std::move(edges), std::move(labels));
}

inline std::vector<glod::NodeId> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<glod::NodeId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<glod::NodeId>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace oracle
