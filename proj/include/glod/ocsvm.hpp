#pragma once

// nu-one-class SVM on a precomputed kernel.
//
// Dual: minimize 1/2 a'Ka  s.t.  0 <= a_i <= C = 1/(nu N),  sum a = 1.
// Solved by pairwise (SMO) updates with second-order working-set selection.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "glod/graph.hpp"
#include "glod/scores.hpp"

namespace glod {

struct OcsvmOptions {
  double nu = 0.1;
  double tolerance = 1e-4;
  /// One sweep is N pair updates.
  std::size_t max_sweeps = 100'000;
  bool record_objective = false;
};

struct OcsvmSolution {
  Eigen::VectorXd alpha;
  double rho = 0.0;
  double upper_bound = 0.0;
  Eigen::VectorXd decision;  // g(x_i) = (K a)_i - rho
  double kkt_violation = 0.0;
  std::size_t updates = 0;
  bool converged = false;
  /// Objective after each completed sweep (only when requested).
  std::vector<double> objective_trace;

  double objective(const Eigen::MatrixXd& k) const { return 0.5 * alpha.dot(k * alpha); }
};

inline OcsvmSolution ocsvm_solve(const Eigen::MatrixXd& k, const OcsvmOptions& opt = {}) {
  const auto n = k.rows();
  if (k.cols() != n) throw ParameterError("OCSVM: kernel not square");
  if (!(opt.nu > 0.0 && opt.nu <= 1.0)) throw ParameterError("OCSVM: nu must lie in (0,1]");
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw ParameterError("OCSVM: kernel matrix is not symmetric");
  }
  if (opt.nu * static_cast<double>(n) < 1.0) {
    throw ParameterError("OCSVM: nu*N < 1 makes the box bound 1/(nu N) exceed 1");
  }

  OcsvmSolution sol;
  const double c = 1.0 / (opt.nu * static_cast<double>(n));
  sol.upper_bound = c;
  sol.alpha = Eigen::VectorXd::Zero(n);
  const auto full = static_cast<Eigen::Index>(std::floor(opt.nu * static_cast<double>(n)));
  for (Eigen::Index i = 0; i < std::min(full, n); ++i) sol.alpha(i) = c;
  if (full < n) sol.alpha(full) = std::max(0.0, 1.0 - static_cast<double>(full) * c);

  Eigen::VectorXd grad = k * sol.alpha;
  constexpr double tau = 1e-12;
  const std::size_t max_updates = opt.max_sweeps * static_cast<std::size_t>(std::max<Eigen::Index>(n, 1));

  while (true) {
    // i: may grow (a_i < C), smallest gradient. j: may shrink (a_j > 0).
    Eigen::Index i = -1;
    double g_min = std::numeric_limits<double>::infinity();
    double g_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (sol.alpha(t) < c && grad(t) < g_min) {
        g_min = grad(t);
        i = t;
      }
      if (sol.alpha(t) > 0.0) g_max = std::max(g_max, grad(t));
    }
    sol.kkt_violation = (i < 0) ? 0.0 : std::max(0.0, g_max - g_min);
    if (i < 0 || sol.kkt_violation < opt.tolerance) {
      sol.converged = true;
      break;
    }
    if (sol.updates >= max_updates) break;

    Eigen::Index j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!(sol.alpha(t) > 0.0)) continue;
      const double diff = grad(t) - g_min;
      if (diff <= 0.0) continue;
      double curv = k(i, i) + k(t, t) - 2.0 * k(i, t);
      if (curv <= 0.0) curv = tau;
      const double gain = -diff * diff / curv;
      if (gain < best) {
        best = gain;
        j = t;
      }
    }
    if (j < 0) {
      sol.converged = true;
      break;
    }

    double curv = k(i, i) + k(j, j) - 2.0 * k(i, j);
    if (curv <= 0.0) curv = tau;
    const double room_i = c - sol.alpha(i);
    const double room_j = sol.alpha(j);
    double step = (grad(j) - grad(i)) / curv;
    if (step >= room_i || step >= room_j) {
      if (room_i <= room_j) {
        step = room_i;
        sol.alpha(i) = c;
        sol.alpha(j) -= step;
      } else {
        step = room_j;
        sol.alpha(i) += step;
        sol.alpha(j) = 0.0;
      }
    } else {
      sol.alpha(i) += step;
      sol.alpha(j) -= step;
    }
    grad += step * (k.col(i) - k.col(j));
    ++sol.updates;
    if (opt.record_objective && sol.updates % static_cast<std::size_t>(n) == 0) {
      sol.objective_trace.push_back(0.5 * sol.alpha.dot(grad));
    }
  }
  if (opt.record_objective) sol.objective_trace.push_back(0.5 * sol.alpha.dot(grad));

  // rho: median gradient over free support vectors; midpoint of the
  // bound-derived interval when none are free.
  std::vector<double> free;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < n; ++t) {
    if (sol.alpha(t) > 0.0 && sol.alpha(t) < c) {
      free.push_back(grad(t));
    } else if (sol.alpha(t) >= c) {
      lower = std::max(lower, grad(t));
    } else {
      upper = std::min(upper, grad(t));
    }
  }
  if (!free.empty()) {
    std::sort(free.begin(), free.end());
    const auto m = free.size();
    sol.rho = (m % 2) ? free[m / 2] : 0.5 * (free[m / 2 - 1] + free[m / 2]);
  } else if (std::isfinite(lower) && std::isfinite(upper)) {
    sol.rho = 0.5 * (lower + upper);
  } else {
    sol.rho = std::isfinite(lower) ? lower : upper;
  }
  sol.decision = grad.array() - sol.rho;
  return sol;
}

/// Score = -g(x_i): points outside the estimated support score positive.
inline ScoreVector ocsvm(const Eigen::MatrixXd& kernel, double nu = 0.1) {
  OcsvmOptions opt;
  opt.nu = nu;
  const auto sol = ocsvm_solve(kernel, opt);
  ScoreVector out;
  out.method = "ocsvm";
  out.config["nu"] = std::to_string(nu);
  out.scores.resize(static_cast<std::size_t>(kernel.rows()));
  for (Eigen::Index i = 0; i < kernel.rows(); ++i) out.scores[static_cast<std::size_t>(i)] = -sol.decision(i);
  return out;
}

/// Gaussian kernel exp(-gamma |x-y|^2) with gamma = 1 / (features * var(X))
/// over all entries; used when OCSVM runs on explicit embeddings.
inline Eigen::MatrixXd rbf_kernel_scaled(const Eigen::MatrixXd& x) {
  const double mean = x.mean();
  const double var = (x.array() - mean).square().mean();
  const double gamma = var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * var) : 1.0;
  const auto n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      k(i, j) = k(j, i) = std::exp(-gamma * (x.row(i) - x.row(j)).squaredNorm());
    }
  }
  return k;
}

}  // namespace glod
