#pragma once

// FGSD graph embedding: histogram of harmonic spectral distances
// S(x,y) = sum_k (phi_k(x) - phi_k(y))^2 / lambda_k over nonzero Laplacian
// eigenpairs. Node labels are ignored.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "glod/graph.hpp"

namespace glod {

struct FgsdOptions {
  std::size_t bins = 200;
  double range_max = 20.0;
  /// Eigenvalues at or below this fraction of the largest one are treated as zero.
  double relative_cutoff = 1e-8;
  std::size_t max_nodes = 2000;
};

struct Embedding {
  Eigen::MatrixXd vectors;  // N x bins
  double bin_width = 0.0;
  double range_max = 0.0;
};

inline Eigen::MatrixXd laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : g.edges()) {
    lap(u, v) = lap(v, u) = -1.0;
    lap(u, u) += 1.0;
    lap(v, v) += 1.0;
  }
  return lap;
}

/// All-pairs harmonic spectral distance matrix of one graph.
inline Eigen::MatrixXd harmonic_spectral_distances(const Graph& g, double relative_cutoff = 1e-8) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (n == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian(g));
  const auto& lambda = eig.eigenvalues();
  const auto& phi = eig.eigenvectors();
  const double cutoff = relative_cutoff * std::max(lambda.maxCoeff(), 0.0);

  // Pseudoinverse restricted to the nonzero spectrum.
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (lambda(k) > cutoff && lambda(k) > 0.0) inv(k) = 1.0 / lambda(k);
  }
  const Eigen::MatrixXd pinv = phi * inv.asDiagonal() * phi.transpose();

  Eigen::MatrixXd s(n, n);
  for (Eigen::Index y = 0; y < n; ++y) {
    for (Eigen::Index x = 0; x < n; ++x) {
      s(x, y) = std::max(0.0, pinv(x, x) + pinv(y, y) - 2.0 * pinv(x, y));
    }
    s(y, y) = 0.0;
  }
  return s;
}

/// Bin index of distance s; values within 1e-9 bin widths of an edge snap to it,
/// so exact resistances such as 1.0 land in the same bin for every node order.
inline Eigen::Index fgsd_bin(double s, double width, Eigen::Index last) {
  double x = s / width;
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9) x = r;
  return std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(x)), 0, last);
}

inline Eigen::VectorXd fgsd_histogram(const Graph& g, const FgsdOptions& opt = {}) {
  if (g.node_count() > opt.max_nodes) {
    throw ParameterError("FGSD: graph with " + std::to_string(g.node_count()) +
                         " nodes exceeds the limit of " + std::to_string(opt.max_nodes));
  }
  const double width = opt.range_max / static_cast<double>(opt.bins);
  const auto last = static_cast<Eigen::Index>(opt.bins) - 1;
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(opt.bins));
  const auto s = harmonic_spectral_distances(g, opt.relative_cutoff);
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      hist(fgsd_bin(s(i, j), width, last)) += 1.0;
    }
  }
  return hist;
}

inline Embedding fgsd_embed(const GraphDataset& ds, const FgsdOptions& opt = {}) {
  if (opt.bins == 0 || !(opt.range_max > 0.0)) {
    throw ParameterError("FGSD needs bins > 0 and range_max > 0");
  }
  Embedding e;
  e.bin_width = opt.range_max / static_cast<double>(opt.bins);
  e.range_max = opt.range_max;
  e.vectors.resize(static_cast<Eigen::Index>(ds.size()), static_cast<Eigen::Index>(opt.bins));
  for (std::size_t g = 0; g < ds.size(); ++g) {
    if (ds.graphs[g].node_count() == 0) throw ParameterError("FGSD: empty graph");
    e.vectors.row(static_cast<Eigen::Index>(g)) = fgsd_histogram(ds.graphs[g], opt).transpose();
  }
  return e;
}

/// Pairwise Euclidean distances between rows.
inline Eigen::MatrixXd euclidean_distances(const Eigen::MatrixXd& rows) {
  const auto n = rows.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (rows.row(i) - rows.row(j)).norm();
    }
  }
  return d;
}

inline Eigen::MatrixXd embedding_distance(const Embedding& e) {
  return euclidean_distances(e.vectors);
}

/// 1 - distance / max(distance); all ones when every distance is zero.
inline Eigen::MatrixXd distance_to_similarity(const Eigen::MatrixXd& distance) {
  const double max_d = distance.size() ? distance.maxCoeff() : 0.0;
  if (!(max_d > 0.0)) return Eigen::MatrixXd::Ones(distance.rows(), distance.cols());
  return (1.0 - distance.array() / max_d).matrix();
}

inline Eigen::MatrixXd embedding_similarity(const Embedding& e) {
  return distance_to_similarity(embedding_distance(e));
}

}  // namespace glod
