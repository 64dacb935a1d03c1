#pragma once

// Local outlier factor over a precomputed distance matrix.

#include <Eigen/Dense>

#include <algorithm>
#include <string>
#include <vector>

#include "glod/graph.hpp"
#include "glod/scores.hpp"

namespace glod {

/// Floor on the mean reachability distance. Caps lrd at 1e10 so that a
/// point with duplicate neighbors whose neighbors are duplicates too scores
/// exactly 1 (the inf/inf case), and every score stays finite.
inline constexpr double kLofMinReach = 1e-10;

struct LofNeighborhoods {
  std::vector<double> k_distance;
  /// Neighbors within k-distance (ties included), excluding the point itself.
  std::vector<std::vector<std::size_t>> neighbors;
};

inline LofNeighborhoods lof_neighborhoods(const Eigen::MatrixXd& d, std::size_t k) {
  const auto n = static_cast<std::size_t>(d.rows());
  LofNeighborhoods nb;
  nb.k_distance.resize(n);
  nb.neighbors.resize(n);
  std::vector<double> row;
  for (std::size_t a = 0; a < n; ++a) {
    row.clear();
    for (std::size_t b = 0; b < n; ++b) {
      if (b != a) row.push_back(d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    }
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    const double kd = row[k - 1];
    nb.k_distance[a] = kd;
    for (std::size_t b = 0; b < n; ++b) {
      if (b != a && d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) <= kd) {
        nb.neighbors[a].push_back(b);
      }
    }
  }
  return nb;
}

/// LOF(a) = mean lrd of a's k-neighbors / lrd(a), where
/// lrd(a) = 1 / mean_b max(k-dist(b), d(a,b)).
inline ScoreVector lof(const Eigen::MatrixXd& distances, std::size_t k = 20) {
  const auto n = static_cast<std::size_t>(distances.rows());
  if (distances.cols() != distances.rows()) throw ParameterError("LOF: distance matrix not square");
  if (k == 0 || n <= k) {
    throw ParameterError("LOF needs N > k (N=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  const auto nb = lof_neighborhoods(distances, k);

  std::vector<double> lrd(n);
  for (std::size_t a = 0; a < n; ++a) {
    double reach = 0.0;
    for (auto b : nb.neighbors[a]) {
      reach += std::max(nb.k_distance[b],
                        distances(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
    }
    reach /= static_cast<double>(nb.neighbors[a].size());
    lrd[a] = 1.0 / std::max(reach, kLofMinReach);
  }

  ScoreVector out;
  out.method = "lof";
  out.config["k"] = std::to_string(k);
  out.scores.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    double sum = 0.0;
    for (auto b : nb.neighbors[a]) sum += lrd[b];
    out.scores[a] = sum / static_cast<double>(nb.neighbors[a].size()) / lrd[a];
  }
  return out;
}

}  // namespace glod
