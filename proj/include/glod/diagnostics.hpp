#pragma once

// Embedding-space measurements: NN-Radius (local density), NN-Disagreement
// (class mixing) and classical MDS coordinates, per propagation iteration.

#include <Eigen/Dense>
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "glod/bench.hpp"
#include "glod/graph.hpp"
#include "glod/io.hpp"
#include "glod/kernels.hpp"

namespace glod {

/// Distance (1 - similarity) to the k-th nearest other point.
inline std::vector<double> nn_radius(const Eigen::MatrixXd& similarity, std::size_t k = 20) {
  const auto n = static_cast<std::size_t>(similarity.rows());
  if (k == 0 || n <= k) {
    throw ParameterError("NN-Radius needs N > k (N=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  std::vector<double> radius(n);
  std::vector<double> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.push_back(1.0 - similarity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    radius[i] = row[k - 1];
  }
  return radius;
}

/// Percentage of points within the NN-Radius (inclusive) whose group differs.
inline std::vector<double> nn_disagreement(const Eigen::MatrixXd& similarity, const std::vector<int>& groups,
                                           std::size_t k = 20) {
  const auto n = static_cast<std::size_t>(similarity.rows());
  if (groups.size() != n) throw ParameterError("group vector length does not match similarity matrix");
  const auto radius = nn_radius(similarity, k);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t within = 0;
    std::size_t other = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (1.0 - similarity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) <= radius[i]) {
        ++within;
        if (groups[j] != groups[i]) ++other;
      }
    }
    out[i] = within ? 100.0 * static_cast<double>(other) / static_cast<double>(within) : 0.0;
  }
  return out;
}

struct MdsResult {
  Eigen::MatrixXd coordinates;  // N x 2
  Eigen::Vector2d eigenvalues;  // top two eigenvalues of B before clamping
  std::size_t clamped = 0;      // how many of the two were negative and set to 0
  double negative_mass = 0.0;   // sum of |negative eigenvalues| of B (non-Euclidean part)
};

/// Torgerson scaling: B = -1/2 J D^2 J, coordinates from the top-2 eigenpairs.
/// Each axis is oriented so its largest-magnitude coordinate is positive.
inline MdsResult classical_mds(const Eigen::MatrixXd& distances) {
  const auto n = distances.rows();
  if (distances.cols() != n) throw ParameterError("MDS: distance matrix not square");
  MdsResult r;
  r.coordinates = Eigen::MatrixXd::Zero(n, 2);
  r.eigenvalues.setZero();
  if (n == 0) return r;

  const Eigen::MatrixXd sq = distances.array().square().matrix();
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const Eigen::RowVectorXd col_mean = sq.colwise().mean();
  const double grand = sq.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) b(i, j) = -0.5 * (sq(i, j) - row_mean(i) - col_mean(j) + grand);
  }
  b = 0.5 * (b + b.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  const auto& values = eig.eigenvalues();  // ascending
  for (Eigen::Index i = 0; i < n; ++i) {
    if (values(i) < 0.0) r.negative_mass -= values(i);
  }
  for (int axis = 0; axis < 2 && axis < n; ++axis) {
    const auto idx = n - 1 - axis;
    const double lambda = values(idx);
    r.eigenvalues(axis) = lambda;
    if (lambda < 0.0) ++r.clamped;
    Eigen::VectorXd v = eig.eigenvectors().col(idx);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(v(i)) > std::abs(v(arg)) + 1e-12) arg = i;
    }
    if (v(arg) < 0.0) v = -v;
    r.coordinates.col(axis) = v * std::sqrt(std::max(lambda, 0.0));
  }
  return r;
}

/// Counts of values in `bins` equal-width bins over [lo, hi]; values
/// outside are clamped into the end bins.
inline std::vector<std::size_t> histogram(const std::vector<double>& values, std::size_t bins = 20, double lo = 0.0,
                                          double hi = 1.0) {
  std::vector<std::size_t> counts(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    auto b = static_cast<long long>(std::floor((v - lo) / width));
    b = std::clamp<long long>(b, 0, static_cast<long long>(bins) - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  return counts;
}

enum class SimilaritySlice { cumulative, per_iteration };

struct DiagnosticOptions {
  std::size_t k = 20;
  std::size_t histogram_bins = 20;
  SimilaritySlice slice = SimilaritySlice::cumulative;
};

struct DiagnosticSlice {
  std::size_t iteration = 0;
  Eigen::MatrixXd similarity;
  std::vector<double> radius;
  std::vector<double> disagreement;
  MdsResult mds;
  /// histogram per distinct group value, in ascending group order
  std::vector<std::vector<std::size_t>> radius_hist;
  std::vector<std::vector<std::size_t>> disagreement_hist;
};

struct DiagnosticReport {
  std::string dataset;
  std::string method;
  std::string grouping;  // "class" or "outlier"
  std::vector<int> groups;
  std::vector<int> group_values;
  DiagnosticOptions options;
  std::vector<DiagnosticSlice> slices;
};

inline DiagnosticSlice diagnose_similarity(const Eigen::MatrixXd& similarity, const std::vector<int>& groups,
                                           const std::vector<int>& group_values, std::size_t iteration,
                                           const DiagnosticOptions& opt) {
  DiagnosticSlice s;
  s.iteration = iteration;
  s.similarity = similarity;
  s.radius = nn_radius(similarity, opt.k);
  s.disagreement = nn_disagreement(similarity, groups, opt.k);
  s.mds = classical_mds(distance_from_similarity(similarity));
  for (int gv : group_values) {
    std::vector<double> r;
    std::vector<double> d;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (groups[i] != gv) continue;
      r.push_back(s.radius[i]);
      d.push_back(s.disagreement[i] / 100.0);
    }
    s.radius_hist.push_back(histogram(r, opt.histogram_bins));
    s.disagreement_hist.push_back(histogram(d, opt.histogram_bins));
  }
  return s;
}

/// Runs all measurements for each requested iteration on `ds`, grouping
/// graphs by `groups` (class labels, or outlier flags of a variant).
/// Kernel methods use the normalized kernel with L = iteration (cumulative
/// or that iteration's slice); FGSD has no iterations and yields one slice.
inline DiagnosticReport full_diagnostic(const GraphDataset& ds, const MethodSpec& m,
                                        const std::vector<std::size_t>& iterations, const std::vector<int>& groups,
                                        const std::string& grouping, const DiagnosticOptions& opt = {}) {
  if (groups.size() != ds.size()) throw ParameterError("grouping length does not match dataset size");
  if (ds.size() <= opt.k) {
    throw ParameterError("diagnostics need more than k=" + std::to_string(opt.k) + " graphs, got " +
                         std::to_string(ds.size()));
  }
  DiagnosticReport rep;
  rep.dataset = ds.name;
  rep.method = m.embedder == Embedder::fgsd ? "fgsd" : to_string(m.embedder);
  rep.grouping = grouping;
  rep.groups = groups;
  rep.options = opt;
  rep.group_values = groups;
  std::sort(rep.group_values.begin(), rep.group_values.end());
  rep.group_values.erase(std::unique(rep.group_values.begin(), rep.group_values.end()), rep.group_values.end());

  if (!m.is_kernel()) {
    DetectorInput in;
    in.kernel_based = false;
    in.embedding = fgsd_embed(ds, m.fgsd).vectors;
    rep.slices.push_back(diagnose_similarity(in.similarity(), groups, rep.group_values, 0, opt));
    return rep;
  }
  if (iterations.empty()) throw ParameterError("no iterations requested");
  const auto max_l = *std::max_element(iterations.begin(), iterations.end());
  const auto km = compute_kernel(ds, m.embedder, max_l, m.bin_width, m.hash_seed, true);
  for (auto l : iterations) {
    Eigen::MatrixXd sim;
    if (opt.slice == SimilaritySlice::per_iteration) {
      sim = km.normalized_per_iteration(l);
    } else {
      Eigen::MatrixXd cum = Eigen::MatrixXd::Zero(km.cumulative.rows(), km.cumulative.cols());
      for (std::size_t t = 0; t <= l; ++t) cum += km.per_iteration[t];
      sim = KernelMatrix::normalize(cum);
    }
    rep.slices.push_back(diagnose_similarity(sim, groups, rep.group_values, l, opt));
  }
  return rep;
}

/// Writes similarity_L{l}.csv, mds_L{l}.csv, radius_L{l}.csv,
/// disagreement_L{l}.csv, histograms_L{l}.csv and manifest.json.
inline nlohmann::json write_diagnostic_bundle(const DiagnosticReport& rep, const std::filesystem::path& dir,
                                              nlohmann::json manifest = nlohmann::json::object()) {
  manifest["dataset"] = rep.dataset;
  manifest["method"] = rep.method;
  manifest["grouping"] = rep.grouping;
  manifest["k"] = rep.options.k;
  manifest["histogram_bins"] = rep.options.histogram_bins;
  manifest["similarity_slice"] = rep.options.slice == SimilaritySlice::cumulative ? "cumulative" : "per_iteration";
  manifest["mds"] = "classical (Torgerson), negative eigenvalues clamped to 0";
  manifest["files"] = nlohmann::json::array();
  for (const auto& s : rep.slices) {
    const auto tag = "_L" + std::to_string(s.iteration) + ".csv";
    atomic_write(dir / ("similarity" + tag), matrix_csv(s.similarity));

    std::string mds = "index,x,y,group\n";
    std::string radius = "index,group,radius\n";
    std::string dis = "index,group,disagreement_pct\n";
    for (std::size_t i = 0; i < rep.groups.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      const auto g = std::to_string(rep.groups[i]);
      mds += std::to_string(i) + "," + fmt_num(s.mds.coordinates(idx, 0)) + "," + fmt_num(s.mds.coordinates(idx, 1)) +
             "," + g + "\n";
      radius += std::to_string(i) + "," + g + "," + fmt_num(s.radius[i]) + "\n";
      dis += std::to_string(i) + "," + g + "," + fmt_num(s.disagreement[i]) + "\n";
    }
    std::string hist = "measure,group,bin_lo,bin_hi,count\n";
    const double width = 1.0 / static_cast<double>(rep.options.histogram_bins);
    for (std::size_t gi = 0; gi < rep.group_values.size(); ++gi) {
      for (std::size_t b = 0; b < rep.options.histogram_bins; ++b) {
        const auto edges = fmt_num(static_cast<double>(b) * width) + "," + fmt_num(static_cast<double>(b + 1) * width);
        hist += "radius," + std::to_string(rep.group_values[gi]) + "," + edges + "," +
                std::to_string(s.radius_hist[gi][b]) + "\n";
        hist += "disagreement," + std::to_string(rep.group_values[gi]) + "," + edges + "," +
                std::to_string(s.disagreement_hist[gi][b]) + "\n";
      }
    }
    atomic_write(dir / ("mds" + tag), mds);
    atomic_write(dir / ("radius" + tag), radius);
    atomic_write(dir / ("disagreement" + tag), dis);
    atomic_write(dir / ("histograms" + tag), hist);
    for (const char* stem : {"similarity", "mds", "radius", "disagreement", "histograms"}) {
      manifest["files"].push_back(std::string(stem) + tag);
    }
    manifest["mds_eigenvalues"][std::to_string(s.iteration)] = {s.mds.eigenvalues(0), s.mds.eigenvalues(1)};
    manifest["mds_negative_mass"][std::to_string(s.iteration)] = s.mds.negative_mass;
  }
  atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace glod
