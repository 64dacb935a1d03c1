#pragma once

// Weisfeiler-Leman subtree kernel and propagation kernel.
//
// Both kernels map each graph to one count vector per iteration and take
// dot products; the per-iteration Gram matrices are summed into the
// cumulative kernel. Feature ids are assigned dataset-wide so count vectors
// of different graphs are comparable.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "glod/graph.hpp"

namespace glod {

enum class KernelKind { wl, pk };

inline const char* to_string(KernelKind k) { return k == KernelKind::wl ? "wl" : "pk"; }

/// Sparse count vector: (feature id, count) sorted by feature id.
using SparseCounts = std::vector<std::pair<std::uint32_t, double>>;

/// Per-iteration Gram matrices (iterations 0..L) and their sum.
struct KernelMatrix {
  std::size_t size = 0;
  std::vector<Eigen::MatrixXd> per_iteration;
  Eigen::MatrixXd cumulative;

  std::size_t iterations() const { return per_iteration.size(); }

  Eigen::MatrixXd normalized_cumulative() const { return normalize(cumulative); }
  Eigen::MatrixXd normalized_per_iteration(std::size_t l) const {
    return normalize(per_iteration.at(l));
  }

  /// K(i,j) / sqrt(K(i,i) K(j,j)); entries with a zero diagonal factor are 0.
  static Eigen::MatrixXd normalize(const Eigen::MatrixXd& k) {
    const auto n = k.rows();
    Eigen::VectorXd scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      scale(i) = k(i, i) > 0.0 ? 1.0 / std::sqrt(k(i, i)) : 0.0;
    }
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) out(i, j) = k(i, j) * scale(i) * scale(j);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (k(i, i) > 0.0) out(i, i) = 1.0;
    }
    return out;
  }
};

/// Gram matrix of sparse count vectors via an inverted index.
/// Integer-valued counts make the result exact and order independent.
inline Eigen::MatrixXd gram_matrix(const std::vector<SparseCounts>& features,
                                   std::size_t feature_count) {
  const auto n = static_cast<Eigen::Index>(features.size());
  std::vector<std::vector<std::pair<Eigen::Index, double>>> postings(feature_count);
  for (Eigen::Index g = 0; g < n; ++g) {
    for (auto [f, c] : features[static_cast<std::size_t>(g)]) postings[f].emplace_back(g, c);
  }
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (const auto& list : postings) {
    for (std::size_t a = 0; a < list.size(); ++a) {
      const auto [ga, ca] = list[a];
      for (std::size_t b = a; b < list.size(); ++b) k(list[b].first, ga) += ca * list[b].second;
    }
  }
  // Postings are in ascending graph order, so only the lower triangle is filled.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) k(j, i) = k(i, j);
  }
  return k;
}

namespace detail {

inline SparseCounts histogram(const std::vector<std::uint32_t>& ids) {
  std::unordered_map<std::uint32_t, double> counts;
  for (auto id : ids) counts[id] += 1.0;
  SparseCounts out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end());
  return out;
}

struct VectorHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = v.size();
    for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

inline KernelMatrix assemble(std::vector<std::vector<SparseCounts>> features_by_iteration,
                             const std::vector<std::size_t>& feature_counts,
                             bool keep_per_iteration) {
  KernelMatrix km;
  km.size = features_by_iteration.empty() ? 0 : features_by_iteration.front().size();
  const auto n = static_cast<Eigen::Index>(km.size);
  km.cumulative = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t l = 0; l < features_by_iteration.size(); ++l) {
    auto slice = gram_matrix(features_by_iteration[l], feature_counts[l]);
    km.cumulative += slice;
    if (keep_per_iteration) km.per_iteration.push_back(std::move(slice));
  }
  return km;
}

}  // namespace detail

/// Signature -> new label id, one table per refinement iteration (1..L).
using WlLabelTable =
    std::vector<std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, detail::VectorHash>>;

struct WlRelabeling {
  /// labels[g][l][v]: label of node v of graph g after l iterations.
  std::vector<std::vector<std::vector<std::uint32_t>>> labels;
  WlLabelTable table;
  /// Alphabet size per iteration (iteration 0 = input alphabet).
  std::vector<std::size_t> alphabet_sizes;
};

/// WL color refinement over the whole dataset with a shared label table.
/// New ids follow first-encounter order (graphs in dataset order, nodes in
/// index order); the signature is (own label, sorted neighbor labels).
inline WlRelabeling wl_relabel(const GraphDataset& ds, std::size_t iterations) {
  WlRelabeling out;
  out.labels.resize(ds.size());
  for (std::size_t g = 0; g < ds.size(); ++g) {
    const auto& labels = ds.graphs[g].labels();
    out.labels[g].emplace_back(labels.begin(), labels.end());
  }
  out.alphabet_sizes.push_back(ds.label_alphabet_size);
  out.table.resize(iterations);

  std::vector<std::uint32_t> signature;
  for (std::size_t l = 1; l <= iterations; ++l) {
    auto& table = out.table[l - 1];
    for (std::size_t g = 0; g < ds.size(); ++g) {
      const auto& graph = ds.graphs[g];
      const auto& prev = out.labels[g][l - 1];
      std::vector<std::uint32_t> next(graph.node_count());
      for (NodeId v = 0; v < graph.node_count(); ++v) {
        signature.clear();
        signature.push_back(prev[v]);
        for (auto w : graph.neighbors(v)) signature.push_back(prev[w]);
        std::sort(signature.begin() + 1, signature.end());
        const auto [it, inserted] =
            table.try_emplace(signature, static_cast<std::uint32_t>(table.size()));
        next[v] = it->second;
      }
      out.labels[g].push_back(std::move(next));
    }
    out.alphabet_sizes.push_back(table.size());
  }
  return out;
}

/// Per-iteration label-count vectors (outer index: iteration, inner: graph).
inline std::vector<std::vector<SparseCounts>> wl_features(const WlRelabeling& relabeling) {
  const std::size_t iterations = relabeling.alphabet_sizes.size();
  std::vector<std::vector<SparseCounts>> features(iterations);
  for (std::size_t l = 0; l < iterations; ++l) {
    features[l].reserve(relabeling.labels.size());
    for (const auto& per_graph : relabeling.labels) {
      features[l].push_back(detail::histogram(per_graph[l]));
    }
  }
  return features;
}

inline KernelMatrix wl_kernel(const GraphDataset& ds, std::size_t iterations,
                              bool keep_per_iteration = true) {
  const auto relabeling = wl_relabel(ds, iterations);
  return detail::assemble(wl_features(relabeling), relabeling.alphabet_sizes,
                          keep_per_iteration);
}

/// Row-major n x d feature matrix.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// X_0 = one-hot labels, X_{l+1} = D^-1 A X_l. Isolated nodes keep their
/// row (self-loop), so every row of every X_l sums to 1.
inline std::vector<FeatureMatrix> pk_propagate(const Graph& g, std::size_t iterations,
                                               std::size_t alphabet_size) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const auto d = static_cast<Eigen::Index>(alphabet_size);
  std::vector<FeatureMatrix> out;
  out.reserve(iterations + 1);
  FeatureMatrix x = FeatureMatrix::Zero(n, d);
  for (Eigen::Index v = 0; v < n; ++v) {
    const auto label = static_cast<Eigen::Index>(g.label(static_cast<NodeId>(v)));
    if (label >= d) throw ParameterError("node label outside alphabet");
    x(v, label) = 1.0;
  }
  out.push_back(x);
  for (std::size_t l = 0; l < iterations; ++l) {
    const auto& prev = out.back();
    FeatureMatrix next(n, d);
    for (Eigen::Index v = 0; v < n; ++v) {
      const auto& nb = g.neighbors(static_cast<NodeId>(v));
      if (nb.empty()) {
        next.row(v) = prev.row(v);
        continue;
      }
      next.row(v).setZero();
      for (auto w : nb) next.row(v) += prev.row(static_cast<Eigen::Index>(w));
      next.row(v) /= static_cast<double>(nb.size());
    }
    out.push_back(std::move(next));
  }
  return out;
}

/// LSH parameters: one Gaussian direction and one offset per iteration.
struct PkHashSpec {
  double bin_width = 0.1;
  std::uint64_t seed = 0;
  std::vector<Eigen::VectorXd> directions;
  std::vector<double> offsets;

  static PkHashSpec make(std::size_t iterations, std::size_t dimension, double bin_width,
                         std::uint64_t seed) {
    if (!(bin_width > 0.0)) throw ParameterError("PK bin width must be positive");
    PkHashSpec spec;
    spec.bin_width = bin_width;
    spec.seed = seed;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, bin_width);
    for (std::size_t l = 0; l <= iterations; ++l) {
      Eigen::VectorXd u(static_cast<Eigen::Index>(dimension));
      for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = normal(rng);
      spec.directions.push_back(std::move(u));
      spec.offsets.push_back(uniform(rng));
    }
    return spec;
  }

  std::int64_t bin(std::size_t iteration, const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    const double projection = x.dot(directions[iteration].transpose());
    return static_cast<std::int64_t>(std::floor((projection + offsets[iteration]) / bin_width));
  }
};

inline KernelMatrix pk_kernel(const GraphDataset& ds, std::size_t iterations, double bin_width,
                              std::uint64_t seed, bool keep_per_iteration = true) {
  const auto spec = PkHashSpec::make(iterations, ds.label_alphabet_size, bin_width, seed);
  std::vector<std::unordered_map<std::int64_t, std::uint32_t>> bin_ids(iterations + 1);
  std::vector<std::vector<SparseCounts>> features(iterations + 1,
                                                  std::vector<SparseCounts>(ds.size()));
  std::vector<std::uint32_t> ids;
  for (std::size_t g = 0; g < ds.size(); ++g) {
    const auto propagated = pk_propagate(ds.graphs[g], iterations, ds.label_alphabet_size);
    for (std::size_t l = 0; l <= iterations; ++l) {
      const auto& x = propagated[l];
      ids.clear();
      for (Eigen::Index v = 0; v < x.rows(); ++v) {
        const auto b = spec.bin(l, x.row(v));
        const auto [it, inserted] =
            bin_ids[l].try_emplace(b, static_cast<std::uint32_t>(bin_ids[l].size()));
        ids.push_back(it->second);
      }
      features[l][g] = detail::histogram(ids);
    }
  }
  std::vector<std::size_t> counts;
  for (const auto& m : bin_ids) counts.push_back(m.size());
  return detail::assemble(std::move(features), counts, keep_per_iteration);
}

/// 1 - similarity, clamped to [0,1], with a zero diagonal.
inline Eigen::MatrixXd distance_from_similarity(const Eigen::MatrixXd& similarity) {
  Eigen::MatrixXd d = (1.0 - similarity.array()).cwiseMax(0.0).cwiseMin(1.0).matrix();
  d.diagonal().setZero();
  return d;
}

inline Eigen::MatrixXd kernel_distance(const KernelMatrix& km) {
  return distance_from_similarity(km.normalized_cumulative());
}

}  // namespace glod
