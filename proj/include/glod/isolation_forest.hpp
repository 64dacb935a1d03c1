#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "glod/graph.hpp"
#include "glod/scores.hpp"

namespace glod {

inline double harmonic_number(std::size_t m) {
  double h = 0.0;
  for (std::size_t i = m; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return h;
}

/// Average unsuccessful-search path length in a BST of m points.
inline double average_path_length(std::size_t m) {
  if (m <= 1) return 0.0;
  const double md = static_cast<double>(m);
  return 2.0 * harmonic_number(m - 1) - 2.0 * (md - 1.0) / md;
}

struct IsolationForestOptions {
  std::size_t trees = 100;
  std::size_t subsample = 256;
  std::uint64_t seed = 0;
};

class IsolationForest {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::size_t size = 0;
  };
  using Tree = std::vector<Node>;

  IsolationForest(const Eigen::MatrixXd& data, const IsolationForestOptions& opt)
      : sample_size_(std::min<std::size_t>(opt.subsample, static_cast<std::size_t>(data.rows()))) {
    if (data.rows() < 2) throw ParameterError("isolation forest needs at least 2 samples");
    if (opt.trees == 0 || opt.subsample == 0) throw ParameterError("trees and subsample must be positive");
    height_limit_ = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(sample_size_))));
    std::mt19937_64 rng(opt.seed);
    std::vector<Eigen::Index> all(static_cast<std::size_t>(data.rows()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Eigen::Index>(i);
    trees_.reserve(opt.trees);
    for (std::size_t t = 0; t < opt.trees; ++t) {
      // Partial shuffle: first sample_size_ entries form the subsample.
      for (std::size_t i = 0; i < sample_size_; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
        std::swap(all[i], all[pick(rng)]);
      }
      std::vector<Eigen::Index> sample(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(sample_size_));
      Tree tree;
      grow(data, sample, 0, tree, rng);
      trees_.push_back(std::move(tree));
    }
  }

  double path_length(const Eigen::Ref<const Eigen::RowVectorXd>& x, const Tree& tree) const {
    std::int32_t node = 0;
    double depth = 0.0;
    while (tree[static_cast<std::size_t>(node)].feature >= 0) {
      const auto& n = tree[static_cast<std::size_t>(node)];
      node = x(n.feature) < n.threshold ? n.left : n.right;
      depth += 1.0;
    }
    return depth + average_path_length(tree[static_cast<std::size_t>(node)].size);
  }

  /// 2^(-E[h(x)] / c(subsample)), in (0, 1].
  double score(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    double total = 0.0;
    for (const auto& tree : trees_) total += path_length(x, tree);
    const double mean = total / static_cast<double>(trees_.size());
    const double norm = average_path_length(sample_size_);
    return norm > 0.0 ? std::pow(2.0, -mean / norm) : 1.0;
  }

  const std::vector<Tree>& trees() const { return trees_; }
  std::size_t height_limit() const { return height_limit_; }
  std::size_t sample_size() const { return sample_size_; }

 private:
  std::int32_t grow(const Eigen::MatrixXd& data, std::vector<Eigen::Index>& idx, std::size_t depth,
                    Tree& tree, std::mt19937_64& rng) {
    const auto self = static_cast<std::int32_t>(tree.size());
    tree.push_back(Node{});
    tree.back().size = idx.size();
    if (depth >= height_limit_ || idx.size() <= 1) return self;

    // Attributes with nonzero range inside this node.
    std::vector<std::pair<Eigen::Index, std::pair<double, double>>> usable;
    for (Eigen::Index f = 0; f < data.cols(); ++f) {
      double lo = data(idx.front(), f);
      double hi = lo;
      for (auto i : idx) {
        lo = std::min(lo, data(i, f));
        hi = std::max(hi, data(i, f));
      }
      if (hi > lo) usable.push_back({f, {lo, hi}});
    }
    if (usable.empty()) return self;

    const auto& [feature, range] =
        usable[std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng)];
    double threshold = std::uniform_real_distribution<double>(range.first, range.second)(rng);
    if (threshold <= range.first) threshold = std::nextafter(range.first, range.second);

    std::vector<Eigen::Index> left;
    std::vector<Eigen::Index> right;
    for (auto i : idx) (data(i, feature) < threshold ? left : right).push_back(i);
    const auto l = grow(data, left, depth + 1, tree, rng);
    const auto r = grow(data, right, depth + 1, tree, rng);
    auto& node = tree[static_cast<std::size_t>(self)];
    node.feature = static_cast<std::int32_t>(feature);
    node.threshold = threshold;
    node.left = l;
    node.right = r;
    return self;
  }

  std::size_t sample_size_;
  std::size_t height_limit_ = 0;
  std::vector<Tree> trees_;
};

inline ScoreVector isolation_forest(const Eigen::MatrixXd& data, const IsolationForestOptions& opt = {}) {
  const IsolationForest forest(data, opt);
  ScoreVector out;
  out.method = "iforest";
  out.config["trees"] = std::to_string(opt.trees);
  out.config["subsample"] = std::to_string(opt.subsample);
  out.config["seed"] = std::to_string(opt.seed);
  out.scores.resize(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index i = 0; i < data.rows(); ++i) out.scores[static_cast<std::size_t>(i)] = forest.score(data.row(i));
  return out;
}

}  // namespace glod
