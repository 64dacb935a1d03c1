#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace glod {

/// Invalid argument combination passed to an operation (bad n/k, m too large, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or missing input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A randomized procedure exhausted its retry budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using NodeId = std::uint32_t;
using LabelId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Node-labeled, undirected, simple graph.
///
/// Edges are stored canonically as (u, v) with u < v, sorted
/// lexicographically. Construction validates simplicity and endpoint
/// ranges; a Graph is immutable afterwards and safe to share across threads.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t node_count, std::vector<Edge> edges,
        std::vector<LabelId> node_labels)
      : node_count_(node_count),
        edges_(std::move(edges)),
        labels_(std::move(node_labels)) {
    if (labels_.size() != node_count_) {
      throw ParameterError("node label count " + std::to_string(labels_.size()) +
                           " does not match node count " +
                           std::to_string(node_count_));
    }
    for (auto& [u, v] : edges_) {
      if (u >= node_count_ || v >= node_count_) {
        throw ParameterError("edge endpoint out of range");
      }
      if (u == v) throw ParameterError("self-loop on node " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw ParameterError("duplicate edge");
    }
    build_adjacency();
  }

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<LabelId>& labels() const { return labels_; }
  LabelId label(NodeId v) const { return labels_[v]; }

  /// Neighbors of v in ascending order.
  const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

  bool has_edge(NodeId u, NodeId v) const {
    const auto& nb = adjacency_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::vector<std::size_t> degree_sequence() const {
    std::vector<std::size_t> seq(node_count_);
    for (NodeId v = 0; v < node_count_; ++v) seq[v] = degree(v);
    return seq;
  }

  Graph with_labels(std::vector<LabelId> labels) const {
    Graph g = *this;
    if (labels.size() != node_count_) {
      throw ParameterError("label vector length does not match node count");
    }
    g.labels_ = std::move(labels);
    return g;
  }

  /// Relabels nodes so that old node `v` becomes `perm[v]`.
  Graph permuted(const std::vector<NodeId>& perm) const {
    std::vector<Edge> edges;
    edges.reserve(edges_.size());
    for (auto [u, v] : edges_) edges.emplace_back(perm[u], perm[v]);
    std::vector<LabelId> labels(node_count_);
    for (NodeId v = 0; v < node_count_; ++v) labels[perm[v]] = labels_[v];
    return Graph(node_count_, std::move(edges), std::move(labels));
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_ &&
           a.labels_ == b.labels_;
  }

 private:
  void build_adjacency() {
    adjacency_.assign(node_count_, {});
    for (auto [u, v] : edges_) {
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
  }

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<LabelId> labels_;
  std::vector<std::vector<NodeId>> adjacency_;
};

/// Ordered collection of graphs with one class label per graph.
struct GraphDataset {
  std::string name;
  std::vector<Graph> graphs;
  std::vector<int> class_labels;
  std::size_t label_alphabet_size = 0;

  std::size_t size() const { return graphs.size(); }

  std::size_t class_count(int c) const {
    return static_cast<std::size_t>(
        std::count(class_labels.begin(), class_labels.end(), c));
  }

  std::vector<int> distinct_classes() const {
    std::set<int> s(class_labels.begin(), class_labels.end());
    return {s.begin(), s.end()};
  }

  /// Members in the given order; keeps the label alphabet.
  GraphDataset subset(const std::vector<std::size_t>& indices) const {
    GraphDataset out;
    out.name = name;
    out.label_alphabet_size = label_alphabet_size;
    out.graphs.reserve(indices.size());
    out.class_labels.reserve(indices.size());
    for (auto i : indices) {
      out.graphs.push_back(graphs.at(i));
      out.class_labels.push_back(class_labels.at(i));
    }
    return out;
  }

  /// Throws ParameterError when a structural invariant is broken.
  void validate() const {
    if (class_labels.size() != graphs.size()) {
      throw ParameterError("class label count does not match graph count");
    }
    for (const auto& g : graphs) {
      for (auto l : g.labels()) {
        if (l >= label_alphabet_size) {
          throw ParameterError("node label " + std::to_string(l) +
                               " outside alphabet of size " +
                               std::to_string(label_alphabet_size));
        }
      }
    }
  }

  friend bool operator==(const GraphDataset& a, const GraphDataset& b) {
    return a.name == b.name && a.graphs == b.graphs &&
           a.class_labels == b.class_labels &&
           a.label_alphabet_size == b.label_alphabet_size;
  }
};

/// Keeps only graphs whose class is `first` or `second` and maps them to 0/1.
inline GraphDataset select_classes(const GraphDataset& ds, int first, int second) {
  if (first == second) throw ParameterError("classes must differ");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.class_labels[i] == first || ds.class_labels[i] == second) keep.push_back(i);
  }
  auto out = ds.subset(keep);
  for (auto& c : out.class_labels) c = (c == first) ? 0 : 1;
  return out;
}

}  // namespace glod
