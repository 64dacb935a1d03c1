#pragma once

// Reader and writer for the TU graph-classification text layout:
//   <name>_A.txt               "row, col" 1-based global node ids, one edge per line
//   <name>_graph_indicator.txt 1-based graph id for each node
//   <name>_graph_labels.txt    one integer class per graph
//   <name>_node_labels.txt     optional, one integer label per node

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "glod/graph.hpp"

namespace glod {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline bool parse_int(std::string_view s, long long& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

/// One integer per non-blank line.
inline std::vector<long long> read_int_column(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<long long> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    long long v = 0;
    if (!parse_int(line, v)) {
      throw FormatError(path.filename().string() + ":" + std::to_string(line_no) +
                        ": expected an integer");
    }
    values.push_back(v);
  }
  return values;
}

/// Maps sorted distinct values to 0..d-1.
inline std::map<long long, std::uint32_t> compaction_map(const std::vector<long long>& values) {
  std::set<long long> distinct(values.begin(), values.end());
  std::map<long long, std::uint32_t> ids;
  std::uint32_t next = 0;
  for (auto v : distinct) ids.emplace(v, next++);
  return ids;
}

}  // namespace detail

/// Replaces every node label by the node's degree, then compacts the
/// distinct degrees present in the dataset to 0..d-1 (ascending degree).
inline GraphDataset degree_labeling(const GraphDataset& ds) {
  std::vector<long long> degrees;
  for (const auto& g : ds.graphs) {
    for (NodeId v = 0; v < g.node_count(); ++v) degrees.push_back(static_cast<long long>(g.degree(v)));
  }
  const auto ids = detail::compaction_map(degrees);
  GraphDataset out;
  out.name = ds.name;
  out.class_labels = ds.class_labels;
  out.label_alphabet_size = ids.size();
  out.graphs.reserve(ds.size());
  for (const auto& g : ds.graphs) {
    std::vector<LabelId> labels(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      labels[v] = ids.at(static_cast<long long>(g.degree(v)));
    }
    out.graphs.push_back(g.with_labels(std::move(labels)));
  }
  return out;
}

/// Loads `<directory>/<name>_*.txt`. Graph classes and node labels are
/// compacted from their sorted distinct values (so {-1,1} and {1,2} both
/// become {0,1}). Graphs without a node-label file are degree-labeled.
inline GraphDataset load_tu_dataset(const std::filesystem::path& directory,
                                    const std::string& name) {
  namespace fs = std::filesystem;
  const auto file = [&](const char* suffix) { return directory / (name + suffix); };

  for (const char* mandatory : {"_A.txt", "_graph_indicator.txt", "_graph_labels.txt"}) {
    if (!fs::exists(file(mandatory))) {
      throw FormatError("missing mandatory file " + file(mandatory).string());
    }
  }

  const auto indicator = detail::read_int_column(file("_graph_indicator.txt"));
  const auto graph_labels = detail::read_int_column(file("_graph_labels.txt"));
  const std::size_t graph_count = graph_labels.size();
  const std::size_t total_nodes = indicator.size();

  // Global node -> (graph, local index).
  std::vector<std::size_t> node_graph(total_nodes);
  std::vector<NodeId> node_local(total_nodes);
  std::vector<std::size_t> graph_sizes(graph_count, 0);
  for (std::size_t i = 0; i < total_nodes; ++i) {
    const long long gid = indicator[i];
    if (gid < 1 || static_cast<std::size_t>(gid) > graph_count) {
      throw FormatError(file("_graph_indicator.txt").filename().string() + ":" +
                        std::to_string(i + 1) + ": graph id " + std::to_string(gid) +
                        " outside 1.." + std::to_string(graph_count));
    }
    const auto g = static_cast<std::size_t>(gid - 1);
    node_graph[i] = g;
    node_local[i] = static_cast<NodeId>(graph_sizes[g]++);
  }

  std::vector<long long> raw_node_labels;
  const bool has_node_labels = fs::exists(file("_node_labels.txt"));
  if (has_node_labels) {
    raw_node_labels = detail::read_int_column(file("_node_labels.txt"));
    if (raw_node_labels.size() != total_nodes) {
      throw FormatError(file("_node_labels.txt").filename().string() + ": " +
                        std::to_string(raw_node_labels.size()) + " labels for " +
                        std::to_string(total_nodes) + " nodes");
    }
  }

  std::vector<std::set<Edge>> edge_sets(graph_count);
  {
    const auto path = file("_A.txt");
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto body = detail::trim(line);
      if (body.empty()) continue;
      const auto comma = body.find(',');
      long long a = 0;
      long long b = 0;
      if (comma == std::string_view::npos || !detail::parse_int(body.substr(0, comma), a) ||
          !detail::parse_int(body.substr(comma + 1), b)) {
        throw FormatError(path.filename().string() + ":" + std::to_string(line_no) +
                          ": expected \"row, col\"");
      }
      for (long long x : {a, b}) {
        if (x < 1 || static_cast<std::size_t>(x) > total_nodes) {
          throw FormatError(path.filename().string() + ":" + std::to_string(line_no) +
                            ": unknown node " + std::to_string(x));
        }
      }
      const auto u = static_cast<std::size_t>(a - 1);
      const auto v = static_cast<std::size_t>(b - 1);
      if (node_graph[u] != node_graph[v]) {
        throw FormatError(path.filename().string() + ":" + std::to_string(line_no) +
                          ": edge joins nodes of different graphs");
      }
      if (u == v) continue;  // self-loops are not representable
      NodeId lu = node_local[u];
      NodeId lv = node_local[v];
      if (lu > lv) std::swap(lu, lv);
      edge_sets[node_graph[u]].emplace(lu, lv);
    }
  }

  const auto node_label_ids = detail::compaction_map(raw_node_labels);
  const auto class_ids = detail::compaction_map(graph_labels);

  GraphDataset ds;
  ds.name = name;
  ds.graphs.reserve(graph_count);
  std::vector<std::vector<LabelId>> labels(graph_count);
  for (std::size_t g = 0; g < graph_count; ++g) labels[g].resize(graph_sizes[g], 0);
  if (has_node_labels) {
    for (std::size_t i = 0; i < total_nodes; ++i) {
      labels[node_graph[i]][node_local[i]] = node_label_ids.at(raw_node_labels[i]);
    }
  }
  for (std::size_t g = 0; g < graph_count; ++g) {
    ds.graphs.emplace_back(graph_sizes[g],
                           std::vector<Edge>(edge_sets[g].begin(), edge_sets[g].end()),
                           std::move(labels[g]));
    ds.class_labels.push_back(static_cast<int>(class_ids.at(graph_labels[g])));
  }
  ds.label_alphabet_size = node_label_ids.size();

  if (!has_node_labels) ds = degree_labeling(ds);
  ds.validate();
  return ds;
}

/// Writes the dataset in TU layout (each undirected edge in both
/// directions, LF line endings). Node labels are written as compact ids.
inline void write_tu_dataset(const GraphDataset& ds, const std::filesystem::path& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const auto open = [&](const char* suffix) {
    std::ofstream out(directory / (ds.name + suffix), std::ios::binary);
    if (!out) throw FormatError("cannot write " + (directory / (ds.name + suffix)).string());
    return out;
  };
  auto a = open("_A.txt");
  auto indicator = open("_graph_indicator.txt");
  auto graph_labels = open("_graph_labels.txt");
  auto node_labels = open("_node_labels.txt");

  std::size_t offset = 1;
  for (std::size_t g = 0; g < ds.size(); ++g) {
    const auto& graph = ds.graphs[g];
    for (NodeId v = 0; v < graph.node_count(); ++v) {
      for (auto w : graph.neighbors(v)) a << (offset + v) << ", " << (offset + w) << '\n';
      indicator << (g + 1) << '\n';
      node_labels << graph.label(v) << '\n';
    }
    graph_labels << ds.class_labels[g] << '\n';
    offset += graph.node_count();
  }
}

}  // namespace glod
