#pragma once

// CSV emission, atomic file writes, and the binary kernel cache.

#include <Eigen/Dense>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "glod/graph.hpp"
#include "glod/kernels.hpp"
#include "glod/scores.hpp"

namespace glod {

/// 9 significant digits.
inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// Writes to a sibling temp file, then renames over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string s;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) s += ',';
      s += fmt_num(m(i, j));
    }
    s += '\n';
  }
  return s;
}

/// One row per graph; the header lists the lower bin edges.
inline std::string embedding_csv(const Eigen::MatrixXd& vectors, double bin_width) {
  std::string s = "graph_index";
  for (Eigen::Index b = 0; b < vectors.cols(); ++b) s += ",bin_" + fmt_num(static_cast<double>(b) * bin_width);
  s += '\n';
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    s += std::to_string(i);
    for (Eigen::Index b = 0; b < vectors.cols(); ++b) s += "," + fmt_num(vectors(i, b));
    s += '\n';
  }
  return s;
}

inline std::string scores_csv(const ScoreVector& sv) {
  std::string s = "graph_index,score,is_outlier,method,config_hash\n";
  const auto hash = sv.config_hash();
  for (std::size_t i = 0; i < sv.size(); ++i) {
    s += std::to_string(i) + "," + fmt_num(sv.scores[i]) + "," +
         (i < sv.truth.size() && sv.truth[i] ? "1" : "0") + "," + sv.method + "," + hash + "\n";
  }
  return s;
}

/// Minimal CSV reader for the files this tool writes (no quoting).
inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

/// Binary kernel cache: magic, key hash, dims, then column-major doubles
/// (cumulative first, then each per-iteration slice).
class KernelCache {
 public:
  explicit KernelCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static std::string key(const std::string& dataset, const std::string& kernel, std::size_t iterations,
                         double bin_width, std::uint64_t seed, std::uint64_t members_hash) {
    return dataset + "|" + kernel + "|L=" + std::to_string(iterations) + "|w=" + fmt_num(bin_width) +
           "|seed=" + std::to_string(seed) + "|members=" + hex64(members_hash);
  }

  std::filesystem::path path_for(const std::string& key) const {
    return dir_ / ("kernel_" + hex64(fnv1a(key)) + ".bin");
  }

  std::optional<KernelMatrix> load(const std::string& key) const {
    const auto path = path_for(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    std::uint64_t hash = 0, n = 0, slices = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&hash), 8);
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&slices), 8);
    if (!in || std::string(magic, 8) != kMagic || hash != fnv1a(key) || n > (1u << 20) || slices > 4096) {
      std::cerr << "warning: ignoring corrupt kernel cache " << path << "\n";
      return std::nullopt;
    }
    KernelMatrix km;
    km.size = n;
    const auto read_matrix = [&](Eigen::MatrixXd& m) {
      m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(n * n * sizeof(double)));
      return static_cast<bool>(in);
    };
    bool ok = read_matrix(km.cumulative);
    km.per_iteration.resize(slices);
    for (auto& s : km.per_iteration) ok = ok && read_matrix(s);
    if (!ok || in.peek() != std::char_traits<char>::eof()) {
      std::cerr << "warning: ignoring corrupt kernel cache " << path << "\n";
      return std::nullopt;
    }
    return km;
  }

  void store(const std::string& key, const KernelMatrix& km) const {
    std::string blob(kMagic);
    const auto put = [&](std::uint64_t v) { blob.append(reinterpret_cast<const char*>(&v), 8); };
    put(fnv1a(key));
    put(km.size);
    put(km.per_iteration.size());
    const auto put_matrix = [&](const Eigen::MatrixXd& m) {
      blob.append(reinterpret_cast<const char*>(m.data()), static_cast<std::size_t>(m.size()) * sizeof(double));
    };
    put_matrix(km.cumulative);
    for (const auto& s : km.per_iteration) put_matrix(s);
    atomic_write(path_for(key), blob);
  }

 private:
  static constexpr const char* kMagic = "GLODKM01";
  std::filesystem::path dir_;
};

}  // namespace glod
