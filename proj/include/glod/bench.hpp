#pragma once

// Down-sampled benchmark construction, ROC-AUC, rate/iteration sweeps and
// flip reports.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "glod/fgsd.hpp"
#include "glod/graph.hpp"
#include "glod/io.hpp"
#include "glod/isolation_forest.hpp"
#include "glod/kernels.hpp"
#include "glod/lof.hpp"
#include "glod/ocsvm.hpp"
#include "glod/parallel.hpp"
#include "glod/scores.hpp"

namespace glod {

class UndefinedAucError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Down-sampling

struct BenchmarkVariant {
  std::string source;
  int downsampled_class = 0;
  double rate = 0.1;
  std::uint64_t seed = 0;
  std::vector<std::size_t> member_indices;  // ascending source order
  std::vector<bool> truth;                  // true = outlier (down-sampled class)

  std::size_t outlier_count() const {
    return static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));
  }
};

/// max(1, round-half-up(rate * class size)).
inline std::size_t outlier_budget(std::size_t class_size, double rate) {
  const auto r = static_cast<std::size_t>(std::floor(rate * static_cast<double>(class_size) + 0.5));
  return std::min(class_size, std::max<std::size_t>(1, r));
}

/// Keeps every graph of the other classes as inliers and a uniform sample
/// of class `dc` as outliers.
inline BenchmarkVariant downsample(const GraphDataset& ds, int dc, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) throw ParameterError("rate must lie in (0,1]");
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.class_labels[i] == dc) pool.push_back(i);
  }
  if (pool.empty()) throw ParameterError("class " + std::to_string(dc) + " not present in " + ds.name);
  if (pool.size() == ds.size()) throw ParameterError("dataset has no inlier class besides " + std::to_string(dc));

  const auto budget = outlier_budget(pool.size(), rate);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < budget; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  std::vector<bool> chosen(ds.size(), false);
  for (std::size_t i = 0; i < budget; ++i) chosen[pool[i]] = true;

  BenchmarkVariant v;
  v.source = ds.name;
  v.downsampled_class = dc;
  v.rate = rate;
  v.seed = seed;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.class_labels[i] != dc || chosen[i]) {
      v.member_indices.push_back(i);
      v.truth.push_back(ds.class_labels[i] == dc);
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// ROC-AUC

/// Mann-Whitney AUC with average ranks for ties; outliers are positives.
inline double roc_auc(const std::vector<double>& scores, const std::vector<bool>& truth) {
  if (scores.size() != truth.size()) throw ParameterError("scores and truth differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  double rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t t = i; t < j; ++t) {
      if (truth[order[t]]) {
        rank_sum += avg_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw UndefinedAucError("ROC-AUC needs both outliers and inliers");
  const double p = static_cast<double>(positives);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

inline double roc_auc(const ScoreVector& sv) { return roc_auc(sv.scores, sv.truth); }

// ---------------------------------------------------------------------------
// Method specification

enum class Embedder { wl, pk, fgsd };
enum class Detector { lof, ocsvm, iforest };
enum class FeatureMode { recompute, slice };

inline const char* to_string(Embedder e) {
  switch (e) {
    case Embedder::wl: return "wl";
    case Embedder::pk: return "pk";
    case Embedder::fgsd: return "fgsd";
  }
  return "?";
}
inline const char* to_string(Detector d) {
  switch (d) {
    case Detector::lof: return "lof";
    case Detector::ocsvm: return "ocsvm";
    case Detector::iforest: return "iforest";
  }
  return "?";
}
inline const char* to_string(FeatureMode m) { return m == FeatureMode::recompute ? "recompute" : "slice"; }

struct MethodSpec {
  Embedder embedder = Embedder::wl;
  Detector detector = Detector::lof;
  std::size_t iterations = 5;
  double bin_width = 0.1;
  std::size_t lof_k = 20;
  double nu = 0.1;
  std::size_t trees = 100;
  std::size_t subsample = 256;
  FgsdOptions fgsd;
  std::uint64_t hash_seed = 0;

  bool is_kernel() const { return embedder != Embedder::fgsd; }

  std::string label() const { return std::string(to_string(embedder)) + "+" + to_string(detector); }

  /// Every parameter that influences scores.
  std::string config_string() const {
    std::string s = label();
    if (is_kernel()) s += ";L=" + std::to_string(iterations);
    if (embedder == Embedder::pk) s += ";w=" + fmt_num(bin_width);
    if (embedder == Embedder::fgsd) {
      s += ";bins=" + std::to_string(fgsd.bins) + ";range=" + fmt_num(fgsd.range_max) +
           ";max_nodes=" + std::to_string(fgsd.max_nodes);
    }
    switch (detector) {
      case Detector::lof: s += ";k=" + std::to_string(lof_k); break;
      case Detector::ocsvm: s += ";nu=" + fmt_num(nu); break;
      case Detector::iforest:
        s += ";trees=" + std::to_string(trees) + ";subsample=" + std::to_string(subsample);
        break;
    }
    s += ";hash_seed=" + std::to_string(hash_seed);
    return s;
  }

  void validate() const {
    if (detector == Detector::iforest && is_kernel()) {
      throw ParameterError("kernel matrix not supported by this detector (iforest pairs only with fgsd)");
    }
  }

  /// Parses "<embedder>+<detector>", e.g. "wl+lof".
  static MethodSpec parse(const std::string& text) {
    const auto plus = text.find('+');
    const auto emb = text.substr(0, plus);
    const auto det = plus == std::string::npos ? std::string() : text.substr(plus + 1);
    MethodSpec m;
    if (emb == "wl") m.embedder = Embedder::wl;
    else if (emb == "pk") m.embedder = Embedder::pk;
    else if (emb == "fgsd") m.embedder = Embedder::fgsd;
    else throw ParameterError("unknown method '" + text + "'; valid embedders: wl, pk, fgsd");
    if (det == "lof") m.detector = Detector::lof;
    else if (det == "ocsvm") m.detector = Detector::ocsvm;
    else if (det == "iforest") m.detector = Detector::iforest;
    else throw ParameterError("unknown method '" + text + "'; valid detectors: lof, ocsvm, iforest");
    m.validate();
    return m;
  }
};

// ---------------------------------------------------------------------------
// Pipeline

/// What a detector consumes: a normalized kernel (WL/PK) or an embedding (FGSD).
struct DetectorInput {
  Eigen::MatrixXd normalized_kernel;
  Eigen::MatrixXd embedding;
  bool kernel_based = true;

  DetectorInput slice(const std::vector<std::size_t>& idx) const {
    DetectorInput out;
    out.kernel_based = kernel_based;
    const auto n = static_cast<Eigen::Index>(idx.size());
    if (kernel_based) {
      out.normalized_kernel.resize(n, n);
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
          out.normalized_kernel(i, j) = normalized_kernel(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                                                          static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
        }
      }
    } else {
      out.embedding.resize(n, embedding.cols());
      for (Eigen::Index i = 0; i < n; ++i) {
        out.embedding.row(i) = embedding.row(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]));
      }
    }
    return out;
  }

  /// Similarity in [0,1] used by the diagnostics.
  Eigen::MatrixXd similarity() const {
    return kernel_based ? normalized_kernel : distance_to_similarity(euclidean_distances(embedding));
  }
};

inline std::uint64_t members_hash(const GraphDataset& ds) {
  std::uint64_t h = fnv1a(ds.name);
  for (const auto& g : ds.graphs) {
    h = fnv1a(std::to_string(g.node_count()) + ":" + std::to_string(g.edge_count()) + ";", h);
    for (auto [u, v] : g.edges()) h = fnv1a(std::to_string(u) + "-" + std::to_string(v) + ",", h);
    for (auto l : g.labels()) h = fnv1a(std::to_string(l) + ",", h);
  }
  return h;
}

inline KernelMatrix compute_kernel(const GraphDataset& ds, Embedder embedder, std::size_t iterations,
                                   double bin_width, std::uint64_t seed, bool keep_per_iteration,
                                   const KernelCache* cache = nullptr) {
  std::string key;
  if (cache) {
    key = KernelCache::key(ds.name, to_string(embedder), iterations, embedder == Embedder::pk ? bin_width : 0.0,
                           embedder == Embedder::pk ? seed : 0, members_hash(ds));
    if (auto hit = cache->load(key); hit && (!keep_per_iteration || !hit->per_iteration.empty())) return *hit;
  }
  auto km = embedder == Embedder::wl ? wl_kernel(ds, iterations, keep_per_iteration)
                                     : pk_kernel(ds, iterations, bin_width, seed, keep_per_iteration);
  if (cache) cache->store(key, km);
  return km;
}

inline DetectorInput compute_input(const GraphDataset& ds, const MethodSpec& m, std::uint64_t feature_seed,
                                   const KernelCache* cache = nullptr) {
  DetectorInput in;
  in.kernel_based = m.is_kernel();
  if (m.is_kernel()) {
    in.normalized_kernel =
        compute_kernel(ds, m.embedder, m.iterations, m.bin_width, feature_seed, false, cache).normalized_cumulative();
  } else {
    in.embedding = fgsd_embed(ds, m.fgsd).vectors;
  }
  return in;
}

inline ScoreVector detect(const DetectorInput& in, const MethodSpec& m, std::uint64_t seed) {
  m.validate();
  ScoreVector sv;
  switch (m.detector) {
    case Detector::lof:
      sv = lof(in.kernel_based ? distance_from_similarity(in.normalized_kernel) : euclidean_distances(in.embedding),
               m.lof_k);
      break;
    case Detector::ocsvm:
      sv = ocsvm(in.kernel_based ? in.normalized_kernel : rbf_kernel_scaled(in.embedding), m.nu);
      break;
    case Detector::iforest:
      sv = isolation_forest(in.embedding, {m.trees, m.subsample, seed});
      break;
  }
  sv.method = m.label();
  sv.config["method"] = m.config_string();
  return sv;
}

struct BenchOptions {
  double rate = 0.1;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  FeatureMode mode = FeatureMode::recompute;
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> cache_dir;
};

struct SeedResult {
  std::uint64_t seed = 0;
  double auc = 0.0;
  std::size_t inliers = 0;
  std::size_t outliers = 0;
};

struct VariantResult {
  std::string dataset;
  std::string method;  // label, e.g. "wl+lof"
  std::string config;  // MethodSpec::config_string()
  int dc = 0;
  double rate = 0.1;
  std::size_t iterations = 0;
  FeatureMode mode = FeatureMode::recompute;
  std::vector<SeedResult> runs;
  double mean_auc = 0.0;
  double std_auc = 0.0;  // population standard deviation over seeds
};

inline void summarize(VariantResult& r) {
  double sum = 0.0;
  for (const auto& s : r.runs) sum += s.auc;
  r.mean_auc = sum / static_cast<double>(r.runs.size());
  double sq = 0.0;
  for (const auto& s : r.runs) sq += (s.auc - r.mean_auc) * (s.auc - r.mean_auc);
  r.std_auc = std::sqrt(sq / static_cast<double>(r.runs.size()));
}

/// Builds one variant per seed, scores it and reports the AUC statistics.
///
/// In recompute mode the kernel is rebuilt on each variant (label table and
/// hashes fitted to the variant; the PK hash seed is hash_seed + seed). In
/// slice mode features are computed once on the full dataset and
/// restricted to the variant members. FGSD embeddings are per-graph, so both
/// modes compute them once and slice.
inline VariantResult run_benchmark(const GraphDataset& ds, const MethodSpec& m, int dc,
                                   const BenchOptions& opt = {}) {
  m.validate();
  if (opt.seeds.empty()) throw ParameterError("at least one seed is required");
  std::optional<KernelCache> cache;
  if (opt.cache_dir) cache.emplace(*opt.cache_dir);
  const KernelCache* cache_ptr = cache ? &*cache : nullptr;

  std::optional<DetectorInput> shared;
  if (opt.mode == FeatureMode::slice || !m.is_kernel()) shared = compute_input(ds, m, m.hash_seed, cache_ptr);

  VariantResult r;
  r.dataset = ds.name;
  r.method = m.label();
  r.config = m.config_string();
  r.dc = dc;
  r.rate = opt.rate;
  r.iterations = m.is_kernel() ? m.iterations : 0;
  r.mode = opt.mode;
  r.runs.resize(opt.seeds.size());

  parallel_for(opt.seeds.size(), opt.jobs, [&](std::size_t i) {
    const auto seed = opt.seeds[i];
    const auto variant = downsample(ds, dc, opt.rate, seed);
    const auto input = shared ? shared->slice(variant.member_indices)
                              : compute_input(ds.subset(variant.member_indices), m, m.hash_seed + seed, cache_ptr);
    auto sv = detect(input, m, m.hash_seed + seed);
    sv.truth = variant.truth;
    r.runs[i] = {seed, roc_auc(sv), variant.member_indices.size() - variant.outlier_count(), variant.outlier_count()};
  });
  summarize(r);
  return r;
}

/// Long-format AUC table over rates for both down-sampled classes.
inline std::vector<VariantResult> sweep_rate(const GraphDataset& ds, const MethodSpec& m,
                                             const std::vector<double>& rates, BenchOptions opt = {}) {
  std::vector<VariantResult> out;
  for (int dc : {0, 1}) {
    for (double rate : rates) {
      opt.rate = rate;
      out.push_back(run_benchmark(ds, m, dc, opt));
    }
  }
  return out;
}

struct IterationRow {
  std::size_t iterations = 0;
  VariantResult variant0;
  VariantResult variant1;
  double gap() const { return std::abs(variant0.mean_auc - variant1.mean_auc); }
};

inline std::vector<IterationRow> sweep_iterations(const GraphDataset& ds, MethodSpec m,
                                                  const std::vector<std::size_t>& iterations,
                                                  const BenchOptions& opt = {}) {
  if (!m.is_kernel()) throw ParameterError("iteration sweeps need a propagation kernel (wl or pk)");
  std::vector<IterationRow> out;
  for (auto l : iterations) {
    m.iterations = l;
    out.push_back({l, run_benchmark(ds, m, 0, opt), run_benchmark(ds, m, 1, opt)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flip reports

enum class FlipClass { both_worse_than_random, both_better_than_random, performance_flip, indeterminate };

inline const char* to_string(FlipClass c) {
  switch (c) {
    case FlipClass::both_worse_than_random: return "both_worse_than_random";
    case FlipClass::both_better_than_random: return "both_better_than_random";
    case FlipClass::performance_flip: return "performance_flip";
    case FlipClass::indeterminate: return "indeterminate";
  }
  return "?";
}

/// Strict comparisons against 0.5; any exact 0.5 that prevents a strict
/// classification yields `indeterminate`.
inline FlipClass classify_flip(double auc0, double auc1) {
  const double lo = std::min(auc0, auc1);
  const double hi = std::max(auc0, auc1);
  if (lo < 0.5 && 0.5 < hi) return FlipClass::performance_flip;
  if (lo > 0.5) return FlipClass::both_better_than_random;
  if (hi < 0.5) return FlipClass::both_worse_than_random;
  return FlipClass::indeterminate;
}

struct FlipReport {
  std::string dataset;
  std::string method;
  double auc0 = 0.0, std0 = 0.0;
  double auc1 = 0.0, std1 = 0.0;
  double gap = 0.0;
  double auc_sum = 0.0;
  FlipClass classification = FlipClass::indeterminate;
};

inline FlipReport make_flip_report(const std::string& dataset, const std::string& method, double auc0,
                                   double auc1, double std0 = 0.0, double std1 = 0.0) {
  FlipReport f;
  f.dataset = dataset;
  f.method = method;
  f.auc0 = auc0;
  f.auc1 = auc1;
  f.std0 = std0;
  f.std1 = std1;
  f.gap = std::abs(auc0 - auc1);
  f.auc_sum = auc0 + auc1;
  f.classification = classify_flip(auc0, auc1);
  return f;
}

/// Pairs the two down-sampled variants of one (dataset, method) run.
inline FlipReport flip_report(const VariantResult& a, const VariantResult& b) {
  if (a.dataset != b.dataset || a.config != b.config || a.rate != b.rate || a.mode != b.mode ||
      a.runs.size() != b.runs.size()) {
    throw ParameterError("flip report: variants differ in configuration beyond the down-sampled class");
  }
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    if (a.runs[i].seed != b.runs[i].seed) throw ParameterError("flip report: variants use different seeds");
  }
  if (a.dc == b.dc) throw ParameterError("flip report: both variants down-sample the same class");
  const auto& v0 = a.dc < b.dc ? a : b;
  const auto& v1 = a.dc < b.dc ? b : a;
  return make_flip_report(a.dataset, a.method, v0.mean_auc, v1.mean_auc, v0.std_auc, v1.std_auc);
}

// ---------------------------------------------------------------------------
// CSV schemas

inline std::string results_csv(const std::vector<VariantResult>& rs) {
  std::string s = "dataset,method,dc,rate,L,seed,auc\n";
  for (const auto& r : rs) {
    for (const auto& run : r.runs) {
      s += r.dataset + "," + r.method + "," + std::to_string(r.dc) + "," + fmt_num(r.rate) + "," +
           std::to_string(r.iterations) + "," + std::to_string(run.seed) + "," + fmt_num(run.auc) + "\n";
    }
  }
  return s;
}

inline std::string summary_csv(const std::vector<VariantResult>& rs) {
  std::string s = "dataset,method,dc,mean_auc,std,rate,L,features\n";
  for (const auto& r : rs) {
    s += r.dataset + "," + r.method + "," + std::to_string(r.dc) + "," + fmt_num(r.mean_auc) + "," +
         fmt_num(r.std_auc) + "," + fmt_num(r.rate) + "," + std::to_string(r.iterations) + "," +
         to_string(r.mode) + "\n";
  }
  return s;
}

inline std::string flip_csv(const std::vector<FlipReport>& fs) {
  std::string s = "dataset,method,auc0,auc1,gap,sum,classification\n";
  for (const auto& f : fs) {
    s += f.dataset + "," + f.method + "," + fmt_num(f.auc0) + "," + fmt_num(f.auc1) + "," + fmt_num(f.gap) + "," +
         fmt_num(f.auc_sum) + "," + to_string(f.classification) + "\n";
  }
  return s;
}

}  // namespace glod
