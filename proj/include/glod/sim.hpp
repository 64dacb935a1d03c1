#pragma once

// Controlled perturbation experiments on k-regular graphs: how fast the WL
// distance between two nearly identical graphs grows with iterations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "glod/generators.hpp"
#include "glod/graph.hpp"
#include "glod/io.hpp"
#include "glod/kernels.hpp"

namespace glod {

enum class SimCase { label_flip = 1, edge_rewire = 2 };

struct SimConfig {
  std::size_t n = 50;
  std::size_t k = 5;
  SimCase sim_case = SimCase::label_flip;
  std::vector<std::size_t> magnitudes{1, 2, 5, 10};  // m (case 1) or r (case 2)
  std::size_t iterations = 10;
  std::size_t rounds = 100;
  std::uint64_t seed = 0;

  void validate() const {
    if (rounds < 1) throw ParameterError("rounds must be >= 1");
    if ((n * k) % 2 != 0) throw ParameterError("n*k must be even");
    if (k >= n) throw ParameterError("k must be < n");
  }
};

/// Distance curve for one magnitude, iterations 0..L.
struct SimCurve {
  std::size_t n = 0;
  std::size_t k = 0;
  SimCase sim_case = SimCase::label_flip;
  std::size_t magnitude = 0;
  std::size_t rounds = 0;
  std::vector<double> mean;
  std::vector<double> std;  // sample standard deviation over rounds (0 for one round)

  double standard_error(std::size_t l) const {
    return rounds > 1 ? std[l] / std::sqrt(static_cast<double>(rounds)) : 0.0;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t round, std::uint64_t stream) {
  return splitmix64(splitmix64(splitmix64(seed) ^ round) ^ stream);
}

}  // namespace detail

/// 1 - normalized cumulative WL similarity of (a, b) for L = 0..iterations.
inline std::vector<double> wl_distance_curve(const Graph& a, const Graph& b, std::size_t iterations,
                                             std::size_t alphabet_size) {
  GraphDataset pair;
  pair.name = "pair";
  pair.graphs = {a, b};
  pair.class_labels = {0, 1};
  pair.label_alphabet_size = alphabet_size;
  const auto km = wl_kernel(pair, iterations);
  std::vector<double> out;
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (const auto& slice : km.per_iteration) {
    aa += slice(0, 0);
    bb += slice(1, 1);
    ab += slice(0, 1);
    const double sim = (aa > 0.0 && bb > 0.0) ? ab / std::sqrt(aa * bb) : 0.0;
    out.push_back(std::clamp(1.0 - sim, 0.0, 1.0));
  }
  return out;
}

namespace detail {

/// One round: fresh base graph, perturbed copies, distance per iteration.
inline std::vector<double> simulate_round(const SimConfig& cfg, std::size_t magnitude, std::size_t round) {
  constexpr LabelId A = 0;
  constexpr LabelId B = 1;
  const auto base = generate_k_regular(cfg.n, cfg.k, derive_seed(cfg.seed, round, 0));
  if (cfg.sim_case == SimCase::label_flip) {
    if (magnitude > cfg.n) throw ParameterError("cannot flip more labels than nodes");
    const auto g1 = flip_labels(base, magnitude, A, B, derive_seed(cfg.seed, round, 1));
    const auto g2 = flip_labels(base, magnitude, A, B, derive_seed(cfg.seed, round, 2));
    return wl_distance_curve(g1, g2, cfg.iterations, 2);
  }
  std::mt19937_64 rng(derive_seed(cfg.seed, round, 3));
  std::bernoulli_distribution coin(0.5);
  std::vector<LabelId> labels(cfg.n);
  for (auto& l : labels) l = coin(rng) ? B : A;
  const auto labeled = base.with_labels(std::move(labels));
  const auto rewired = rewire_edges(labeled, magnitude, derive_seed(cfg.seed, round, 4));
  return wl_distance_curve(labeled, rewired, cfg.iterations, 2);
}

}  // namespace detail

/// Averages one curve per magnitude over cfg.rounds rounds. Round r uses the
/// same base graph for every magnitude.
inline std::vector<SimCurve> simulate(const SimConfig& cfg) {
  cfg.validate();
  std::vector<SimCurve> curves;
  for (auto magnitude : cfg.magnitudes) {
    SimCurve c;
    c.n = cfg.n;
    c.k = cfg.k;
    c.sim_case = cfg.sim_case;
    c.magnitude = magnitude;
    c.rounds = cfg.rounds;
    std::vector<double> sum(cfg.iterations + 1, 0.0);
    std::vector<double> sq(cfg.iterations + 1, 0.0);
    for (std::size_t r = 0; r < cfg.rounds; ++r) {
      const auto d = detail::simulate_round(cfg, magnitude, r);
      for (std::size_t l = 0; l < d.size(); ++l) {
        sum[l] += d[l];
        sq[l] += d[l] * d[l];
      }
    }
    const auto rounds = static_cast<double>(cfg.rounds);
    for (std::size_t l = 0; l <= cfg.iterations; ++l) {
      const double mean = sum[l] / rounds;
      c.mean.push_back(mean);
      const double var = cfg.rounds > 1 ? std::max(0.0, (sq[l] - rounds * mean * mean) / (rounds - 1.0)) : 0.0;
      c.std.push_back(std::sqrt(var));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

inline std::vector<SimCurve> case1_curve(SimConfig cfg) {
  cfg.sim_case = SimCase::label_flip;
  return simulate(cfg);
}

inline std::vector<SimCurve> case2_curve(SimConfig cfg) {
  cfg.sim_case = SimCase::edge_rewire;
  return simulate(cfg);
}

/// One curve per k with a fixed perturbation magnitude.
inline std::vector<SimCurve> vary_k_curve(std::size_t n, const std::vector<std::size_t>& ks, SimCase sim_case,
                                          std::size_t magnitude, std::size_t iterations, std::size_t rounds,
                                          std::uint64_t seed) {
  std::vector<SimCurve> out;
  for (auto k : ks) {
    SimConfig cfg{n, k, sim_case, {magnitude}, iterations, rounds, seed};
    out.push_back(simulate(cfg).front());
  }
  return out;
}

inline std::string sim_csv(const std::vector<SimCurve>& curves) {
  std::string s = "case,n,k,magnitude,iteration,mean_distance,std,rounds\n";
  for (const auto& c : curves) {
    for (std::size_t l = 0; l < c.mean.size(); ++l) {
      s += std::to_string(static_cast<int>(c.sim_case)) + "," + std::to_string(c.n) + "," + std::to_string(c.k) +
           "," + std::to_string(c.magnitude) + "," + std::to_string(l) + "," + fmt_num(c.mean[l]) + "," +
           fmt_num(c.std[l]) + "," + std::to_string(c.rounds) + "\n";
    }
  }
  return s;
}

}  // namespace glod
