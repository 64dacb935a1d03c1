#include <gtest/gtest.h>

#include "glod/sim.hpp"

using namespace glod;

namespace {

SimConfig config(SimCase c, std::size_t n, std::size_t k, std::vector<std::size_t> mags, std::size_t rounds,
                 std::uint64_t seed = 0) {
  SimConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.sim_case = c;
  cfg.magnitudes = std::move(mags);
  cfg.iterations = 6;
  cfg.rounds = rounds;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(Sim, ZeroPerturbationIsExactlyZero) {
  for (auto c : {SimCase::label_flip, SimCase::edge_rewire}) {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
      const auto curves = simulate(config(c, 20, 3, {0}, 5, seed));
      for (double v : curves[0].mean) EXPECT_EQ(v, 0.0);
      for (double v : curves[0].std) EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(Sim, DistancesInUnitInterval) {
  for (auto c : {SimCase::label_flip, SimCase::edge_rewire}) {
    for (const auto& curve : simulate(config(c, 30, 4, {1, 5, 15}, 10))) {
      ASSERT_EQ(curve.mean.size(), 7u);
      for (double v : curve.mean) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(Sim, LabelFlipLeavesIterationZeroUntouched) {
  // Both copies carry m B-labels, so the label histograms agree. With m = 1
  // on a regular graph the depth-1 signatures agree as well.
  const auto curves = simulate(config(SimCase::label_flip, 10, 3, {1, 3}, 30));
  for (const auto& c : curves) {
    EXPECT_EQ(c.mean[0], 0.0);
    const std::size_t first = c.magnitude == 1 ? 2 : 1;
    if (c.magnitude == 1) {
      EXPECT_EQ(c.mean[1], 0.0);
    }
    for (std::size_t l = first; l < c.mean.size(); ++l) EXPECT_GT(c.mean[l], 0.0) << "m=" << c.magnitude << " l=" << l;
  }
}

TEST(Sim, SingleRewireOnPetersenSizedGraphs) {
  const auto c = simulate(config(SimCase::edge_rewire, 10, 3, {1}, 30)).front();
  EXPECT_EQ(c.mean[0], 0.0);
  for (std::size_t l = 1; l < c.mean.size(); ++l) EXPECT_GT(c.mean[l], 0.0);
}

TEST(Sim, SingleRoundMatchesOneExperiment) {
  const auto cfg = config(SimCase::label_flip, 16, 3, {2}, 1, 5);
  const auto c = simulate(cfg).front();
  EXPECT_EQ(c.mean, detail::simulate_round(cfg, 2, 0));
  for (double s : c.std) EXPECT_EQ(s, 0.0);
  EXPECT_EQ(c.standard_error(3), 0.0);
}

TEST(Sim, ReproducibleGivenSeed) {
  const auto cfg = config(SimCase::edge_rewire, 24, 4, {2, 4}, 8, 3);
  EXPECT_EQ(sim_csv(simulate(cfg)), sim_csv(simulate(cfg)));
  auto other = cfg;
  other.seed = 4;
  EXPECT_NE(sim_csv(simulate(cfg)), sim_csv(simulate(other)));
}

TEST(Sim, WlDistanceCurveIsCumulative) {
  const auto a = generate_k_regular(12, 3, 1);
  const auto b = flip_labels(a, 2, 0, 1, 2);
  const auto curve = wl_distance_curve(a, b, 4, 2);
  GraphDataset pair;
  pair.name = "p";
  pair.graphs = {a, b};
  pair.class_labels = {0, 1};
  pair.label_alphabet_size = 2;
  for (std::size_t l = 0; l <= 4; ++l) {
    const auto s = wl_kernel(pair, l).normalized_cumulative();
    EXPECT_NEAR(curve[l], 1.0 - s(0, 1), 1e-12);
  }
}

TEST(Sim, VaryKIncludingCompleteGraph) {
  const auto curves = vary_k_curve(12, {3, 5, 11}, SimCase::label_flip, 2, 4, 3, 0);
  ASSERT_EQ(curves.size(), 3u);
  EXPECT_EQ(curves[2].k, 11u);
  // every node of K_n is equivalent, so flipped copies are isomorphic
  for (double v : curves[2].mean) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Sim, ParameterErrors) {
  EXPECT_THROW(simulate(config(SimCase::label_flip, 10, 3, {11}, 1)), ParameterError);
  EXPECT_THROW(simulate(config(SimCase::label_flip, 9, 3, {1}, 1)), ParameterError);
  EXPECT_THROW(simulate(config(SimCase::label_flip, 10, 3, {1}, 0)), ParameterError);
}

TEST(Sim, CsvSchema) {
  const auto csv = sim_csv(simulate(config(SimCase::label_flip, 10, 3, {1}, 2)));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "case,n,k,magnitude,iteration,mean_distance,std,rounds");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 8);
}
