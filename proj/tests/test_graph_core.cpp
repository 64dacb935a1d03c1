#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <unistd.h>

#include "glod/generators.hpp"
#include "glod/tu_format.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace glod;

namespace {

fs::path scratch_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("glod_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v < n; ++v) e.emplace_back(v, static_cast<NodeId>((v + 1) % n));
  return Graph(n, e, std::vector<LabelId>(n, 0));
}

bool simple_and_regular(const Graph& g, std::size_t k) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) != k) return false;
  }
  return true;  // Graph's constructor rejects loops and duplicate edges
}

}  // namespace

TEST(Graph, RejectsSelfLoopsAndDuplicates) {
  EXPECT_THROW(Graph(2, {{0, 0}}, {0, 0}), ParameterError);
  EXPECT_THROW(Graph(2, {{0, 1}, {1, 0}}, {0, 0}), ParameterError);
  EXPECT_THROW(Graph(2, {{0, 2}}, {0, 0}), ParameterError);
}

TEST(TuFormat, LoadsMutagWithSignedClassLabels) {
  const auto ds = load_tu_dataset(fs::path(GLOD_TEST_DATA) / "MUTAG", "MUTAG");
  EXPECT_EQ(ds.size(), 188u);
  // {-1, 1} maps to {0, 1} by sorted value.
  EXPECT_EQ(ds.class_count(0), 63u);
  EXPECT_EQ(ds.class_count(1), 125u);
  EXPECT_EQ(ds.label_alphabet_size, 7u);
  std::size_t edges = 0;
  for (const auto& g : ds.graphs) edges += g.edge_count();
  EXPECT_EQ(edges, 7442u / 2);  // both directions listed in the file
  EXPECT_NO_THROW(ds.validate());
}

TEST(TuFormat, SingleNodeGraphWithEmptyEdgeFile) {
  const auto dir = scratch_dir("single");
  write_file(dir / "X_A.txt", "");
  write_file(dir / "X_graph_indicator.txt", "1\n");
  write_file(dir / "X_graph_labels.txt", "1\n");
  const auto ds = load_tu_dataset(dir, "X");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.graphs[0].node_count(), 1u);
  EXPECT_EQ(ds.graphs[0].edge_count(), 0u);
  EXPECT_EQ(ds.label_alphabet_size, 1u);
}

TEST(TuFormat, MissingFileIsNamed) {
  const auto dir = scratch_dir("missing");
  write_file(dir / "X_A.txt", "1, 2\n");
  write_file(dir / "X_graph_indicator.txt", "1\n1\n");
  try {
    load_tu_dataset(dir, "X");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("X_graph_labels.txt"), std::string::npos);
  }
}

TEST(TuFormat, UnknownNodeReportsLineNumber) {
  const auto dir = scratch_dir("unknown");
  write_file(dir / "X_A.txt", "1, 2\n2, 1\n2, 7\n");
  write_file(dir / "X_graph_indicator.txt", "1\n1\n");
  write_file(dir / "X_graph_labels.txt", "0\n");
  try {
    load_tu_dataset(dir, "X");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("X_A.txt:3"), std::string::npos) << e.what();
  }
}

TEST(TuFormat, CompactsLabelsAndCollapsesReciprocalEdges) {
  const auto dir = scratch_dir("compact");
  // graph 1: nodes 1-3 (path), graph 2: nodes 4-5; class labels {1,2}
  write_file(dir / "X_A.txt", "1, 2\n2, 1\n2, 3\n3, 2\n2,3\n4, 5\n");
  write_file(dir / "X_graph_indicator.txt", "1\n1\n1\n2\n2\n");
  write_file(dir / "X_graph_labels.txt", "2\n1\n");
  write_file(dir / "X_node_labels.txt", "10\n30\n10\n30\n50\n");
  const auto ds = load_tu_dataset(dir, "X");
  EXPECT_EQ(ds.class_labels, (std::vector<int>{1, 0}));
  EXPECT_EQ(ds.label_alphabet_size, 3u);
  EXPECT_EQ(ds.graphs[0].labels(), (std::vector<LabelId>{0, 1, 0}));
  EXPECT_EQ(ds.graphs[1].labels(), (std::vector<LabelId>{1, 2}));
  EXPECT_EQ(ds.graphs[0].edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(TuFormat, UnlabeledDatasetGetsDegreeLabels) {
  const auto dir = scratch_dir("unlabeled");
  // star with 3 leaves plus a triangle
  write_file(dir / "S_A.txt", "1, 2\n1, 3\n1, 4\n5, 6\n6, 7\n7, 5\n");
  write_file(dir / "S_graph_indicator.txt", "1\n1\n1\n1\n2\n2\n2\n");
  write_file(dir / "S_graph_labels.txt", "0\n1\n");
  const auto ds = load_tu_dataset(dir, "S");
  // degrees present: 1, 2, 3 -> ids 0, 1, 2
  EXPECT_EQ(ds.label_alphabet_size, 3u);
  EXPECT_EQ(ds.graphs[0].labels(), (std::vector<LabelId>{2, 0, 0, 0}));
  EXPECT_EQ(ds.graphs[1].labels(), (std::vector<LabelId>{1, 1, 1}));
}

TEST(TuFormat, RoundTripIsIdentity) {
  const auto ds = load_tu_dataset(fs::path(GLOD_TEST_DATA) / "MUTAG", "MUTAG");
  const auto dir = scratch_dir("roundtrip");
  write_tu_dataset(ds, dir);
  EXPECT_EQ(load_tu_dataset(dir, "MUTAG"), ds);
}

TEST(DegreeLabeling, TriangleAndStar) {
  GraphDataset ds;
  ds.name = "t";
  ds.graphs = {Graph(3, {{0, 1}, {1, 2}, {0, 2}}, {5, 6, 7})};
  ds.class_labels = {0};
  ds.label_alphabet_size = 8;
  auto tri = degree_labeling(ds);
  EXPECT_EQ(tri.label_alphabet_size, 1u);
  EXPECT_EQ(tri.graphs[0].labels(), (std::vector<LabelId>{0, 0, 0}));

  ds.graphs = {Graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, {0, 0, 0, 0, 0})};
  auto star = degree_labeling(ds);
  EXPECT_EQ(star.label_alphabet_size, 2u);
  EXPECT_EQ(star.graphs[0].labels(), (std::vector<LabelId>{1, 0, 0, 0, 0}));
  // input untouched
  EXPECT_EQ(ds.graphs[0].labels(), (std::vector<LabelId>{0, 0, 0, 0, 0}));
}

TEST(KRegular, PetersenSizedInstance) {
  const auto g = generate_k_regular(10, 3, 7);
  EXPECT_EQ(g.edge_count(), 15u);
  EXPECT_TRUE(simple_and_regular(g, 3));
}

TEST(KRegular, FourNodesCubicIsK4) {
  const auto g = generate_k_regular(4, 3, 123);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
}

TEST(KRegular, ParameterErrors) {
  EXPECT_THROW(generate_k_regular(5, 3, 0), ParameterError);
  EXPECT_THROW(generate_k_regular(4, 4, 0), ParameterError);
}

TEST(KRegular, DegreeAuditAcrossParameters) {
  for (std::size_t n : {6u, 10u, 20u, 50u}) {
    for (std::size_t k = 0; k < n; ++k) {
      if ((n * k) % 2) continue;
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto g = generate_k_regular(n, k, seed);
        ASSERT_TRUE(simple_and_regular(g, k)) << "n=" << n << " k=" << k << " seed=" << seed;
      }
    }
  }
}

TEST(KRegular, DeterministicGivenSeed) {
  EXPECT_EQ(generate_k_regular(50, 5, 42), generate_k_regular(50, 5, 42));
  EXPECT_NE(generate_k_regular(50, 5, 42), generate_k_regular(50, 5, 43));
}

TEST(FlipLabels, Basics) {
  const auto g = generate_k_regular(10, 3, 1);
  EXPECT_EQ(flip_labels(g, 0, 0, 1, 9), g);
  const auto all = flip_labels(g, 10, 0, 1, 9);
  for (auto l : all.labels()) EXPECT_EQ(l, 1u);
  const auto one = flip_labels(g, 1, 0, 1, 9);
  EXPECT_EQ(std::count(one.labels().begin(), one.labels().end(), 0u), 9);
  EXPECT_EQ(std::count(one.labels().begin(), one.labels().end(), 1u), 1);
  EXPECT_EQ(one.edges(), g.edges());
  EXPECT_THROW(flip_labels(g, 11, 0, 1, 9), ParameterError);
  EXPECT_THROW(flip_labels(all, 1, 0, 1, 9), ParameterError);
}

TEST(FlipLabels, ChangesExactlyMEntries) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_labeled_graph(30, 0.1, 3, rng);
    const auto candidates = static_cast<std::size_t>(std::count(g.labels().begin(), g.labels().end(), 0u));
    const auto m = std::uniform_int_distribution<std::size_t>(0, candidates)(rng);
    const auto f = flip_labels(g, m, 0, 7, rng());
    std::size_t changed = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (f.label(v) != g.label(v)) {
        ++changed;
        EXPECT_EQ(g.label(v), 0u);
        EXPECT_EQ(f.label(v), 7u);
      }
    }
    EXPECT_EQ(changed, m);
    EXPECT_EQ(f.edges(), g.edges());
  }
}

TEST(Rewire, ZeroIsIdentity) {
  const auto g = generate_k_regular(12, 3, 2);
  EXPECT_EQ(rewire_edges(g, 0, 1), g);
}

TEST(Rewire, FourCycleSwapGivesAnotherFourCycle) {
  // The only admissible swaps of C4 turn it into one of the two other
  // Hamiltonian cycles on {0,1,2,3}; the (0,3),(2,1) outcome is rejected.
  const auto c4 = cycle(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = rewire_edges(c4, 1, seed);
    EXPECT_TRUE(simple_and_regular(g, 2));
    EXPECT_EQ(g.edge_count(), 4u);
    EXPECT_NE(g.edges(), c4.edges());
  }
}

TEST(Rewire, PreservesDegreeSequence) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_connected_graph(25, 0.15, rng);
    const auto r = std::uniform_int_distribution<std::size_t>(0, 30)(rng);
    const auto h = rewire_edges(g, r, rng());
    EXPECT_EQ(h.degree_sequence(), g.degree_sequence());
    EXPECT_EQ(h.labels(), g.labels());
  }
}

TEST(Rewire, Errors) {
  EXPECT_THROW(rewire_edges(Graph(2, {{0, 1}}, {0, 0}), 1, 0), ParameterError);
  // every pair of edges in a star shares the hub
  const Graph star(4, {{0, 1}, {0, 2}, {0, 3}}, {0, 0, 0, 0});
  EXPECT_THROW(rewire_edges(star, 1, 0), GenerationError);
}
