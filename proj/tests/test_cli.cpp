#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kData = GLOD_TEST_DATA;

fs::path scratch(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("glod_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args, const std::string& env = "") {
  const auto log = fs::temp_directory_path() / ("glod_cli_log_" + std::to_string(::getpid()));
  const auto cmd = env + " " + std::string(GLOD_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  const auto s = slurp(p);
  return s.substr(0, s.find('\n'));
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("sweep-rate"), std::string::npos);
  EXPECT_EQ(run("bench --help").code, 0);
  EXPECT_EQ(run("--version").code, 0);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("bench --dataset MUTAG --L notanumber").code, 2);

  const auto unknown = run("bench --data-dir " + kData + " --dataset NOPE");
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.output.find("MUTAG"), std::string::npos);
  EXPECT_NE(unknown.output.find("IMDB-BINARY"), std::string::npos);

  const auto bad_method = run("bench --data-dir " + kData + " --dataset MUTAG --method wl+gin");
  EXPECT_EQ(bad_method.code, 2);
  EXPECT_NE(bad_method.output.find("lof, ocsvm, iforest"), std::string::npos);

  const auto pairing = run("bench --data-dir " + kData + " --dataset MUTAG --method pk+iforest");
  EXPECT_EQ(pairing.code, 2);
  EXPECT_NE(pairing.output.find("kernel matrix not supported by this detector"), std::string::npos);

  EXPECT_EQ(run("sim --n 9 --k 3").code, 2);
}

TEST(Cli, RuntimeErrorsExitOne) {
  const auto dir = scratch("broken");
  fs::create_directories(dir / "BAD");
  std::ofstream(dir / "BAD" / "BAD_A.txt") << "1, 2\n2, 9\n";
  std::ofstream(dir / "BAD" / "BAD_graph_indicator.txt") << "1\n1\n";
  std::ofstream(dir / "BAD" / "BAD_graph_labels.txt") << "0\n";
  const auto r = run("bench --data-dir " + dir.string() + " --dataset BAD --out " + (dir / "o").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("BAD_A.txt:2"), std::string::npos);
}

TEST(Cli, BenchWritesReproducibleOutputs) {
  const auto dir = scratch("bench");
  const auto args = " --dataset MUTAG --method pk+lof --seeds 3 --jobs 2";
  ASSERT_EQ(run("bench" + std::string(args) + " --out " + (dir / "a").string(), "GLOD_DATA_DIR=" + kData).code, 0);
  ASSERT_EQ(run("bench --data-dir " + kData + args + " --out " + (dir / "b").string() + " --cache-dir " +
                (dir / "cache").string())
                .code,
            0);
  ASSERT_EQ(run("bench --data-dir " + kData + args + " --out " + (dir / "c").string(),
                "GLOD_CACHE_DIR=" + (dir / "cache").string())
                .code,
            0);
  for (const char* f : {"results.csv", "summary.csv", "flip.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
  }
  for (const char* f : {"results.csv", "summary.csv", "flip.csv"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "c" / f)) << f;
  }
  EXPECT_FALSE(fs::is_empty(dir / "cache"));
  EXPECT_EQ(first_line(dir / "a" / "summary.csv"), "dataset,method,dc,mean_auc,std,rate,L,features");
  EXPECT_EQ(first_line(dir / "a" / "results.csv"), "dataset,method,dc,rate,L,seed,auc");

  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  EXPECT_EQ(manifest["tool"], "glod 0.1.0");
  EXPECT_EQ(manifest["config"]["seeds"], nlohmann::json({0, 1, 2}));
  EXPECT_EQ(manifest["config"]["method"]["config"], "pk+lof;L=5;w=0.1;k=20;hash_seed=0");
  EXPECT_EQ(manifest["config"]["input_hash"].get<std::string>().size(), 16u);
}

TEST(Cli, SimCsv) {
  const auto dir = scratch("sim");
  ASSERT_EQ(run("sim --case 2 --n 20 --k 3 --r 1,3 --iters 4 --rounds 5 --out " + dir.string()).code, 0);
  const auto csv = slurp(dir / "sim.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "case,n,k,magnitude,iteration,mean_distance,std,rounds");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  ASSERT_EQ(run("sim --case 1 --n 12 --vary-k 3,11 --m 2 --iters 3 --rounds 2 --out " + dir.string()).code, 0);
}

TEST(Cli, DiagBundle) {
  const auto dir = scratch("diag");
  ASSERT_EQ(run("diag --data-dir " + kData + " --dataset MUTAG --method wl --iters 1,2 --grouping outlier --dc 0 --out " +
                dir.string())
                .code,
            0);
  EXPECT_EQ(first_line(dir / "mds_L2.csv"), "index,x,y,group");
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["grouping"], "outlier");
  EXPECT_EQ(manifest["variant"]["outliers"], 6);
  EXPECT_EQ(manifest["files"].size(), 10u);
}

TEST(Cli, FlipTable) {
  const auto dir = scratch("flip");
  fs::create_directories(dir / "in");
  std::ofstream(dir / "in" / "summary.csv") << "dataset,method,dc,mean_auc,std,rate,L,features\n"
                                               "X,wl+lof,0,0.5,0,0.1,5,recompute\n"
                                               "X,wl+lof,1,0.5,0,0.1,5,recompute\n"
                                               "Y,pk+lof,0,0.186,0,0.1,5,recompute\n"
                                               "Y,pk+lof,1,0.815,0,0.1,5,recompute\n"
                                               "Z,wl+ocsvm,1,0.7,0,0.1,5,recompute\n";
  ASSERT_EQ(run("flip-table --in " + (dir / "in").string() + " --out " + (dir / "out").string()).code, 0);
  const auto table = slurp(dir / "out" / "flip_table.csv");
  EXPECT_NE(table.find("X,wl+lof,0.5,0.5,0,1,indeterminate"), std::string::npos) << table;
  EXPECT_NE(table.find("Y,pk+lof,0.186,0.815,0.629,1.001,performance_flip"), std::string::npos) << table;
  EXPECT_NE(table.find("Z,wl+ocsvm,,0.7,,,incomplete"), std::string::npos) << table;
  const auto stats = slurp(dir / "out" / "flip_stats.csv");
  EXPECT_NE(stats.find("gap_ge_0.2,0.5,1,2"), std::string::npos) << stats;
  EXPECT_EQ(run("flip-table --in " + (dir / "missing").string()).code, 2);
}

TEST(Cli, FlipTableFromSingleBench) {
  const auto dir = scratch("flip1");
  ASSERT_EQ(run("bench --data-dir " + kData + " --dataset MUTAG --seeds 2 --out " + (dir / "r").string()).code, 0);
  ASSERT_EQ(run("flip-table --in " + (dir / "r").string() + " --out " + (dir / "t").string()).code, 0);
  const auto table = slurp(dir / "t" / "flip_table.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 2);
}
