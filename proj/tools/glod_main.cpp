#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "glod/glod.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace glod;

/// Bad flag values that CLI11 cannot see (unknown dataset, bad method pairing).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kKnownDatasets{"DD", "PROTEINS", "NCI1", "IMDB-BINARY", "MUTAG"};

struct Common {
  std::string data_dir = "data";
  std::string dataset;
  std::string out = "glod_out";
  std::size_t jobs = 1;
  std::string cache_dir;
  std::size_t fgsd_max_nodes = 2000;
};

struct MethodFlags {
  std::string method = "wl+lof";
  std::size_t L = 5;
  double w = 0.1;
  std::size_t k = 20;
  double nu = 0.1;
  std::size_t trees = 100;
  std::size_t subsample = 256;
  std::uint64_t hash_seed = 0;
};

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) throw UsageError("bad value '" + item + "' in " + flag);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(flag + " needs at least one value");
  return out;
}

/// "10" -> 0..9, "1,4,7" -> that list.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  if (text.find(',') != std::string::npos) return parse_list<std::uint64_t>(text, "--seeds");
  const auto count = parse_list<std::uint64_t>(text, "--seeds").front();
  if (count == 0) throw UsageError("--seeds must be positive");
  std::vector<std::uint64_t> seeds(count);
  for (std::uint64_t i = 0; i < count; ++i) seeds[i] = i;
  return seeds;
}

std::vector<std::string> available_datasets(const fs::path& root) {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(root, ec)) {
    const auto name = e.path().filename().string();
    if (e.is_directory() && fs::exists(e.path() / (name + "_A.txt"))) names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

fs::path locate_dataset(const Common& c) {
  if (c.dataset.empty()) throw UsageError("--dataset is required");
  for (const auto& dir : {fs::path(c.data_dir) / c.dataset, fs::path(c.data_dir)}) {
    if (fs::exists(dir / (c.dataset + "_A.txt"))) return dir;
  }
  std::string msg = "unknown dataset '" + c.dataset + "' under " + c.data_dir + "; valid values: ";
  auto names = available_datasets(c.data_dir);
  for (const auto& k : kKnownDatasets) {
    if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);
  }
  for (std::size_t i = 0; i < names.size(); ++i) msg += (i ? ", " : "") + names[i];
  msg += " (expected <data-dir>/<NAME>/<NAME>_A.txt)";
  throw UsageError(msg);
}

std::string input_hash(const fs::path& dir, const std::string& name) {
  std::uint64_t h = fnv1a(name);
  for (const char* suffix : {"_A.txt", "_graph_indicator.txt", "_graph_labels.txt", "_node_labels.txt"}) {
    std::ifstream in(dir / (name + suffix), std::ios::binary);
    if (!in) continue;
    std::ostringstream ss;
    ss << in.rdbuf();
    h = fnv1a(suffix, h);
    h = fnv1a(ss.str(), h);
  }
  return hex64(h);
}

struct Loaded {
  GraphDataset ds;
  std::string hash;
};

Loaded load(const Common& c, bool two_classes) {
  const auto dir = locate_dataset(c);
  Loaded l{load_tu_dataset(dir, c.dataset), input_hash(dir, c.dataset)};
  if (two_classes && l.ds.distinct_classes().size() != 2) {
    throw std::runtime_error(c.dataset + " has " + std::to_string(l.ds.distinct_classes().size()) +
                             " classes; the benchmark needs exactly two");
  }
  return l;
}

MethodSpec make_method(const MethodFlags& f, const Common& c) {
  MethodSpec m;
  try {
    m = MethodSpec::parse(f.method);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  if (f.L > 64) throw UsageError("--L must be at most 64");
  if (!(f.w > 0.0)) throw UsageError("--w must be positive");
  m.iterations = f.L;
  m.bin_width = f.w;
  m.lof_k = f.k;
  m.nu = f.nu;
  m.trees = f.trees;
  m.subsample = f.subsample;
  m.hash_seed = f.hash_seed;
  m.fgsd.max_nodes = c.fgsd_max_nodes;
  return m;
}

BenchOptions bench_options(const Common& c, const std::string& seeds, const std::string& mode, double rate) {
  BenchOptions opt;
  opt.rate = rate;
  opt.seeds = parse_seeds(seeds);
  opt.jobs = std::max<std::size_t>(1, c.jobs);
  opt.mode = mode == "slice" ? FeatureMode::slice : FeatureMode::recompute;
  if (!c.cache_dir.empty()) opt.cache_dir = fs::path(c.cache_dir);
  return opt;
}

std::vector<int> parse_dc(const std::string& dc) {
  if (dc == "both") return {0, 1};
  if (dc == "0") return {0};
  if (dc == "1") return {1};
  throw UsageError("--dc must be 0, 1 or both");
}

json method_json(const MethodSpec& m) {
  return {{"method", m.label()},
          {"config", m.config_string()},
          {"L", m.iterations},
          {"w", m.bin_width},
          {"lof_k", m.lof_k},
          {"nu", m.nu},
          {"trees", m.trees},
          {"subsample", m.subsample},
          {"hash_seed", m.hash_seed},
          {"fgsd_bins", m.fgsd.bins},
          {"fgsd_range", m.fgsd.range_max},
          {"fgsd_max_nodes", m.fgsd.max_nodes}};
}

/// Everything needed to rerun: argv, resolved config, seeds, tool version, input hash.
void write_manifest(const fs::path& out, const std::string& command, const std::vector<std::string>& argv,
                    json config, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = kVersion;
  m["command"] = command;
  m["argv"] = argv;
  m["config"] = std::move(config);
  m["outputs"] = outputs;
  atomic_write(out / "manifest.json", m.dump(2) + "\n");
}

void print_summary(const std::vector<VariantResult>& rs) {
  for (const auto& r : rs) {
    std::cout << r.dataset << " " << r.method << " dc=" << r.dc << " rate=" << fmt_num(r.rate)
              << " L=" << r.iterations << "  AUC " << fmt_num(r.mean_auc) << " (" << fmt_num(r.std_auc) << ")\n";
  }
}

std::vector<FlipReport> pair_flips(const std::vector<VariantResult>& rs) {
  std::vector<FlipReport> out;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (rs[i].dc != rs[j].dc && rs[i].rate == rs[j].rate && rs[i].config == rs[j].config) {
        out.push_back(flip_report(rs[i], rs[j]));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// flip-table

struct FlipRow {
  std::string dataset, method, rate, L, features;
  std::optional<double> auc[2];
  double std_[2] = {0.0, 0.0};
};

void flip_table(const std::vector<std::string>& inputs, const fs::path& out) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_regular_file(in)) {
      files.emplace_back(in);
    } else if (fs::is_directory(in)) {
      for (const auto& e : fs::recursive_directory_iterator(in)) {
        if (e.is_regular_file() && e.path().filename() == "summary.csv") files.push_back(e.path());
      }
    } else {
      throw UsageError("no such file or directory: " + in);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no summary.csv files found");

  std::map<std::string, FlipRow> rows;
  for (const auto& f : files) {
    const auto table = read_csv(f);
    if (table.empty()) continue;
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < table[0].size(); ++i) col[table[0][i]] = i;
    for (const char* need : {"dataset", "method", "dc", "mean_auc", "std"}) {
      if (!col.count(need)) throw FormatError(f.string() + ": missing column '" + need + "'");
    }
    const auto get = [&](const std::vector<std::string>& r, const char* name) -> std::string {
      const auto it = col.find(name);
      return it == col.end() || it->second >= r.size() ? std::string() : r[it->second];
    };
    for (std::size_t i = 1; i < table.size(); ++i) {
      const auto& r = table[i];
      const auto key = get(r, "dataset") + "|" + get(r, "method") + "|" + get(r, "rate") + "|" + get(r, "L") + "|" +
                       get(r, "features");
      auto& row = rows[key];
      row.dataset = get(r, "dataset");
      row.method = get(r, "method");
      row.rate = get(r, "rate");
      row.L = get(r, "L");
      row.features = get(r, "features");
      const auto dc = get(r, "dc");
      if (dc != "0" && dc != "1") throw FormatError(f.string() + ":" + std::to_string(i + 1) + ": dc must be 0 or 1");
      if (row.auc[dc == "1"]) {
        std::cerr << "warning: " << f.string() << ":" << i + 1 << " repeats " << row.dataset << " " << row.method
                  << " dc=" << dc << "; keeping the later value\n";
      }
      row.auc[dc == "1"] = std::stod(get(r, "mean_auc"));
      row.std_[dc == "1"] = std::stod(get(r, "std"));
    }
  }

  std::string csv = "dataset,method,auc0,auc1,gap,sum,classification,rate,L,features\n";
  std::size_t complete = 0, flips = 0;
  const double thresholds[] = {0.2, 0.3, 0.4};
  std::size_t over[3] = {0, 0, 0};
  for (const auto& [key, row] : rows) {
    const auto tail = "," + row.rate + "," + row.L + "," + row.features + "\n";
    if (!row.auc[0] || !row.auc[1]) {
      csv += row.dataset + "," + row.method + "," + (row.auc[0] ? fmt_num(*row.auc[0]) : "") + "," +
             (row.auc[1] ? fmt_num(*row.auc[1]) : "") + ",,,incomplete" + tail;
      std::cout << row.dataset << " " << row.method << ": incomplete (missing variant)\n";
      continue;
    }
    const auto f = make_flip_report(row.dataset, row.method, *row.auc[0], *row.auc[1], row.std_[0], row.std_[1]);
    ++complete;
    flips += f.classification == FlipClass::performance_flip;
    for (int t = 0; t < 3; ++t) over[t] += f.gap >= thresholds[t];
    csv += f.dataset + "," + f.method + "," + fmt_num(f.auc0) + "," + fmt_num(f.auc1) + "," + fmt_num(f.gap) + "," +
           fmt_num(f.auc_sum) + "," + to_string(f.classification) + tail;
    std::cout << f.dataset << " " << f.method << ": " << fmt_num(f.auc0) << " / " << fmt_num(f.auc1)
              << "  gap " << fmt_num(f.gap) << "  " << to_string(f.classification) << "\n";
  }
  std::string stats = "metric,value,count,total\n";
  const auto frac = [&](std::size_t n) { return complete ? fmt_num(static_cast<double>(n) / complete) : ""; };
  for (int t = 0; t < 3; ++t) {
    stats += "gap_ge_" + fmt_num(thresholds[t]) + "," + frac(over[t]) + "," + std::to_string(over[t]) + "," +
             std::to_string(complete) + "\n";
  }
  stats += "performance_flip," + frac(flips) + "," + std::to_string(flips) + "," + std::to_string(complete) + "\n";
  stats += "incomplete,," + std::to_string(rows.size() - complete) + "," + std::to_string(rows.size()) + "\n";
  atomic_write(out / "flip_table.csv", csv);
  atomic_write(out / "flip_stats.csv", stats);
  for (int t = 0; t < 3; ++t) {
    std::cout << "gap >= " << fmt_num(thresholds[t]) << ": " << over[t] << "/" << complete << "\n";
  }
}

void add_common(CLI::App* sub, Common& c, bool needs_dataset = true) {
  sub->add_option("--data-dir", c.data_dir, "Directory holding TU datasets")->envname("GLOD_DATA_DIR");
  if (needs_dataset) sub->add_option("--dataset", c.dataset, "Dataset name, e.g. DD or MUTAG")->required();
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--cache-dir", c.cache_dir, "Kernel matrix cache directory")->envname("GLOD_CACHE_DIR");
  sub->add_option("--fgsd-max-nodes", c.fgsd_max_nodes, "Largest graph FGSD will embed");
}

void add_method(CLI::App* sub, MethodFlags& f) {
  sub->add_option("--method", f.method, "<wl|pk|fgsd>+<lof|ocsvm|iforest>");
  sub->add_option("--L", f.L, "Propagation iterations");
  sub->add_option("--w", f.w, "PK bin width");
  sub->add_option("--k", f.k, "LOF neighbors");
  sub->add_option("--nu", f.nu, "OCSVM nu");
  sub->add_option("--trees", f.trees, "Isolation Forest trees");
  sub->add_option("--subsample", f.subsample, "Isolation Forest subsample size");
  sub->add_option("--hash-seed", f.hash_seed, "Base seed for PK hashes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glod: graph-level outlier detection benchmarks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::vector<std::string> args(argv, argv + argc);

  Common common;
  MethodFlags mf;
  std::string seeds = "10", mode = "recompute", dc = "both", rates = "0.05,0.15,0.25,0.35,0.45,0.55,0.65,0.75,0.85";
  std::string iters_list = "1,2,3,4,5,6,7,8,9,10,11";
  double rate = 0.1;
  std::function<void()> action;

  auto* bench = app.add_subcommand("bench", "Down-sampling benchmark for one dataset and method");
  add_common(bench, common);
  add_method(bench, mf);
  bench->add_option("--rate", rate, "Fraction of the down-sampled class kept");
  bench->add_option("--dc", dc, "Down-sampled class: 0, 1 or both");
  bench->add_option("--seeds", seeds, "Seed count (0..N-1) or comma list");
  bench->add_option("--mode", mode, "Feature mode")->check(CLI::IsMember({"recompute", "slice"}));

  auto* srate = app.add_subcommand("sweep-rate", "AUC against down-sampling rate");
  add_common(srate, common);
  add_method(srate, mf);
  srate->add_option("--rates", rates, "Comma list of rates");
  srate->add_option("--seeds", seeds, "Seed count (0..N-1) or comma list");
  srate->add_option("--mode", mode, "Feature mode")->check(CLI::IsMember({"recompute", "slice"}));

  auto* siters = app.add_subcommand("sweep-iters", "AUC gap against propagation iterations");
  add_common(siters, common);
  add_method(siters, mf);
  siters->add_option("--iters", iters_list, "Comma list of L values");
  siters->add_option("--rate", rate, "Fraction of the down-sampled class kept");
  siters->add_option("--seeds", seeds, "Seed count (0..N-1) or comma list");
  siters->add_option("--mode", mode, "Feature mode")->check(CLI::IsMember({"recompute", "slice"}));

  std::string grouping = "class", slice = "cumulative", diag_iters = "1,2,3,4,5";
  std::uint64_t variant_seed = 0;
  int diag_dc = 0;
  auto* diag = app.add_subcommand("diag", "NN-Radius, NN-Disagreement and MDS diagnostics");
  add_common(diag, common);
  diag->add_option("--method", mf.method, "wl, pk or fgsd (a detector suffix is ignored)");
  diag->add_option("--w", mf.w, "PK bin width");
  diag->add_option("--hash-seed", mf.hash_seed, "PK hash seed");
  diag->add_option("--iters", diag_iters, "Comma list of iterations");
  diag->add_option("--k", mf.k, "Neighbor count");
  diag->add_option("--grouping", grouping, "class: full data; outlier: one down-sampled variant")
      ->check(CLI::IsMember({"class", "outlier"}));
  diag->add_option("--dc", diag_dc, "Down-sampled class for --grouping outlier")->check(CLI::IsMember({0, 1}));
  diag->add_option("--rate", rate, "Down-sampling rate for --grouping outlier");
  diag->add_option("--seed", variant_seed, "Down-sampling seed for --grouping outlier");
  diag->add_option("--slice", slice, "Similarity per iteration")->check(CLI::IsMember({"cumulative", "per-iteration"}));

  SimConfig sim_cfg;
  int sim_case = 1;
  std::string magnitudes = "1,2,5,10", vary_k;
  auto* sim = app.add_subcommand("sim", "WL distance growth under controlled perturbations");
  add_common(sim, common, false);
  sim->add_option("--case", sim_case, "1: label flips, 2: edge rewiring")->check(CLI::IsMember({1, 2}));
  sim->add_option("--n", sim_cfg.n, "Nodes");
  sim->add_option("--k", sim_cfg.k, "Degree");
  sim->add_option("--m,--r", magnitudes, "Comma list of flips (case 1) or rewires (case 2)");
  sim->add_option("--iters", sim_cfg.iterations, "Largest WL iteration");
  sim->add_option("--rounds", sim_cfg.rounds, "Rounds averaged per curve");
  sim->add_option("--seed", sim_cfg.seed, "Base seed");
  sim->add_option("--vary-k", vary_k, "Comma list of degrees; uses the first magnitude");

  std::vector<std::string> flip_inputs;
  auto* flip = app.add_subcommand("flip-table", "Consolidated flip table from summary.csv files");
  flip->add_option("--in", flip_inputs, "Result directories or summary files")->required();
  flip->add_option("--out", common.out, "Output directory");

  bench->callback([&] {
    action = [&] {
      const auto m = make_method(mf, common);
      const auto opt = bench_options(common, seeds, mode, rate);
      const auto dcs = parse_dc(dc);
      const auto data = load(common, true);
      std::vector<VariantResult> rs;
      for (int d : dcs) rs.push_back(run_benchmark(data.ds, m, d, opt));
      const fs::path out(common.out);
      std::vector<std::string> outputs{"results.csv", "summary.csv"};
      atomic_write(out / "results.csv", results_csv(rs));
      atomic_write(out / "summary.csv", summary_csv(rs));
      if (rs.size() == 2) {
        atomic_write(out / "flip.csv", flip_csv(pair_flips(rs)));
        outputs.push_back("flip.csv");
      }
      print_summary(rs);
      write_manifest(out, "bench", args,
                     {{"dataset", common.dataset}, {"input_hash", data.hash}, {"method", method_json(m)},
                      {"rate", rate}, {"dc", dcs}, {"seeds", opt.seeds}, {"mode", mode},
                      {"rounding", "max(1, round-half-up(rate * class size))"}},
                     outputs);
    };
  });

  srate->callback([&] {
    action = [&] {
      const auto m = make_method(mf, common);
      const auto opt = bench_options(common, seeds, mode, 0.1);
      const auto rs_list = parse_list<double>(rates, "--rates");
      const auto data = load(common, true);
      const auto rs = sweep_rate(data.ds, m, rs_list, opt);
      const fs::path out(common.out);
      atomic_write(out / "results.csv", results_csv(rs));
      atomic_write(out / "summary.csv", summary_csv(rs));
      print_summary(rs);
      write_manifest(out, "sweep-rate", args,
                     {{"dataset", common.dataset}, {"input_hash", data.hash}, {"method", method_json(m)},
                      {"rates", rs_list}, {"seeds", opt.seeds}, {"mode", mode}},
                     {"results.csv", "summary.csv"});
    };
  });

  siters->callback([&] {
    action = [&] {
      const auto m = make_method(mf, common);
      if (!m.is_kernel()) throw UsageError("sweep-iters needs a propagation kernel (wl or pk)");
      const auto opt = bench_options(common, seeds, mode, rate);
      const auto ls = parse_list<std::size_t>(iters_list, "--iters");
      const auto data = load(common, true);
      const auto rows = sweep_iterations(data.ds, m, ls, opt);
      std::string csv = "dataset,method,L,auc0,std0,auc1,std1,gap\n";
      std::vector<VariantResult> rs;
      for (const auto& r : rows) {
        csv += common.dataset + "," + m.label() + "," + std::to_string(r.iterations) + "," +
               fmt_num(r.variant0.mean_auc) + "," + fmt_num(r.variant0.std_auc) + "," + fmt_num(r.variant1.mean_auc) +
               "," + fmt_num(r.variant1.std_auc) + "," + fmt_num(r.gap()) + "\n";
        rs.push_back(r.variant0);
        rs.push_back(r.variant1);
      }
      const fs::path out(common.out);
      atomic_write(out / "iterations.csv", csv);
      atomic_write(out / "results.csv", results_csv(rs));
      atomic_write(out / "summary.csv", summary_csv(rs));
      print_summary(rs);
      write_manifest(out, "sweep-iters", args,
                     {{"dataset", common.dataset}, {"input_hash", data.hash}, {"method", method_json(m)},
                      {"iterations", ls}, {"rate", rate}, {"seeds", opt.seeds}, {"mode", mode}},
                     {"iterations.csv", "results.csv", "summary.csv"});
    };
  });

  diag->callback([&] {
    action = [&] {
      auto flags = mf;
      if (flags.method.find('+') == std::string::npos) flags.method += "+lof";
      const auto m = make_method(flags, common);
      const auto ls = parse_list<std::size_t>(diag_iters, "--iters");
      const auto data = load(common, false);
      DiagnosticOptions opt;
      opt.k = mf.k;
      opt.slice = slice == "cumulative" ? SimilaritySlice::cumulative : SimilaritySlice::per_iteration;
      GraphDataset ds = data.ds;
      std::vector<int> groups = ds.class_labels;
      json variant;
      if (grouping == "outlier") {
        const auto v = downsample(ds, diag_dc, rate, variant_seed);
        ds = ds.subset(v.member_indices);
        groups.assign(v.truth.begin(), v.truth.end());
        variant = {{"dc", diag_dc}, {"rate", rate}, {"seed", variant_seed}, {"members", v.member_indices.size()},
                   {"outliers", v.outlier_count()}};
      }
      const auto rep = full_diagnostic(ds, m, ls, groups, grouping, opt);
      json manifest = {{"tool", kVersion},
                       {"command", "diag"},
                       {"argv", args},
                       {"input_hash", data.hash},
                       {"iterations", ls},
                       {"hash_seed", m.hash_seed},
                       {"w", m.bin_width}};
      if (!variant.is_null()) manifest["variant"] = variant;
      write_diagnostic_bundle(rep, common.out, manifest);
      for (const auto& s : rep.slices) {
        std::cout << "L=" << s.iteration << ": MDS eigenvalues " << fmt_num(s.mds.eigenvalues(0)) << ", "
                  << fmt_num(s.mds.eigenvalues(1)) << "\n";
      }
    };
  });

  sim->callback([&] {
    action = [&] {
      sim_cfg.sim_case = static_cast<SimCase>(sim_case);
      sim_cfg.magnitudes = parse_list<std::size_t>(magnitudes, "--m");
      std::vector<SimCurve> curves;
      json cfg = {{"case", sim_case},      {"n", sim_cfg.n},           {"k", sim_cfg.k},
                  {"magnitudes", sim_cfg.magnitudes}, {"iterations", sim_cfg.iterations},
                  {"rounds", sim_cfg.rounds}, {"seed", sim_cfg.seed},
                  {"distance", "1 - normalized cumulative WL similarity"}};
      if (!vary_k.empty()) {
        const auto ks = parse_list<std::size_t>(vary_k, "--vary-k");
        curves = vary_k_curve(sim_cfg.n, ks, sim_cfg.sim_case, sim_cfg.magnitudes.front(), sim_cfg.iterations,
                              sim_cfg.rounds, sim_cfg.seed);
        cfg["vary_k"] = ks;
      } else {
        try {
          sim_cfg.validate();
        } catch (const ParameterError& e) {
          throw UsageError(e.what());
        }
        curves = simulate(sim_cfg);
      }
      const fs::path out(common.out);
      atomic_write(out / "sim.csv", sim_csv(curves));
      for (const auto& c : curves) {
        std::cout << "k=" << c.k << " magnitude=" << c.magnitude << ":";
        for (double v : c.mean) std::cout << " " << fmt_num(v);
        std::cout << "\n";
      }
      write_manifest(out, "sim", args, cfg, {"sim.csv"});
    };
  });

  flip->callback([&] {
    action = [&] {
      flip_table(flip_inputs, common.out);
      write_manifest(common.out, "flip-table", args, {{"inputs", flip_inputs}}, {"flip_table.csv", "flip_stats.csv"});
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
