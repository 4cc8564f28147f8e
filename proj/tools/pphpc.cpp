// Command-line surface: simulate, compare, evaluate, bench, pcs.
// Human-readable progress goes to stderr; machine output to files or stdout.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pphpc/bench.hpp"
#include "pphpc/harness.hpp"
#include "pphpc/io.hpp"
#include "pphpc/rng.hpp"
#include "pphpc/sim.hpp"
#include "pphpc/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PPHPC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("PPHPC_SEED", "not an unsigned integer");
    }
  }
  return 0;
}

pphpc::SimParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open parameter file " + path);
  return pphpc::read_param_file(in);
}

std::vector<pphpc::SimOutput> load_output_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<pphpc::SimOutput> runs;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    try {
      runs.push_back(pphpc::read_output_csv(in));
    } catch (const pphpc::FormatError& e) {
      throw std::runtime_error(file.string() + ": " + e.what());
    }
  }
  return runs;
}

// Parameter sets are subdirectories present in both group directories; a
// directory without subdirectories is a single unnamed set.
std::vector<std::string> common_set_names(const fs::path& a, const fs::path& b) {
  auto subdirs = [](const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_directory()) names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
  };
  const auto sa = subdirs(a);
  const auto sb = subdirs(b);
  std::vector<std::string> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(common));
  return common;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  fn(out);
}

int cmd_simulate(const std::string& param_path, std::uint64_t seed,
                 const std::string& out_path) {
  const pphpc::SimParams params = load_params(param_path);
  const pphpc::SimOutput output = pphpc::run_simulation(params, seed);
  write_file(out_path, [&](std::ostream& os) { pphpc::write_output_csv(output, os); });
  return 0;
}

struct CompareOptions {
  std::string group_a;
  std::string group_b;
  double alpha = 0.01;
  double min_variance = 0.80;
  int permutations = 1000;
  std::uint64_t seed = 0;
  std::string report;
  std::string pcs_prefix;
};

int cmd_compare(const CompareOptions& opt) {
  const fs::path dir_a(opt.group_a);
  const fs::path dir_b(opt.group_b);
  std::vector<std::string> sets = common_set_names(dir_a, dir_b);
  std::vector<std::pair<fs::path, fs::path>> set_dirs;
  if (sets.empty()) {
    sets.push_back("1");
    set_dirs.emplace_back(dir_a, dir_b);
  } else {
    for (const auto& name : sets) set_dirs.emplace_back(dir_a / name, dir_b / name);
  }

  std::vector<std::pair<std::vector<pphpc::SimOutput>, std::vector<pphpc::SimOutput>>>
      groups;
  for (const auto& [da, db] : set_dirs) {
    auto runs_a = load_output_dir(da);
    auto runs_b = load_output_dir(db);
    if (runs_a.size() < 2 || runs_b.size() < 2)
      throw std::runtime_error("need >= 2 output files per group in " +
                               da.string() + " and " + db.string());
    groups.emplace_back(std::move(runs_a), std::move(runs_b));
  }

  pphpc::StatsConfig config;
  config.alpha = opt.alpha;
  config.min_variance = opt.min_variance;
  config.n_permutations = opt.permutations;
  config.seed = opt.seed;
  const pphpc::ComparisonResult result = pphpc::compare_models(groups, config);

  std::vector<pphpc::PValueRow> rows;
  for (std::size_t i = 0; i < result.sets.size(); ++i) {
    const auto& t = result.sets[i];
    rows.push_back({"group_b", 1, sets[i], t.k, t.p_raw, t.p_adjusted, t.significant});
  }
  if (!opt.report.empty())
    write_file(opt.report, [&](std::ostream& os) { pphpc::write_pvalue_csv(rows, os); });

  // PC-score exports for external plotting, one file per parameter set.
  if (!opt.pcs_prefix.empty()) {
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const auto fm = pphpc::build_feature_matrix(groups[i].first, groups[i].second);
      const auto pca = pphpc::pca_project(fm.data, config.min_variance);
      std::vector<std::string> labels;
      for (Eigen::Index r = 0; r < fm.n_a; ++r) labels.push_back("A");
      for (Eigen::Index r = 0; r < fm.n_b; ++r) labels.push_back("B");
      write_file(opt.pcs_prefix + "_set" + sets[i] + ".csv", [&](std::ostream& os) {
        pphpc::export_pc_scores(pca.scores, labels, pca.explained_ratios, pca.k, os);
      });
    }
  }

  std::cout << result.overall_score << '\n';
  return 0;
}

struct EvaluateOptions {
  std::string manifest;
  std::vector<std::string> paramset_files;
  std::string baseline_dir;
  int trials = 6;
  int reps = 30;
  int jobs = 1;
  std::uint64_t seed = 0;
  int permutations = 1000;
  double alpha = 0.01;
  std::string out = "results.csv";
  std::string pvalues_out;
};

std::vector<pphpc::CandidateSpec> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  json doc = json::parse(in);
  std::vector<pphpc::CandidateSpec> specs;
  for (const auto& item : doc) {
    pphpc::CandidateSpec spec;
    spec.id = item.at("id").get<std::string>();
    spec.exe = item.at("exe").get<std::string>();
    if (item.contains("args"))
      spec.extra_args = item["args"].get<std::vector<std::string>>();
    if (item.contains("timeout_smoke"))
      spec.timeout_smoke = item["timeout_smoke"].get<double>();
    if (item.contains("timeout_full"))
      spec.timeout_full = item["timeout_full"].get<double>();
    if (spec.timeout_smoke <= 0 || spec.timeout_full <= 0)
      throw std::runtime_error("manifest: timeouts must be > 0 for " + spec.id);
    specs.push_back(std::move(spec));
  }
  if (specs.empty()) throw std::runtime_error("manifest lists no candidates");
  return specs;
}

int cmd_evaluate(const EvaluateOptions& opt) {
  const auto specs = load_manifest(opt.manifest);

  pphpc::HarnessConfig config;
  for (const auto& file : opt.paramset_files)
    config.paramsets.push_back(load_params(file));
  config.n_reps = opt.reps;
  config.base_seed = opt.seed;
  config.stats.alpha = opt.alpha;
  config.stats.n_permutations = opt.permutations;
  config.stats.seed = opt.seed;

  // Baseline: recorded CSV directories (one subdirectory per set, in the
  // order of the paramset files) or live runs of the built-in simulator on
  // a seed range disjoint from the candidates'.
  std::vector<std::vector<pphpc::SimOutput>> baseline;
  if (!opt.baseline_dir.empty()) {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(opt.baseline_dir))
      if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) dirs.push_back(opt.baseline_dir);
    if (dirs.size() != config.paramsets.size())
      throw std::runtime_error("baseline dir must hold one subdirectory per paramset");
    for (const auto& dir : dirs) baseline.push_back(load_output_dir(dir));
  } else {
    const std::uint64_t baseline_root = pphpc::derive_seed(opt.seed, 0x42a5e11e);
    for (std::size_t ps = 0; ps < config.paramsets.size(); ++ps) {
      std::vector<pphpc::SimOutput> group;
      for (int rep = 0; rep < config.n_reps; ++rep) {
        std::cerr << "baseline: paramset " << ps + 1 << " rep " << rep + 1 << "/"
                  << config.n_reps << '\r';
        group.push_back(pphpc::run_simulation(
            config.paramsets[ps],
            pphpc::derive_seed(baseline_root,
                               ps * static_cast<std::uint64_t>(config.n_reps) + rep)));
      }
      baseline.push_back(std::move(group));
    }
    std::cerr << '\n';
  }

  const pphpc::BatchResult batch =
      pphpc::evaluate_batch(specs, opt.trials, baseline, config, opt.jobs);

  write_file(opt.out,
             [&](std::ostream& os) { pphpc::write_results_csv(batch.results, os); });
  if (!opt.pvalues_out.empty())
    write_file(opt.pvalues_out,
               [&](std::ostream& os) { pphpc::write_pvalue_csv(batch.pvalues, os); });
  for (const auto& [id, rate] : batch.success_rates)
    std::cout << "success_rate," << id << ',' << pphpc::format_fixed6(rate) << '\n';
  return 0;  // candidate failures are data, not errors
}

struct BenchOptions {
  std::string param_file;
  int n = 30;
  std::uint64_t seed = 0;
  std::optional<double> reference_mean;
  std::string out;
};

int cmd_bench(const BenchOptions& opt) {
  const pphpc::SimParams params = load_params(opt.param_file);
  const auto times = pphpc::time_replications(
      [](const pphpc::SimParams& p, std::uint64_t seed) {
        pphpc::run_simulation(p, seed);
      },
      params, opt.n, opt.seed);
  const pphpc::TimingSummary summary =
      pphpc::summarize_times(times, opt.reference_mean);

  const std::string name = fs::path(opt.param_file).stem().string();
  auto emit = [&](std::ostream& os) {
    os << "paramset,trial,mean_s,s_rel_pct,ratio\n";
    os << name << ",1," << pphpc::format_fixed6(summary.mean_time) << ','
       << pphpc::format_fixed6(summary.s_rel) << ',';
    if (summary.ratio_to_reference)
      os << pphpc::format_fixed6(*summary.ratio_to_reference);
    os << '\n';
  };
  if (opt.out.empty())
    emit(std::cout);
  else
    write_file(opt.out, emit);
  return 0;
}

int cmd_pcs(const std::string& group_a, const std::string& group_b,
            double min_variance, const std::string& out_path) {
  const auto runs_a = load_output_dir(group_a);
  const auto runs_b = load_output_dir(group_b);
  const auto fm = pphpc::build_feature_matrix(runs_a, runs_b);
  const auto pca = pphpc::pca_project(fm.data, min_variance);
  std::vector<std::string> labels;
  for (Eigen::Index r = 0; r < fm.n_a; ++r) labels.push_back("A");
  for (Eigen::Index r = 0; r < fm.n_b; ++r) labels.push_back("B");
  write_file(out_path, [&](std::ostream& os) {
    pphpc::export_pc_scores(pca.scores, labels, pca.explained_ratios, pca.k, os);
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PPHPC predator-prey simulator and replication-validation pipeline"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }

  // simulate
  std::string sim_params, sim_out;
  auto* simulate = app.add_subcommand(
      "simulate", "Run the built-in simulator and write the output CSV "
                  "(header plus iterations+1 rows, means with 6 decimals)");
  simulate->add_option("--params", sim_params, "Parameter file (14 key=value lines)")
      ->required();
  simulate->add_option("--seed", seed, "RNG seed (default: $PPHPC_SEED or 0)");
  simulate->add_option("--out", sim_out, "Output CSV path")->required();

  // compare
  CompareOptions cmp;
  auto* compare = app.add_subcommand(
      "compare", "Statistically compare two directories of output CSVs "
                 "(subdirectories are parameter sets); prints the 5/6 verdict");
  compare->add_option("group_a", cmp.group_a, "Directory of group A output CSVs")
      ->required();
  compare->add_option("group_b", cmp.group_b, "Directory of group B output CSVs")
      ->required();
  compare->add_option("--alpha", cmp.alpha, "Corrected significance threshold");
  compare->add_option("--min-variance", cmp.min_variance,
                      "PCA explained-variance target");
  compare->add_option("--permutations", cmp.permutations, "Energy test permutations");
  compare->add_option("--seed", seed, "RNG seed (default: $PPHPC_SEED or 0)");
  compare->add_option("--report", cmp.report,
                      "p-value table CSV (candidate,trial,paramset,k,p_raw,"
                      "p_adjusted,significant)");
  compare->add_option("--pcs-prefix", cmp.pcs_prefix,
                      "Write PC-score CSVs as <prefix>_set<N>.csv");

  // evaluate
  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score external candidates 1-6 through the staged pipeline; "
                  "writes results.csv and prints per-candidate success rates");
  evaluate->add_option("--manifest", ev.manifest,
                       "JSON array of {id, exe, args?, timeout_smoke?, timeout_full?}")
      ->required();
  evaluate->add_option("--params", ev.paramset_files,
                       "Parameter file per set, in order (repeatable)")
      ->required()
      ->expected(1, -1);
  evaluate->add_option("--baseline-dir", ev.baseline_dir,
                       "Recorded baseline CSVs (one subdirectory per set); "
                       "omit to generate live from the built-in simulator");
  evaluate->add_option("--trials", ev.trials, "Trials per candidate");
  evaluate->add_option("--reps", ev.reps, "Replications per parameter set");
  evaluate->add_option("--jobs", ev.jobs, "Concurrent candidate workers");
  evaluate->add_option("--seed", seed, "Base seed (default: $PPHPC_SEED or 0)");
  evaluate->add_option("--permutations", ev.permutations, "Energy test permutations");
  evaluate->add_option("--alpha", ev.alpha, "Corrected significance threshold");
  evaluate->add_option("--out", ev.out, "results.csv path");
  evaluate->add_option("--pvalues-out", ev.pvalues_out, "p-value table CSV path");

  // bench
  BenchOptions bench;
  double reference_mean = 0.0;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Time replications of the built-in simulator; emits "
               "paramset,trial,mean_s,s_rel_pct,ratio");
  bench_cmd->add_option("--params", bench.param_file, "Parameter file")->required();
  bench_cmd->add_option("-n,--replications", bench.n, "Replication count (>= 2)")
      ->check(CLI::Range(2, 1 << 20));
  bench_cmd->add_option("--seed", seed, "Base seed (default: $PPHPC_SEED or 0)");
  auto* ref_opt = bench_cmd->add_option("--reference-mean", reference_mean,
                                        "Reference mean seconds for the ratio column");
  bench_cmd->add_option("--out", bench.out, "Output CSV (default: stdout)");

  // pcs
  std::string pcs_a, pcs_b, pcs_out;
  double pcs_min_variance = 0.80;
  auto* pcs = app.add_subcommand(
      "pcs", "Export PC scores of two output directories for external plotting");
  pcs->add_option("group_a", pcs_a, "Directory of group A output CSVs")->required();
  pcs->add_option("group_b", pcs_b, "Directory of group B output CSVs")->required();
  pcs->add_option("--min-variance", pcs_min_variance, "PCA explained-variance target");
  pcs->add_option("--out", pcs_out, "Output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(sim_params, seed, sim_out);
    if (compare->parsed()) {
      cmp.seed = seed;
      return cmd_compare(cmp);
    }
    if (evaluate->parsed()) {
      ev.seed = seed;
      return cmd_evaluate(ev);
    }
    if (bench_cmd->parsed()) {
      bench.seed = seed;
      if (ref_opt->count() > 0) bench.reference_mean = reference_mean;
      return cmd_bench(bench);
    }
    if (pcs->parsed()) return cmd_pcs(pcs_a, pcs_b, pcs_min_variance, pcs_out);
  } catch (const std::exception& e) {
    std::cerr << "pphpc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
