// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria mix in-process property checks with end-to-end CLI runs.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "pphpc/bench.hpp"
#include "pphpc/harness.hpp"
#include "pphpc/io.hpp"
#include "pphpc/rng.hpp"
#include "pphpc/sim.hpp"
#include "pphpc/stats.hpp"
#include "pphpc/subprocess.hpp"

using namespace pphpc;
namespace fs = std::filesystem;

namespace {

fs::path g_workdir;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string make_script(const std::string& name, const std::string& body) {
  const fs::path path = g_workdir / name;
  spit(path, "#!/bin/sh\n" + body);
  fs::permissions(path, fs::perms::owner_all | fs::perms::group_read |
                            fs::perms::others_read);
  return path.string();
}

double normal_draw(Rng& rng) {
  const double u1 =
      (static_cast<double>(rng.next() >> 11) + 0.5) * 0x1p-53;
  const double u2 = static_cast<double>(rng.next() >> 11) * 0x1p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::MatrixXd normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                              double shift) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal_draw(rng) + shift;
  return m;
}

std::vector<SimOutput> simulate_group(const SimParams& params, int n,
                                      std::uint64_t base) {
  std::vector<SimOutput> runs;
  runs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    runs.push_back(
        run_simulation(params, derive_seed(base, static_cast<std::uint64_t>(i))));
  return runs;
}

// ---- criterion 1: determinism -------------------------------------------

bool criterion_determinism(std::string& detail) {
  SimParams params;
  params.grid_x = 50;
  params.grid_y = 50;
  params.init_prey = 200;
  params.init_predators = 100;
  params.iterations = 500;
  const fs::path param_file = g_workdir / "det_params.txt";
  {
    std::ofstream out(param_file);
    write_param_file(params, out);
  }

  std::string reference;
  for (int i = 0; i < 5; ++i) {
    const fs::path out = g_workdir / ("det_" + std::to_string(i) + ".csv");
    const ProcessResult run = run_process(
        {PPHPC_CLI_EXE, "simulate", "--params", param_file.string(), "--seed",
         "42", "--out", out.string()},
        120.0);
    if (!run.exited || run.exit_code != 0) {
      detail = "simulate invocation failed";
      return false;
    }
    const std::string bytes = slurp(out);
    if (i == 0)
      reference = bytes;
    else if (bytes != reference) {
      detail = "simulate output differs between invocations";
      return false;
    }
  }

  // Same evaluation under 1 vs 4 workers must produce identical bytes.
  SimParams small = params;
  small.grid_x = 20;
  small.grid_y = 20;
  small.init_prey = 80;
  small.init_predators = 40;
  small.iterations = 100;
  const fs::path small_file = g_workdir / "det_small.txt";
  {
    std::ofstream out(small_file);
    write_param_file(small, out);
  }
  const std::string manifest = "[{\"id\":\"ref\",\"exe\":\"" +
                               std::string(PPHPC_CANDIDATE_EXE) + "\"}]";
  const fs::path manifest_file = g_workdir / "det_manifest.json";
  spit(manifest_file, manifest);
  std::string results[2];
  const char* jobs[2] = {"1", "4"};
  for (int i = 0; i < 2; ++i) {
    const fs::path out = g_workdir / ("det_results_" + std::to_string(i) + ".csv");
    const ProcessResult run = run_process(
        {PPHPC_CLI_EXE, "evaluate", "--manifest", manifest_file.string(),
         "--params", small_file.string(), "--trials", "2", "--reps", "6",
         "--jobs", jobs[i], "--seed", "11", "--permutations", "300", "--out",
         out.string()},
        300.0);
    if (!run.exited || run.exit_code != 0) {
      detail = "evaluate invocation failed";
      return false;
    }
    results[i] = slurp(out);
  }
  if (results[0] != results[1]) {
    detail = "results.csv differs between 1 and 4 workers";
    return false;
  }
  return true;
}

// ---- criterion 2: simulation invariants ---------------------------------

bool criterion_sim_invariants(std::string& detail) {
  Rng rng(20260824);
  for (int trial = 0; trial < 20; ++trial) {
    SimParams p;
    p.grid_x = 1 + static_cast<std::int64_t>(rng.below(50));
    p.grid_y = 1 + static_cast<std::int64_t>(rng.below(50));
    p.init_prey = static_cast<std::int64_t>(rng.below(200));
    p.init_predators = static_cast<std::int64_t>(rng.below(100));
    p.iterations = 200;
    p.prey_gain = static_cast<std::int64_t>(rng.below(10));
    p.predator_gain = static_cast<std::int64_t>(rng.below(30));
    p.prey_loss = 1 + static_cast<std::int64_t>(rng.below(3));
    p.predator_loss = 1 + static_cast<std::int64_t>(rng.below(3));
    p.prey_repro_threshold = 1 + static_cast<std::int64_t>(rng.below(8));
    p.predator_repro_threshold = 1 + static_cast<std::int64_t>(rng.below(8));
    p.prey_repro_prob = static_cast<std::int64_t>(rng.below(101));
    p.predator_repro_prob = static_cast<std::int64_t>(rng.below(101));
    p.cell_food_restart = 1 + static_cast<std::int64_t>(rng.below(20));

    World world(p, rng.next());
    OutputRow prev = world.collect_outputs();
    for (int it = 0; it < p.iterations; ++it) {
      world.step();
      const OutputRow cur = world.collect_outputs();
      const StepEvents& ev = world.last_events();
      if (cur.total_prey != prev.total_prey + ev.births_prey -
                                ev.starved_prey - ev.predation_deaths) {
        detail = "prey accounting identity violated";
        return false;
      }
      if (cur.total_predators != prev.total_predators + ev.births_predators -
                                     ev.starved_predators) {
        detail = "predator accounting identity violated";
        return false;
      }
      std::int64_t food = 0, c_sum = 0;
      for (auto c : world.countdowns()) {
        if (c == 0) ++food;
        c_sum += c;
        if (c < 0 || c > p.cell_food_restart) {
          detail = "countdown out of range";
          return false;
        }
      }
      if (cur.total_food != food ||
          std::abs(cur.mean_c - static_cast<double>(c_sum) /
                                    static_cast<double>(p.grid_x * p.grid_y)) >
              1e-12) {
        detail = "grid scan mismatch";
        return false;
      }
      for (const Agent& a : world.agents())
        if (a.energy < 1) {
          detail = "agent with non-positive energy survived a phase";
          return false;
        }
      prev = cur;
    }
  }
  return true;
}

// ---- criterion 3: energy statistic oracle -------------------------------

double energy_oracle(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const auto n = x.rows();
  const auto m = y.rows();
  double cross = 0.0, xx = 0.0, yy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) cross += (x.row(i) - y.row(j)).norm();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) xx += (x.row(i) - x.row(j)).norm();
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) yy += (y.row(i) - y.row(j)).norm();
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const double e = 2.0 / (dn * dm) * cross - xx / (dn * dn) - yy / (dm * dm);
  return dn * dm / (dn + dm) * e;
}

bool criterion_energy_oracle(std::string& detail) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dims = 1 + static_cast<Eigen::Index>(rng.below(20));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(100));
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(100));
    const Eigen::MatrixXd x = normal_matrix(rng, n, dims, 0.0);
    const Eigen::MatrixXd y = normal_matrix(rng, m, dims, 0.0);
    if (std::abs(energy_statistic(x, y) - energy_oracle(x, y)) > 1e-10) {
      detail = "statistic deviates from the double-loop oracle";
      return false;
    }
  }
  return true;
}

// ---- criterion 4: permutation test calibration --------------------------

bool criterion_calibration(std::string& detail) {
  const int mc_reps = 200;
  const int permutations = 1000;
  Rng rng(4);
  const auto start = std::chrono::steady_clock::now();

  int null_rejections = 0;
  int shifted_rejections = 0;
  for (int rep = 0; rep < mc_reps; ++rep) {
    const Eigen::MatrixXd x = normal_matrix(rng, 30, 5, 0.0);
    const Eigen::MatrixXd y = normal_matrix(rng, 30, 5, 0.0);
    if (energy_test(x, y, permutations, rng.next()) < 0.05) ++null_rejections;

    const Eigen::MatrixXd xs = normal_matrix(rng, 30, 5, 0.0);
    const Eigen::MatrixXd ys = normal_matrix(rng, 30, 5, 3.0);
    if (energy_test(xs, ys, permutations, rng.next()) < 0.05)
      ++shifted_rejections;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const double null_rate = static_cast<double>(null_rejections) / mc_reps;
  const double shifted_rate = static_cast<double>(shifted_rejections) / mc_reps;
  detail = "null rate " + format_fixed6(null_rate) + ", shifted rate " +
           format_fixed6(shifted_rate) + ", " + format_fixed6(elapsed) + " s";
  return null_rate >= 0.01 && null_rate <= 0.12 && shifted_rate >= 0.99 &&
         elapsed < 300.0;
}

// ---- criterion 5: BH oracle ---------------------------------------------

bool criterion_bh_oracle(std::string& detail) {
  {
    const auto adj = bh_adjust({0.01, 0.02, 0.03, 0.04});
    for (double v : adj)
      if (std::abs(v - 0.04) > 1e-15) {
        detail = "worked case [0.01,0.02,0.03,0.04] failed";
        return false;
      }
  }
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> p(1 + rng.below(50));
    for (auto& v : p) v = (1.0 + static_cast<double>(rng.below(1000000))) / 1e6;
    const auto adj = bh_adjust(p);

    // Step-up oracle evaluated directly from the formula.
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    for (std::size_t i = 0; i < p.size(); ++i) {
      double best = 1.0;
      for (std::size_t j = i; j < p.size(); ++j)
        best = std::min(best, static_cast<double>(p.size()) * p[order[j]] /
                                  static_cast<double>(j + 1));
      if (adj[order[i]] != best) {
        detail = "adjusted value differs from the step-up oracle";
        return false;
      }
    }
  }
  return true;
}

// ---- criterion 6: PCA properties ----------------------------------------

bool criterion_pca(std::string& detail) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.below(30));
    const Eigen::Index p = 2 + static_cast<Eigen::Index>(rng.below(60));
    const Eigen::MatrixXd m = normal_matrix(rng, n, p, 0.0);
    const double min_variance =
        0.5 + static_cast<double>(rng.below(50)) / 100.0;
    const PcaResult pca = pca_project(m, min_variance);

    if (std::abs(pca.explained_ratios.sum() - 1.0) > 1e-9) {
      detail = "explained ratios do not sum to 1";
      return false;
    }

    // Minimal-k rule against the cumulative sums.
    double cumulative = 0.0;
    int expected_k = static_cast<int>(pca.explained_ratios.size());
    for (Eigen::Index i = 0; i < pca.explained_ratios.size(); ++i) {
      cumulative += pca.explained_ratios(i);
      if (cumulative >= min_variance) {
        expected_k = static_cast<int>(i) + 1;
        break;
      }
    }
    if (pca.k != expected_k) {
      detail = "k is not minimal for the variance target";
      return false;
    }

    // Full-rank reconstruction: project the centered data onto the span of
    // all non-degenerate components.
    const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
    Eigen::MatrixXd projector = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index c = 0; c < pca.scores.cols(); ++c) {
      const double norm = pca.scores.col(c).norm();
      if (norm < 1e-9) continue;
      const Eigen::VectorXd u = pca.scores.col(c) / norm;
      projector += u * u.transpose();
    }
    const double rel_error =
        (projector * centered - centered).norm() / centered.norm();
    if (rel_error > 1e-7) {
      detail = "reconstruction error " + format_fixed6(rel_error);
      return false;
    }
  }
  return true;
}

// ---- criterion 7: end-to-end self-comparison ----------------------------

bool criterion_self_comparison(std::string& detail) {
  SimParams set1;
  set1.grid_x = 100;
  set1.grid_y = 100;
  set1.init_prey = 400;
  set1.init_predators = 200;
  set1.iterations = 4000;

  SimParams set2 = set1;
  set2.init_prey = 800;
  set2.init_predators = 400;
  set2.prey_gain = 30;
  set2.predator_gain = 10;
  set2.prey_repro_prob = 10;
  set2.cell_food_restart = 15;

  StatsConfig config;
  config.alpha = 0.01;
  config.n_permutations = 2000;  // resolution below the 0.001 bound

  SimParams perturbed1 = set1;
  perturbed1.prey_gain *= 2;
  SimParams perturbed2 = set2;
  perturbed2.prey_gain *= 2;

  int same_score6 = 0;
  int perturbed_score5 = 0;
  double worst_batch_seconds = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const std::uint64_t base = 1000 * static_cast<std::uint64_t>(rep + 1);
    config.seed = base;
    const auto batch_start = std::chrono::steady_clock::now();
    const auto a1 = simulate_group(set1, 30, base + 1);
    const auto b1 = simulate_group(set1, 30, base + 2);
    const double batch1_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      batch_start)
            .count();
    const auto a2 = simulate_group(set2, 30, base + 3);
    const auto b2 = simulate_group(set2, 30, base + 4);
    const double batch2_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      batch_start)
            .count() -
        batch1_seconds;
    worst_batch_seconds =
        std::max({worst_batch_seconds, batch1_seconds, batch2_seconds});
    const ComparisonResult same = compare_models({{a1, b1}, {a2, b2}}, config);
    if (same.overall_score == 6) ++same_score6;

    const auto p1 = simulate_group(perturbed1, 30, base + 5);
    const auto p2 = simulate_group(perturbed2, 30, base + 6);
    const ComparisonResult diff = compare_models({{a1, p1}, {a2, p2}}, config);
    double min_adjusted = 1.0;
    for (const auto& t : diff.sets) min_adjusted = std::min(min_adjusted, t.p_adjusted);
    if (diff.overall_score == 5 && min_adjusted < 0.001) ++perturbed_score5;
    std::cerr << "  self-comparison rep " << rep + 1 << "/10: same="
              << same.overall_score << " perturbed=" << diff.overall_score
              << " p_adj=" << format_fixed6(min_adjusted) << '\n';
  }
  detail = "score 6 in " + std::to_string(same_score6) +
           "/10, perturbed score 5 with p<0.001 in " +
           std::to_string(perturbed_score5) + "/10, worst 60-run batch " +
           format_fixed6(worst_batch_seconds) + " s";
  return same_score6 >= 9 && perturbed_score5 == 10 &&
         worst_batch_seconds < 600.0;
}

// ---- criterion 8: pipeline scoring --------------------------------------

bool criterion_pipeline(std::string& detail) {
  HarnessConfig config;
  SimParams p;
  p.grid_x = 15;
  p.grid_y = 15;
  p.init_prey = 40;
  p.init_predators = 20;
  p.iterations = 60;
  config.paramsets = {p};
  config.n_reps = 6;
  config.base_seed = 8;
  config.stats.n_permutations = 300;
  config.stats.seed = 8;

  std::vector<std::vector<SimOutput>> baseline{simulate_group(p, 6, 0xcafe)};

  const std::string handshake =
      "if [ \"$1\" = \"--check\" ]; then echo 'pphpc-candidate 1'; exit 0; fi\n";
  std::vector<CandidateSpec> specs;
  {
    CandidateSpec s;
    s.id = "missing";
    s.exe = (g_workdir / "no_such_file").string();
    specs.push_back(s);
  }
  {
    CandidateSpec s;
    s.id = "bad_handshake";
    s.exe = make_script("fx_handshake", "echo 'hello'\n");
    specs.push_back(s);
  }
  {
    CandidateSpec s;
    s.id = "sleeper";
    s.exe = make_script("fx_sleeper", handshake + "sleep 60\n");
    s.timeout_smoke = 1.0;
    specs.push_back(s);
  }
  {
    CandidateSpec s;
    s.id = "malformed";
    s.exe = make_script("fx_malformed",
                        handshake + "echo 'this,is,not,the,right,header'\n");
    specs.push_back(s);
  }
  {
    CandidateSpec s;
    s.id = "reference";
    s.exe = PPHPC_CANDIDATE_EXE;
    specs.push_back(s);
  }

  const std::map<std::string, int> expected{{"missing", 1},
                                            {"bad_handshake", 2},
                                            {"sleeper", 3},
                                            {"malformed", 4},
                                            {"reference", 6}};
  for (int run = 0; run < 2; ++run) {  // twice: scores must be deterministic
    const BatchResult batch = evaluate_batch(specs, 1, baseline, config, 2);
    for (const ResultRow& row : batch.results)
      if (row.score != expected.at(row.candidate_id)) {
        detail = row.candidate_id + " scored " + std::to_string(row.score) +
                 ", expected " + std::to_string(expected.at(row.candidate_id));
        return false;
      }
  }

  if (success_rate({6, 6, 6, 6, 6, 6}) != 100.0) {
    detail = "success rate of six 6s is not 100.0";
    return false;
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.1f", success_rate({5, 5, 6, 6, 6, 6}));
  if (std::string(buf) != "66.7") {
    detail = "success rate of [5,5,6,6,6,6] is not 66.7";
    return false;
  }
  return true;
}

// ---- criterion 9: bench math --------------------------------------------

bool criterion_bench(std::string& detail) {
  const TimingSummary s = summarize_times({1.0, 2.0, 3.0});
  if (s.mean_time != 2.0 || s.sample_std != 1.0 || s.s_rel != 50.0) {
    detail = "summarize_times([1,2,3]) mismatch";
    return false;
  }
  const TimingSummary self = summarize_times({19.84, 19.84, 19.84}, 19.84);
  if (!self.ratio_to_reference || *self.ratio_to_reference != 1.0) {
    detail = "self-ratio is not exactly 1.0";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  g_workdir = fs::temp_directory_path() /
              ("pphpc_acceptance_" + std::to_string(getpid()));
  fs::create_directories(g_workdir);

  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "determinism of simulate and worker-count invariance",
       criterion_determinism},
      {2, "simulation invariants on random parameterizations",
       criterion_sim_invariants},
      {3, "energy statistic matches the brute-force oracle",
       criterion_energy_oracle},
      {4, "permutation test calibration", criterion_calibration},
      {5, "Benjamini-Hochberg step-up oracle", criterion_bh_oracle},
      {6, "PCA explained variance, minimal k, reconstruction", criterion_pca},
      {7, "end-to-end self-comparison and perturbation detection",
       criterion_self_comparison},
      {8, "pipeline scoring of fixture candidates", criterion_pipeline},
      {9, "bench summary arithmetic", criterion_bench},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": "
              << c.name;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << '\n';
    if (!ok) ++failures;
  }

  fs::remove_all(g_workdir);
  return failures == 0 ? 0 : 1;
}
