#include "pphpc/harness.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>
#include <variant>

#include "pphpc/rng.hpp"
#include "pphpc/subprocess.hpp"

namespace pphpc {

const char* const kHandshakeLine = "pphpc-candidate 1";

namespace {

std::vector<std::string> probe_argv(const CandidateSpec& spec) {
  std::vector<std::string> argv{spec.exe};
  argv.insert(argv.end(), spec.extra_args.begin(), spec.extra_args.end());
  argv.push_back("--check");
  return argv;
}

std::vector<std::string> run_argv(const CandidateSpec& spec,
                                  const SimParams& params, std::uint64_t seed) {
  std::vector<std::string> argv{spec.exe};
  argv.insert(argv.end(), spec.extra_args.begin(), spec.extra_args.end());
  for (std::size_t i = 0; i < SimParams::kFieldCount; ++i)
    argv.push_back(std::to_string(params.field(i)));
  argv.push_back(std::to_string(seed));
  return argv;
}

std::string first_line(const std::string& text) {
  const std::size_t nl = text.find('\n');
  std::string line = nl == std::string::npos ? text : text.substr(0, nl);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::optional<StageScore> check_artifact(const CandidateSpec& spec) {
  if (access(spec.exe.c_str(), X_OK) != 0) {
    StageScore s;
    s.score = 1;
    s.reason = "no runnable artifact at " + spec.exe;
    s.stage_log.push_back("artifact: missing or not executable");
    return s;
  }
  const ProcessResult probe = run_process(probe_argv(spec), spec.timeout_smoke);
  if (!probe.exited || probe.exit_code != 0 ||
      first_line(probe.output) != kHandshakeLine) {
    StageScore s;
    s.score = 2;
    s.reason = probe.timed_out ? "handshake probe timed out"
                               : "handshake failed (expected '" +
                                     std::string(kHandshakeLine) + "')";
    s.stage_log.push_back("handshake: got '" + first_line(probe.output) + "'");
    return s;
  }
  return std::nullopt;
}

std::optional<StageScore> smoke_test(const CandidateSpec& spec,
                                     const HarnessConfig& config,
                                     std::uint64_t seed) {
  SimParams params = config.paramsets.at(0);
  params.iterations = 5;
  const ProcessResult run =
      run_process(run_argv(spec, params, seed), spec.timeout_smoke);
  if (run.timed_out || !run.exited || run.exit_code != 0) {
    StageScore s;
    s.score = 3;
    s.reason = run.timed_out ? "smoke test timed out" : "smoke test exited nonzero";
    s.stage_log.push_back("smoke: " + s.reason);
    return s;
  }
  try {
    std::istringstream stream(run.output);
    read_output_csv(stream, static_cast<std::size_t>(params.iterations) + 1);
  } catch (const FormatError& e) {
    StageScore s;
    s.score = 4;
    s.reason = std::string("smoke output format violation: ") + e.what();
    s.stage_log.push_back("smoke: " + s.reason);
    return s;
  }
  return std::nullopt;
}

namespace {

/// Stages 1-4 plus the full replication runs. On failure holds a StageScore
/// (score 1-4); on success the parsed outputs and durations.
std::variant<StageScore, CandidateRuns> execute_candidate(
    const CandidateSpec& spec, const HarnessConfig& config,
    std::uint64_t trial_seed) {
  if (auto fail = check_artifact(spec)) return *fail;
  if (auto fail = smoke_test(spec, config, trial_seed)) return *fail;

  CandidateRuns runs;
  runs.per_paramset.resize(config.paramsets.size());
  runs.durations.resize(config.paramsets.size());
  for (std::size_t ps = 0; ps < config.paramsets.size(); ++ps) {
    const SimParams& params = config.paramsets[ps];
    const std::size_t expected_rows =
        static_cast<std::size_t>(params.iterations) + 1;
    for (int rep = 0; rep < config.n_reps; ++rep) {
      const std::uint64_t seed = derive_seed(
          trial_seed, ps * static_cast<std::uint64_t>(config.n_reps) +
                          static_cast<std::uint64_t>(rep));
      const auto start = std::chrono::steady_clock::now();
      const ProcessResult run =
          run_process(run_argv(spec, params, seed), spec.timeout_full);
      const auto stop = std::chrono::steady_clock::now();
      const std::string where = "paramset " + std::to_string(ps + 1) + ", rep " +
                                std::to_string(rep + 1);
      if (run.timed_out || !run.exited || run.exit_code != 0) {
        StageScore s;
        s.score = 3;
        s.reason = (run.timed_out ? "timeout at " : "runtime error at ") + where;
        s.stage_log.push_back("full: " + s.reason);
        return s;
      }
      try {
        std::istringstream stream(run.output);
        runs.per_paramset[ps].push_back(read_output_csv(stream, expected_rows));
      } catch (const FormatError& e) {
        StageScore s;
        s.score = 4;
        s.reason = "output format violation at " + where + ": " + e.what();
        s.stage_log.push_back("full: " + s.reason);
        return s;
      }
      runs.durations[ps].push_back(
          std::chrono::duration<double>(stop - start).count());
    }
  }
  return runs;
}

StageScore score_from_tests(const CandidateRuns& runs,
                            std::vector<ParamSetTest> tests) {
  StageScore s;
  s.tests = std::move(tests);
  s.score = 6;
  for (const ParamSetTest& t : s.tests)
    if (t.significant) s.score = 5;
  if (s.score == 6) {
    s.reason = "statistically indistinguishable";
    for (const auto& durations : runs.durations)
      s.timings.push_back(summarize_times(durations));
  } else {
    s.reason = "statistically incorrect output";
  }
  for (std::size_t i = 0; i < s.tests.size(); ++i)
    s.stage_log.push_back("stats: paramset " + std::to_string(i + 1) +
                          " k=" + std::to_string(s.tests[i].k) + " p_adj=" +
                          format_fixed6(s.tests[i].p_adjusted));
  return s;
}

}  // namespace

StageScore full_evaluation(const CandidateSpec& spec,
                           const std::vector<std::vector<SimOutput>>& baseline,
                           const HarnessConfig& config,
                           std::uint64_t trial_seed) {
  if (baseline.size() != config.paramsets.size())
    throw std::invalid_argument("full_evaluation: baseline group count mismatch");

  auto outcome = execute_candidate(spec, config, trial_seed);
  if (std::holds_alternative<StageScore>(outcome))
    return std::get<StageScore>(outcome);
  const CandidateRuns& runs = std::get<CandidateRuns>(outcome);

  std::vector<std::pair<std::vector<SimOutput>, std::vector<SimOutput>>> pairs;
  for (std::size_t ps = 0; ps < baseline.size(); ++ps)
    pairs.emplace_back(baseline[ps], runs.per_paramset[ps]);
  StatsConfig stats = config.stats;
  stats.seed = derive_seed(config.stats.seed, trial_seed);
  const ComparisonResult cmp = compare_models(pairs, stats);
  return score_from_tests(runs, cmp.sets);
}

BatchResult evaluate_batch(const std::vector<CandidateSpec>& specs, int trials,
                           const std::vector<std::vector<SimOutput>>& baseline,
                           const HarnessConfig& config, int jobs) {
  if (specs.empty()) throw std::invalid_argument("evaluate_batch: no candidates");
  if (trials < 1) throw std::invalid_argument("evaluate_batch: trials must be >= 1");
  if (baseline.size() != config.paramsets.size())
    throw std::invalid_argument("evaluate_batch: baseline group count mismatch");

  struct Unit {
    std::size_t spec_idx;
    int trial;
    std::uint64_t trial_seed;
    std::variant<StageScore, CandidateRuns> outcome;
  };
  std::vector<Unit> units;
  for (std::size_t s = 0; s < specs.size(); ++s)
    for (int t = 0; t < trials; ++t)
      units.push_back(
          {s, t, derive_seed(derive_seed(config.base_seed, s), t), StageScore{}});

  // At most one candidate process per worker; seeds are static, so the
  // schedule cannot change any outcome.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      units[i].outcome =
          execute_candidate(specs[units[i].spec_idx], config, units[i].trial_seed);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Statistical stage: one joint BH family over every test in the batch.
  struct PendingTest {
    std::size_t unit_idx;
    std::size_t ps;
    ParamSetTest test;
  };
  std::vector<PendingTest> pending;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!std::holds_alternative<CandidateRuns>(units[i].outcome)) continue;
    const auto& runs = std::get<CandidateRuns>(units[i].outcome);
    const std::uint64_t stats_seed =
        derive_seed(config.stats.seed, units[i].trial_seed);
    for (std::size_t ps = 0; ps < baseline.size(); ++ps) {
      ParamSetTest test =
          run_paramset_test(baseline[ps], runs.per_paramset[ps], config.stats,
                            derive_seed(stats_seed, ps));
      pending.push_back({i, ps, test});
    }
  }
  std::vector<double> raw;
  raw.reserve(pending.size());
  for (const auto& p : pending) raw.push_back(p.test.p_raw);
  const auto adjusted = raw.empty() ? std::vector<double>{} : bh_adjust(raw);

  std::vector<std::vector<ParamSetTest>> unit_tests(units.size());
  for (std::size_t j = 0; j < pending.size(); ++j) {
    pending[j].test.p_adjusted = adjusted[j];
    pending[j].test.significant = adjusted[j] < config.stats.alpha;
    unit_tests[pending[j].unit_idx].push_back(pending[j].test);
  }

  BatchResult batch;
  std::map<std::string, std::vector<int>> scores_by_spec;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const Unit& u = units[i];
    StageScore score =
        std::holds_alternative<StageScore>(u.outcome)
            ? std::get<StageScore>(u.outcome)
            : score_from_tests(std::get<CandidateRuns>(u.outcome),
                               unit_tests[i]);
    const CandidateSpec& spec = specs[u.spec_idx];
    batch.results.push_back(
        {spec.id, u.trial + 1, u.trial_seed, score.score, score.reason});
    scores_by_spec[spec.id].push_back(score.score);
    for (std::size_t ps = 0; ps < score.tests.size(); ++ps) {
      const ParamSetTest& t = score.tests[ps];
      batch.pvalues.push_back({spec.id, u.trial + 1, std::to_string(ps + 1), t.k,
                               t.p_raw, t.p_adjusted, t.significant});
    }
  }
  for (const auto& [id, scores] : scores_by_spec)
    batch.success_rates[id] = success_rate(scores);
  return batch;
}

}  // namespace pphpc
