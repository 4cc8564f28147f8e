#ifndef PPHPC_HARNESS_HPP
#define PPHPC_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pphpc/bench.hpp"
#include "pphpc/io.hpp"
#include "pphpc/params.hpp"
#include "pphpc/sim.hpp"
#include "pphpc/stats.hpp"

namespace pphpc {

/// Expected handshake line for the --check probe.
extern const char* const kHandshakeLine;

/// An external simulator under evaluation. Candidates interact only via
/// argv, standard output, and exit status; their output is never executed.
///
/// Invocation contract: `exe [extra_args...] --check` must exit 0 and print
/// "pphpc-candidate 1"; `exe [extra_args...] p1 ... p14 seed` (the 14
/// parameters in canonical order, then the seed, all decimal) must print a
/// valid output CSV with iterations+1 rows on standard output.
struct CandidateSpec {
  std::string id;
  std::string exe;
  std::vector<std::string> extra_args;
  double timeout_smoke = 30.0;
  double timeout_full = 3600.0;  // per replication
};

/// Ordinal pipeline outcome. 1 no runnable artifact; 2 handshake failure;
/// 3 runtime error or timeout; 4 output format violation; 5 statistically
/// incorrect; 6 statistically indistinguishable.
struct StageScore {
  int score = 1;
  std::string reason;
  std::vector<std::string> stage_log;
  std::vector<ParamSetTest> tests;                 // filled for scores 5/6
  std::vector<TimingSummary> timings;              // per paramset, score 6 only
};

struct HarnessConfig {
  std::vector<SimParams> paramsets;  // evaluated in order; smoke uses [0]
  int n_reps = 30;
  std::uint64_t base_seed = 0;
  StatsConfig stats;
};

/// Stage 1/2 gate: score 1 if the target is missing, score 2 if the probe
/// runs but fails the handshake. Returns nullopt on pass.
std::optional<StageScore> check_artifact(const CandidateSpec& spec);

/// Stage 3/4 gate: 5-iteration run under paramsets[0]. Nonzero exit or
/// timeout scores 3; malformed output scores 4. Returns nullopt on pass.
std::optional<StageScore> smoke_test(const CandidateSpec& spec,
                                     const HarnessConfig& config,
                                     std::uint64_t seed);

/// Runs one candidate replication and parses its output.
/// Throws nothing; failures are encoded in the returned StageScore.
struct CandidateRuns {
  std::vector<std::vector<SimOutput>> per_paramset;
  std::vector<std::vector<double>> durations;  // wall clock per replication
};

/// Full pipeline for one candidate trial. baseline holds one group of
/// SimOutput per paramset. The statistical stage adjusts p-values within
/// this invocation only; use evaluate_batch for a joint BH family.
StageScore full_evaluation(const CandidateSpec& spec,
                           const std::vector<std::vector<SimOutput>>& baseline,
                           const HarnessConfig& config, std::uint64_t trial_seed);

/// One StageScore per (spec, trial). All statistical tests in the batch
/// form a single BH family. Scheduling over `jobs` workers is
/// outcome-invariant because every seed is a static function of
/// (base_seed, spec index, trial). Candidate failures are data, not errors.
struct BatchResult {
  std::vector<ResultRow> results;                       // spec-major, trial order
  std::vector<PValueRow> pvalues;                       // tests that ran
  std::map<std::string, double> success_rates;          // percent per candidate
};

BatchResult evaluate_batch(const std::vector<CandidateSpec>& specs, int trials,
                           const std::vector<std::vector<SimOutput>>& baseline,
                           const HarnessConfig& config, int jobs = 1);

}  // namespace pphpc

#endif
