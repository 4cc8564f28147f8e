#ifndef PPHPC_STATS_HPP
#define PPHPC_STATS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pphpc/sim.hpp"

namespace pphpc {

/// Rows are runs: first n_a rows group A, then n_b rows group B. Each row
/// is the run's six standardized series concatenated in canonical column
/// order (length 6 * (iterations + 1)).
struct FeatureMatrix {
  Eigen::MatrixXd data;
  Eigen::Index n_a = 0;
  Eigen::Index n_b = 0;
};

/// Principal-component scores of the pooled feature matrix.
///
/// scores holds all components (n columns); explained_ratios sums to 1 over
/// all components. k is the smallest count whose cumulative ratio reaches
/// the variance target. Component signs are unconstrained.
struct PcaResult {
  Eigen::MatrixXd scores;
  Eigen::VectorXd explained_ratios;
  int k = 1;
};

/// Zero-mean, unit-population-std rescaling. A constant series maps to all
/// zeros so degenerate runs (e.g. extinctions) stay comparable.
std::vector<double> standardize_series(std::span<const double> values);

FeatureMatrix build_feature_matrix(const std::vector<SimOutput>& group_a,
                                   const std::vector<SimOutput>& group_b);

PcaResult pca_project(const Eigen::MatrixXd& matrix, double min_variance = 0.80);

/// Scaled two-sample energy statistic (Euclidean distances): the cross /
/// within-sample distance sum combination times n*m/(n+m). Symmetric in
/// its arguments; zero for identical multisets.
double energy_statistic(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Permutation p-value for the energy statistic with the add-one
/// estimator: (1 + #{permuted >= observed}) / (n_permutations + 1). Each
/// permutation's relabeling derives from (seed, permutation index), so the
/// result is schedule-independent.
double energy_test(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   int n_permutations, std::uint64_t seed);

/// Benjamini-Hochberg step-up adjustment, returned in input order.
std::vector<double> bh_adjust(const std::vector<double>& p_values);

struct StatsConfig {
  double alpha = 0.01;
  double min_variance = 0.80;
  int n_permutations = 1000;
  std::uint64_t seed = 0;
};

/// Outcome of one parameter set's test.
struct ParamSetTest {
  int k = 1;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  bool significant = false;
};

struct ComparisonResult {
  std::vector<ParamSetTest> sets;
  int overall_score = 6;  // 6 iff no set significant, else 5
};

/// Raw (un-adjusted) test for one parameter set: feature matrix -> PCA ->
/// energy test on the first k PC scores. Exposed separately so batch
/// callers can apply one joint BH family across many candidates.
ParamSetTest run_paramset_test(const std::vector<SimOutput>& group_a,
                               const std::vector<SimOutput>& group_b,
                               const StatsConfig& config, std::uint64_t seed);

/// Full comparison over parameter sets, with BH applied jointly over the
/// p-values of this invocation. The verdict is invariant to swapping the
/// groups.
ComparisonResult compare_models(
    const std::vector<std::pair<std::vector<SimOutput>, std::vector<SimOutput>>>&
        paramset_groups,
    const StatsConfig& config);

/// Percentage of scores equal to 6.
double success_rate(const std::vector<int>& scores);

}  // namespace pphpc

#endif
