#include "pphpc/stats.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pphpc/rng.hpp"

namespace pphpc {

std::vector<double> standardize_series(std::span<const double> values) {
  if (values.empty())
    throw std::invalid_argument("standardize_series: empty input");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= n;  // population variance
  std::vector<double> out(values.size());
  if (var <= 0.0) return out;  // constant series -> all zeros
  const double inv_std = 1.0 / std::sqrt(var);
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = (values[i] - mean) * inv_std;
  return out;
}

namespace {

void append_standardized(const SimOutput& run, Eigen::MatrixXd& data,
                         Eigen::Index row) {
  const std::size_t len = run.rows.size();
  std::vector<double> series(len);
  for (int col = 0; col < 6; ++col) {
    for (std::size_t t = 0; t < len; ++t) {
      const OutputRow& r = run.rows[t];
      switch (col) {
        case 0: series[t] = static_cast<double>(r.total_prey); break;
        case 1: series[t] = static_cast<double>(r.total_predators); break;
        case 2: series[t] = static_cast<double>(r.total_food); break;
        case 3: series[t] = r.mean_energy_prey; break;
        case 4: series[t] = r.mean_energy_predators; break;
        default: series[t] = r.mean_c; break;
      }
    }
    const auto scaled = standardize_series(series);
    for (std::size_t t = 0; t < len; ++t)
      data(row, static_cast<Eigen::Index>(col * len + t)) = scaled[t];
  }
}

}  // namespace

FeatureMatrix build_feature_matrix(const std::vector<SimOutput>& group_a,
                                   const std::vector<SimOutput>& group_b) {
  if (group_a.empty() || group_b.empty())
    throw std::invalid_argument("build_feature_matrix: empty group");
  const std::size_t len = group_a.front().rows.size();
  if (len == 0)
    throw std::invalid_argument("build_feature_matrix: run with no rows");
  for (const auto* group : {&group_a, &group_b})
    for (const SimOutput& run : *group)
      if (run.rows.size() != len)
        throw std::invalid_argument(
            "build_feature_matrix: run length mismatch (" +
            std::to_string(run.rows.size()) + " vs " + std::to_string(len) + ")");

  FeatureMatrix fm;
  fm.n_a = static_cast<Eigen::Index>(group_a.size());
  fm.n_b = static_cast<Eigen::Index>(group_b.size());
  fm.data.resize(fm.n_a + fm.n_b, static_cast<Eigen::Index>(6 * len));
  Eigen::Index row = 0;
  for (const SimOutput& run : group_a) append_standardized(run, fm.data, row++);
  for (const SimOutput& run : group_b) append_standardized(run, fm.data, row++);
  return fm;
}

PcaResult pca_project(const Eigen::MatrixXd& matrix, double min_variance) {
  const Eigen::Index n = matrix.rows();
  if (n < 2) throw std::invalid_argument("pca_project: fewer than 2 rows");
  if (!(min_variance > 0.0 && min_variance <= 1.0))
    throw std::invalid_argument("pca_project: min_variance outside (0,1]");

  // n << p, so work with the n x n Gram matrix of the centered data: its
  // eigenvalues are the squared singular values and U * sqrt(lambda) are
  // the PC scores.
  const Eigen::MatrixXd centered = matrix.rowwise() - matrix.colwise().mean();
  const Eigen::MatrixXd gram = centered * centered.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("pca_project: eigendecomposition failed");

  // Eigen returns ascending order; flip to descending.
  Eigen::VectorXd lambda = solver.eigenvalues().reverse();
  Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index i = 0; i < n; ++i)
    if (lambda(i) < 0.0) lambda(i) = 0.0;

  PcaResult result;
  const double total = lambda.sum();
  if (total <= 0.0) {
    // All rows identical: no variance to explain.
    result.scores = Eigen::MatrixXd::Zero(n, n);
    result.explained_ratios = Eigen::VectorXd::Zero(n);
    result.explained_ratios(0) = 1.0;
    result.k = 1;
    return result;
  }
  result.explained_ratios = lambda / total;
  result.scores = vectors * lambda.cwiseSqrt().asDiagonal();
  double cumulative = 0.0;
  result.k = static_cast<int>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += result.explained_ratios(i);
    if (cumulative >= min_variance) {
      result.k = static_cast<int>(i) + 1;
      break;
    }
  }
  return result;
}

namespace {

Eigen::MatrixXd pooled_distances(const Eigen::MatrixXd& pool) {
  const Eigen::Index n = pool.rows();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (pool.row(i) - pool.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  return dist;
}

double statistic_from_distances(const Eigen::MatrixXd& dist,
                                const std::vector<std::uint32_t>& index,
                                std::size_t n) {
  const std::size_t total = index.size();
  const std::size_t m = total - n;
  double within_x = 0.0, within_y = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = i + 1; j < total; ++j) {
      const double d = dist(index[i], index[j]);
      if (i < n && j < n)
        within_x += d;
      else if (i >= n && j >= n)
        within_y += d;
      else
        cross += d;
    }
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const double e = 2.0 / (dn * dm) * cross - 2.0 / (dn * dn) * within_x -
                   2.0 / (dm * dm) * within_y;
  return dn * dm / (dn + dm) * e;
}

void check_energy_inputs(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() == 0 || y.rows() == 0)
    throw std::invalid_argument("energy statistic: empty point set");
  if (x.cols() != y.cols())
    throw std::invalid_argument("energy statistic: dimension mismatch");
}

}  // namespace

double energy_statistic(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  check_energy_inputs(x, y);
  Eigen::MatrixXd pool(x.rows() + y.rows(), x.cols());
  pool << x, y;
  const Eigen::MatrixXd dist = pooled_distances(pool);
  std::vector<std::uint32_t> index(static_cast<std::size_t>(pool.rows()));
  std::iota(index.begin(), index.end(), 0u);
  return statistic_from_distances(dist, index, static_cast<std::size_t>(x.rows()));
}

double energy_test(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   int n_permutations, std::uint64_t seed) {
  check_energy_inputs(x, y);
  if (n_permutations < 1)
    throw std::invalid_argument("energy_test: n_permutations must be >= 1");

  Eigen::MatrixXd pool(x.rows() + y.rows(), x.cols());
  pool << x, y;
  const Eigen::MatrixXd dist = pooled_distances(pool);
  const std::size_t n = static_cast<std::size_t>(x.rows());
  const std::size_t total = static_cast<std::size_t>(pool.rows());

  std::vector<std::uint32_t> index(total);
  std::iota(index.begin(), index.end(), 0u);
  const double observed = statistic_from_distances(dist, index, n);

  int at_least = 0;
  for (int p = 0; p < n_permutations; ++p) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
    std::iota(index.begin(), index.end(), 0u);
    rng.shuffle(index);
    if (statistic_from_distances(dist, index, n) >= observed) ++at_least;
  }
  return static_cast<double>(1 + at_least) /
         static_cast<double>(n_permutations + 1);
}

std::vector<double> bh_adjust(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  for (double p : p_values)
    if (!(p > 0.0 && p <= 1.0))
      throw std::invalid_argument("bh_adjust: p-value outside (0,1]");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p_values[a] < p_values[b];
  });

  std::vector<double> adjusted(m);
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    const double candidate =
        static_cast<double>(m) * p_values[order[r]] / static_cast<double>(r + 1);
    running = std::min(running, candidate);
    adjusted[order[r]] = std::min(running, 1.0);
  }
  return adjusted;
}

ParamSetTest run_paramset_test(const std::vector<SimOutput>& group_a,
                               const std::vector<SimOutput>& group_b,
                               const StatsConfig& config, std::uint64_t seed) {
  const FeatureMatrix fm = build_feature_matrix(group_a, group_b);
  const PcaResult pca = pca_project(fm.data, config.min_variance);
  const Eigen::MatrixXd scores = pca.scores.leftCols(pca.k);
  ParamSetTest test;
  test.k = pca.k;
  test.p_raw = energy_test(scores.topRows(fm.n_a), scores.bottomRows(fm.n_b),
                           config.n_permutations, seed);
  return test;
}

ComparisonResult compare_models(
    const std::vector<std::pair<std::vector<SimOutput>, std::vector<SimOutput>>>&
        paramset_groups,
    const StatsConfig& config) {
  if (paramset_groups.empty())
    throw std::invalid_argument("compare_models: no parameter sets");

  ComparisonResult result;
  std::vector<double> raw;
  for (std::size_t i = 0; i < paramset_groups.size(); ++i) {
    const auto& [a, b] = paramset_groups[i];
    result.sets.push_back(
        run_paramset_test(a, b, config, derive_seed(config.seed, i)));
    raw.push_back(result.sets.back().p_raw);
  }
  const auto adjusted = bh_adjust(raw);
  result.overall_score = 6;
  for (std::size_t i = 0; i < result.sets.size(); ++i) {
    result.sets[i].p_adjusted = adjusted[i];
    result.sets[i].significant = adjusted[i] < config.alpha;
    if (result.sets[i].significant) result.overall_score = 5;
  }
  return result;
}

double success_rate(const std::vector<int>& scores) {
  if (scores.empty()) throw std::invalid_argument("success_rate: empty input");
  const auto sixes = std::count(scores.begin(), scores.end(), 6);
  return 100.0 * static_cast<double>(sixes) / static_cast<double>(scores.size());
}

}  // namespace pphpc
