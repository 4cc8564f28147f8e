#include "pphpc/bench.hpp"

#include <chrono>
#include <cmath>

#include "pphpc/rng.hpp"

namespace pphpc {

std::vector<double> time_replications(
    const std::function<void(const SimParams&, std::uint64_t)>& runner,
    const SimParams& params, int n, std::uint64_t base_seed) {
  if (n < 1) throw std::invalid_argument("time_replications: n must be >= 1");
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::uint64_t seed = derive_seed(base_seed, static_cast<std::uint64_t>(i));
    const auto start = std::chrono::steady_clock::now();
    try {
      runner(params, seed);
    } catch (const std::exception& e) {
      throw ReplicationError(i, e.what());
    }
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }
  return times;
}

TimingSummary summarize_times(const std::vector<double>& times,
                              std::optional<double> reference_mean) {
  if (times.empty()) throw std::invalid_argument("summarize_times: empty list");
  for (double t : times)
    if (!(t > 0.0))
      throw std::invalid_argument("summarize_times: non-positive duration");

  TimingSummary summary;
  summary.n = static_cast<int>(times.size());
  double sum = 0.0;
  for (double t : times) sum += t;
  summary.mean_time = sum / static_cast<double>(summary.n);
  if (summary.n >= 2) {
    double ss = 0.0;
    for (double t : times)
      ss += (t - summary.mean_time) * (t - summary.mean_time);
    summary.sample_std = std::sqrt(ss / static_cast<double>(summary.n - 1));
  }
  summary.s_rel = 100.0 * summary.sample_std / summary.mean_time;
  if (reference_mean) {
    if (!(*reference_mean > 0.0))
      throw std::invalid_argument("summarize_times: non-positive reference mean");
    summary.ratio_to_reference = summary.mean_time / *reference_mean;
  }
  return summary;
}

}  // namespace pphpc
