#ifndef PPHPC_BENCH_HPP
#define PPHPC_BENCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pphpc/params.hpp"

namespace pphpc {

/// A replication runner failed; index identifies which one.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(int index, const std::string& message)
      : std::runtime_error("replication " + std::to_string(index) + ": " + message),
        index_(index) {}

  int index() const { return index_; }

 private:
  int index_;
};

struct TimingSummary {
  double mean_time = 0.0;           // seconds
  double sample_std = 0.0;          // n-1 denominator; 0 when n < 2
  double s_rel = 0.0;               // 100 * s / mean
  int n = 0;
  std::optional<double> ratio_to_reference;
};

/// Wall-clock durations of n replications, run sequentially so timings are
/// not skewed by contention. Replication i uses seed derive_seed(base_seed, i).
/// A throwing runner aborts with a ReplicationError carrying its index.
std::vector<double> time_replications(
    const std::function<void(const SimParams&, std::uint64_t)>& runner,
    const SimParams& params, int n, std::uint64_t base_seed);

/// Mean, sample standard deviation, relative std (percent), and optional
/// ratio to a reference mean.
TimingSummary summarize_times(const std::vector<double>& times,
                              std::optional<double> reference_mean = std::nullopt);

}  // namespace pphpc

#endif
