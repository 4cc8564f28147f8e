#ifndef PPHPC_IO_HPP
#define PPHPC_IO_HPP

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pphpc/params.hpp"
#include "pphpc/sim.hpp"

namespace pphpc {

/// Classified parse failure for the external file formats. Malformed input
/// is always rejected, never coerced.
class FormatError : public std::runtime_error {
 public:
  enum class Kind { Header, Cell, Length, Domain };

  FormatError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Header of the simulation output CSV, fixed verbatim.
extern const char* const kOutputCsvHeader;

/// Writes the output CSV: fixed header, counts as decimal integers, means
/// with exactly 6 decimal places, '\n' line endings, no trailing blank
/// line variance. Identical inputs produce identical bytes.
void write_output_csv(const SimOutput& output, std::ostream& sink);

/// Parses an output CSV. When expected_rows is given the data row count
/// must match it exactly.
SimOutput read_output_csv(std::istream& source,
                          std::optional<std::size_t> expected_rows = std::nullopt);

/// key=value parameter files; '#' starts a comment line. All 14 keys must
/// be present exactly once and satisfy the SimParams invariants.
SimParams read_param_file(std::istream& source);
void write_param_file(const SimParams& params, std::ostream& sink);

/// PC-score export for external plotting: a comment line with the
/// explained-variance ratios (4 decimals), then group,pc1,...,pck.
void export_pc_scores(const Eigen::MatrixXd& scores,
                      const std::vector<std::string>& labels,
                      const Eigen::VectorXd& explained_ratios, int k,
                      std::ostream& sink);

/// One row of results.csv.
struct ResultRow {
  std::string candidate_id;
  std::int64_t trial_id = 0;
  std::uint64_t seed = 0;
  int score = 1;  // 1..6
  std::string reason;
};

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& sink);

/// One row of the p-value table (one statistical test).
struct PValueRow {
  std::string candidate_id;
  std::int64_t trial_id = 0;
  std::string paramset;
  int k = 0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  bool significant = false;
};

void write_pvalue_csv(const std::vector<PValueRow>& rows, std::ostream& sink);

/// Formats a double with exactly 6 decimal places (the means rule).
std::string format_fixed6(double value);

}  // namespace pphpc

#endif
