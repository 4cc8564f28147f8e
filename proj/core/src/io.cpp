#include "pphpc/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace pphpc {

const char* const kOutputCsvHeader =
    "total_prey,total_predators,total_food,mean_energy_prey,"
    "mean_energy_predators,mean_c";

std::string format_fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

void write_output_csv(const SimOutput& output, std::ostream& sink) {
  sink << kOutputCsvHeader << '\n';
  for (const OutputRow& row : output.rows) {
    sink << row.total_prey << ',' << row.total_predators << ','
         << row.total_food << ',' << format_fixed6(row.mean_energy_prey) << ','
         << format_fixed6(row.mean_energy_predators) << ','
         << format_fixed6(row.mean_c) << '\n';
  }
  if (!sink) throw std::runtime_error("write_output_csv: sink write failure");
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::int64_t parse_count(const std::string& field, std::size_t line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw FormatError(FormatError::Kind::Cell,
                      "line " + std::to_string(line_no) +
                          ": non-integer count '" + field + "'");
  if (value < 0)
    throw FormatError(FormatError::Kind::Domain,
                      "line " + std::to_string(line_no) + ": negative count " +
                          field);
  return value;
}

double parse_real(const std::string& field, std::size_t line_no) {
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE)
    throw FormatError(FormatError::Kind::Cell,
                      "line " + std::to_string(line_no) +
                          ": non-numeric field '" + field + "'");
  return value;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

SimOutput read_output_csv(std::istream& source,
                          std::optional<std::size_t> expected_rows) {
  std::string line;
  if (!std::getline(source, line))
    throw FormatError(FormatError::Kind::Header, "empty input, header missing");
  if (strip_cr(line) != kOutputCsvHeader)
    throw FormatError(FormatError::Kind::Header,
                      "bad header: '" + line + "'");

  SimOutput out;
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    line = strip_cr(line);
    const auto fields = split_fields(line);
    if (fields.size() != 6)
      throw FormatError(FormatError::Kind::Cell,
                        "line " + std::to_string(line_no) + ": expected 6 fields, got " +
                            std::to_string(fields.size()));
    OutputRow row;
    row.total_prey = parse_count(fields[0], line_no);
    row.total_predators = parse_count(fields[1], line_no);
    row.total_food = parse_count(fields[2], line_no);
    row.mean_energy_prey = parse_real(fields[3], line_no);
    row.mean_energy_predators = parse_real(fields[4], line_no);
    row.mean_c = parse_real(fields[5], line_no);
    out.rows.push_back(row);
  }
  if (expected_rows && out.rows.size() != *expected_rows)
    throw FormatError(FormatError::Kind::Length,
                      "expected " + std::to_string(*expected_rows) +
                          " rows, got " + std::to_string(out.rows.size()));
  return out;
}

SimParams read_param_file(std::istream& source) {
  std::map<std::string, std::int64_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    line = strip_cr(line);
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError(FormatError::Kind::Cell,
                        "line " + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::int64_t parsed = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || ptr != value.data() + value.size())
      throw FormatError(FormatError::Kind::Cell,
                        key + ": non-integer value '" + value + "'");
    if (seen.contains(key))
      throw FormatError(FormatError::Kind::Cell, "duplicate key " + key);
    seen.emplace(key, parsed);
  }

  SimParams params;
  const auto& names = SimParams::field_names();
  for (std::size_t i = 0; i < SimParams::kFieldCount; ++i) {
    const auto it = seen.find(names[i]);
    if (it == seen.end())
      throw FormatError(FormatError::Kind::Cell,
                        std::string("missing key ") + names[i]);
    params.field(i) = it->second;
    seen.erase(it);
  }
  if (!seen.empty())
    throw FormatError(FormatError::Kind::Cell,
                      "unknown key " + seen.begin()->first);
  params.validate();
  return params;
}

void write_param_file(const SimParams& params, std::ostream& sink) {
  const auto& names = SimParams::field_names();
  for (std::size_t i = 0; i < SimParams::kFieldCount; ++i)
    sink << names[i] << '=' << params.field(i) << '\n';
  if (!sink) throw std::runtime_error("write_param_file: sink write failure");
}

void export_pc_scores(const Eigen::MatrixXd& scores,
                      const std::vector<std::string>& labels,
                      const Eigen::VectorXd& explained_ratios, int k,
                      std::ostream& sink) {
  sink << "# explained_variance_ratios:";
  for (int j = 0; j < k; ++j) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", explained_ratios(j));
    sink << (j == 0 ? " " : ",") << buf;
  }
  sink << '\n';
  sink << "group";
  for (int j = 1; j <= k; ++j) sink << ",pc" << j;
  sink << '\n';
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    sink << labels[static_cast<std::size_t>(i)];
    for (int j = 0; j < k; ++j) sink << ',' << format_fixed6(scores(i, j));
    sink << '\n';
  }
  if (!sink) throw std::runtime_error("export_pc_scores: sink write failure");
}

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& sink) {
  sink << "candidate,trial,seed,score,reason\n";
  for (const ResultRow& r : rows) {
    std::string reason = r.reason;
    for (char& c : reason)
      if (c == ',' || c == '\n') c = ';';
    sink << r.candidate_id << ',' << r.trial_id << ',' << r.seed << ','
         << r.score << ',' << reason << '\n';
  }
  if (!sink) throw std::runtime_error("write_results_csv: sink write failure");
}

void write_pvalue_csv(const std::vector<PValueRow>& rows, std::ostream& sink) {
  sink << "candidate,trial,paramset,k,p_raw,p_adjusted,significant\n";
  for (const PValueRow& r : rows) {
    sink << r.candidate_id << ',' << r.trial_id << ',' << r.paramset << ','
         << r.k << ',' << format_fixed6(r.p_raw) << ','
         << format_fixed6(r.p_adjusted) << ',' << (r.significant ? 1 : 0)
         << '\n';
  }
  if (!sink) throw std::runtime_error("write_pvalue_csv: sink write failure");
}

}  // namespace pphpc
