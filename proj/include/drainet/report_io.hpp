#ifndef DRAINET_REPORT_IO_HPP
#define DRAINET_REPORT_IO_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drainet/estimators.hpp"

namespace drainet {

// One output line with the stable column superset. Inapplicable fields stay
// empty; columns are identical across subcommands.
struct OutputRow {
  std::string experiment;
  double p = 0.0, epsilon = 0.0, b = 0.0, n = 0.0, alpha = 0.0;
  std::optional<double> k, delta, t, step, x, estimate, ci, target;
  std::string verdict;  // pass / fail / diagnostic / empty
  std::optional<i64> samples;
  u64 seed = 0;
};

extern const char* const kCsvHeader;

OutputRow to_row(const ExperimentReport& report);
std::string format_double(double v);
std::string to_csv(std::span<const OutputRow> rows);
std::string to_json(std::span<const OutputRow> rows);

inline std::vector<OutputRow> to_rows(std::span<const ExperimentReport> reports) {
  std::vector<OutputRow> rows;
  rows.reserve(reports.size());
  for (const ExperimentReport& r : reports) rows.push_back(to_row(r));
  return rows;
}

}  // namespace drainet

#endif
