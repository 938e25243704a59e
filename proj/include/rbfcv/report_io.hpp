#pragma once

#include "rbfcv/crossval.hpp"
#include "rbfcv/tuning.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rbfcv {

/// Shortest decimal text that parses back to the same double ("nan", "inf"
/// for non-finite values).
std::string format_double(double value);
/// Inverse of format_double; also accepts "n/a" as NaN.
double parse_double(std::string_view text);

/// CVReport as CSV:
///   fold_index,point_index,signed_error
///   <1-based fold>,<1-based point>,<error>      one row per point, fold order
///   summary,<l2_norm>,<wall_time>
void write_cv_report_csv(std::ostream& out, const CVReport& report);

struct CvReportRows {
  std::vector<Index> fold_index;
  std::vector<Index> point_index;
  std::vector<double> signed_error;
  double l2_norm = 0.0;
  double wall_time = 0.0;
};
CvReportRows read_cv_report_csv(std::istream& in);

/// Side-by-side sweep table; any strategy may be absent (written as n/a):
///   epsilon,norm_exact,norm_surrogate,norm_empirical,time_exact,time_surrogate,time_empirical
void write_sweep_csv(std::ostream& out, const std::vector<double>& epsilons,
                     const SweepResult* exact, const SweepResult* surrogate,
                     const SweepResult* empirical);

struct SweepRow {
  double epsilon;
  std::array<double, 3> norms;  ///< exact, surrogate, empirical
  std::array<double, 3> times;
};
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Splits one CSV line on commas (no quoting is used by the writers here).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace rbfcv
