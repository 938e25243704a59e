#include "rbfcv/report_io.hpp"

#include "rbfcv/errors.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace rbfcv {

namespace {

constexpr std::string_view kCvHeader = "fold_index,point_index,signed_error";
constexpr std::string_view kSweepHeader =
    "epsilon,norm_exact,norm_surrogate,norm_empirical,time_exact,time_surrogate,time_empirical";

Index parse_index(std::string_view text) {
  Index value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("invalid integer field '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InvalidArgument("cannot format value");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan" || text == "n/a") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("invalid numeric field '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

void write_cv_report_csv(std::ostream& out, const CVReport& report) {
  out << kCvHeader << '\n';
  for (std::size_t l = 0; l < report.folds.k(); ++l) {
    const auto& fold = report.folds.fold(l);
    for (std::size_t i = 0; i < fold.size(); ++i) {
      out << (l + 1) << ',' << fold.position(i) << ','
          << format_double(report.errors(fold.offsets()[i])) << '\n';
    }
  }
  out << "summary," << format_double(report.l2_norm) << ',' << format_double(report.wall_time)
      << '\n';
}

CvReportRows read_cv_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCvHeader) {
    throw InvalidArgument("CV report CSV must start with '" + std::string(kCvHeader) + "'");
  }
  CvReportRows rows;
  bool summary = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) throw InvalidArgument("CV report row must have 3 fields: " + line);
    if (fields[0] == "summary") {
      rows.l2_norm = parse_double(fields[1]);
      rows.wall_time = parse_double(fields[2]);
      summary = true;
      continue;
    }
    rows.fold_index.push_back(parse_index(fields[0]));
    rows.point_index.push_back(parse_index(fields[1]));
    rows.signed_error.push_back(parse_double(fields[2]));
  }
  if (!summary) throw InvalidArgument("CV report CSV is missing its summary row");
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<double>& epsilons,
                     const SweepResult* exact, const SweepResult* surrogate,
                     const SweepResult* empirical) {
  const std::array<const SweepResult*, 3> columns{exact, surrogate, empirical};
  for (const auto* c : columns) {
    if (c != nullptr && c->epsilons.size() != epsilons.size()) {
      throw InvalidArgument("sweep results do not share the epsilon grid");
    }
  }
  out << kSweepHeader << '\n';
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    out << format_double(epsilons[i]);
    for (const auto* c : columns) out << ',' << (c ? format_double(c->norms[i]) : "n/a");
    for (const auto* c : columns) out << ',' << (c ? format_double(c->times[i]) : "n/a");
    out << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) {
    throw InvalidArgument("sweep CSV must start with '" + std::string(kSweepHeader) + "'");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw InvalidArgument("sweep row must have 7 fields: " + line);
    SweepRow row{};
    row.epsilon = parse_double(f[0]);
    for (std::size_t j = 0; j < 3; ++j) {
      row.norms[j] = parse_double(f[1 + j]);
      row.times[j] = parse_double(f[4 + j]);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rbfcv
