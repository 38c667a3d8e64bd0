#pragma once

// CSV persistence for experiment outputs. Two files with pinned schemas:
//
//   runs.csv     seed,arm,sample_index,amari_index
//   summary.csv  arm,mean_iters,stddev,ci95_lo,ci95_hi,converged,diverged,improvement_vs_arm0
//
// UTF-8, header row, '.' decimal point, doubles printed with %.17g so a
// round trip through text is value-exact. Optional statistics (no converged
// runs, no baseline mean) are empty cells.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "easi/metrics.hpp"

namespace easi::bench {

inline constexpr const char* kRunsHeader = "seed,arm,sample_index,amari_index";
inline constexpr const char* kSummaryHeader =
    "arm,mean_iters,stddev,ci95_lo,ci95_hi,converged,diverged,improvement_vs_arm0";

/// One (seed, arm) run with its full Amari-index series.
struct RunSeries {
  std::uint64_t seed = 0;
  std::string arm;
  RunRecord record;
};

struct ArmSummary {
  std::string arm;
  std::optional<double> mean_iters;  // over converged, non-diverged runs only
  std::optional<double> stddev;
  std::optional<double> ci95_lo;
  std::optional<double> ci95_hi;
  std::size_t converged = 0;
  std::size_t diverged = 0;
  std::optional<double> improvement_vs_arm0;  // 1 - mean_arm / mean_arm0
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (const char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

inline double parse_double(const std::string& cell, const std::string& ctx) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0')
    throw std::runtime_error(ctx + ": not a number: '" + cell + "'");
  return v;
}

inline std::uint64_t parse_uint(const std::string& cell, const std::string& ctx) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(cell.c_str(), &end, 10);
  if (end == cell.c_str() || *end != '\0' || cell.find('-') != std::string::npos)
    throw std::runtime_error(ctx + ": not a non-negative integer: '" + cell + "'");
  return v;
}

inline std::optional<double> parse_optional(const std::string& cell, const std::string& ctx) {
  if (cell.empty()) return std::nullopt;
  return parse_double(cell, ctx);
}

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

inline void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace detail

inline void emit_runs_csv(const std::vector<RunSeries>& runs, const std::string& path) {
  std::ofstream out = detail::open_for_write(path);
  out << kRunsHeader << '\n';
  for (const RunSeries& run : runs)
    for (std::size_t t = 0; t < run.record.amari.size(); ++t)
      out << run.seed << ',' << run.arm << ',' << t << ',' << format_double(run.record.amari[t])
          << '\n';
  detail::finish_write(out, path);
}

inline void emit_summary_csv(const std::vector<ArmSummary>& rows, const std::string& path) {
  std::ofstream out = detail::open_for_write(path);
  out << kSummaryHeader << '\n';
  for (const ArmSummary& row : rows)
    out << row.arm << ',' << format_optional(row.mean_iters) << ','
        << format_optional(row.stddev) << ',' << format_optional(row.ci95_lo) << ','
        << format_optional(row.ci95_hi) << ',' << row.converged << ',' << row.diverged << ','
        << format_optional(row.improvement_vs_arm0) << '\n';
  detail::finish_write(out, path);
}

/// Reads runs.csv back, grouping consecutive rows of one (seed, arm) pair
/// into a RunSeries. Convergence and divergence flags are not stored in the
/// file; callers re-derive them from the series as needed.
inline std::vector<RunSeries> parse_runs_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || detail::split_csv_line(line) != detail::split_csv_line(
                                                                     kRunsHeader))
    throw std::runtime_error(path + ": missing or wrong header (expected '" +
                             std::string(kRunsHeader) + "')");
  std::vector<RunSeries> runs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string ctx = path + ":" + std::to_string(line_no);
    const std::vector<std::string> cells = detail::split_csv_line(line);
    if (cells.size() != 4) throw std::runtime_error(ctx + ": expected 4 cells");
    const std::uint64_t seed = detail::parse_uint(cells[0], ctx);
    const std::string& arm = cells[1];
    const std::uint64_t sample_index = detail::parse_uint(cells[2], ctx);
    const double amari = detail::parse_double(cells[3], ctx);
    if (runs.empty() || runs.back().seed != seed || runs.back().arm != arm) {
      if (sample_index != 0)
        throw std::runtime_error(ctx + ": new (seed, arm) group must start at sample_index 0");
      runs.push_back(RunSeries{seed, arm, {}});
    } else if (sample_index != runs.back().record.amari.size()) {
      throw std::runtime_error(ctx + ": sample_index out of sequence");
    }
    runs.back().record.amari.push_back(amari);
  }
  return runs;
}

inline std::vector<ArmSummary> parse_summary_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || detail::split_csv_line(line) != detail::split_csv_line(
                                                                     kSummaryHeader))
    throw std::runtime_error(path + ": missing or wrong header (expected '" +
                             std::string(kSummaryHeader) + "')");
  std::vector<ArmSummary> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string ctx = path + ":" + std::to_string(line_no);
    const std::vector<std::string> cells = detail::split_csv_line(line);
    if (cells.size() != 8) throw std::runtime_error(ctx + ": expected 8 cells");
    ArmSummary row;
    row.arm = cells[0];
    row.mean_iters = detail::parse_optional(cells[1], ctx);
    row.stddev = detail::parse_optional(cells[2], ctx);
    row.ci95_lo = detail::parse_optional(cells[3], ctx);
    row.ci95_hi = detail::parse_optional(cells[4], ctx);
    row.converged = detail::parse_uint(cells[5], ctx);
    row.diverged = detail::parse_uint(cells[6], ctx);
    row.improvement_vs_arm0 = detail::parse_optional(cells[7], ctx);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace easi::bench
