#pragma once

// Aggregation of results CSVs: mean and sample standard deviation per
// (experiment, method, n), and log-log least-squares slopes in n.

#include "gmix/bench/runner.hpp"

#include <string>
#include <vector>

namespace gmix::bench {

struct SummaryRow {
  std::string experiment;
  std::string method;
  Index n = 0;
  Index count = 0;   // successful fits
  Index failed = 0;  // rows with w1_error = nan
  double mean_w1 = 0.0;
  double std_w1 = 0.0;
  Index hellinger_count = 0;
  double mean_hellinger = 0.0;
  double std_hellinger = 0.0;
  double mean_wall_time_s = 0.0;
};

struct SlopeRow {
  std::string experiment;
  std::string method;
  std::string metric;  // w1_error or hellinger
  double slope = 0.0;
  Index points = 0;
};

/// Parses a results CSV in the exact header schema. Malformed rows throw
/// IoError naming the line.
std::vector<ResultRecord> read_results(const std::string& path);
std::vector<ResultRecord> parse_results(const std::string& text);

/// Rows ordered by (experiment, method) first appearance, then n.
std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

/// Least-squares slope of log(mean) on log(n) for groups with at least two
/// positive means.
std::vector<SlopeRow> fit_slopes(const std::vector<SummaryRow>& rows);

/// Slope of log y on log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Writes `out_path` and `<stem>_slopes.csv` beside it.
void write_summary(const std::string& out_path, const std::vector<SummaryRow>& rows,
                   const std::vector<SlopeRow>& slopes);

std::string slopes_path_for(const std::string& out_path);

}  // namespace gmix::bench
