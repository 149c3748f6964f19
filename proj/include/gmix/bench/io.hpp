#pragma once

// File formats: distribution files, sample matrices (CSV or binary) and
// number formatting shared by the CSV writers.

#include "gmix/core.hpp"
#include "gmix/distribution.hpp"

#include <string>

namespace gmix::bench {

class IoError : public Error {
 public:
  using Error::Error;
};

/// Text format: first line "k d", then k lines "w mu_1 ... mu_d".
DiscreteDistributiond read_distribution(const std::string& path);
DiscreteDistributiond parse_distribution(const std::string& text);
void write_distribution(const std::string& path, const DiscreteDistributiond& g);
std::string format_distribution(const DiscreteDistributiond& g);

/// Samples, one per row. CSV: comma or whitespace separated numbers, an
/// optional non-numeric header line. Binary: int64 rows, int64 cols, then
/// rows * cols float64 in row-major order, little endian.
MatrixXd read_matrix(const std::string& path);
MatrixXd read_matrix_csv(const std::string& path);
MatrixXd read_matrix_binary(const std::string& path);
void write_matrix_binary(const std::string& path, const MatrixXd& x);

/// %.17g; NaN as "nan".
std::string format_real(double v);

}  // namespace gmix::bench
