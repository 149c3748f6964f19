#include "gmix/bench/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace gmix::bench {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool parse_numbers(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && (line[i] == ',' || line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= n) break;
    const char* start = line.c_str() + i;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) return false;
    out.push_back(v);
    i += static_cast<std::size_t>(end - start);
    if (i < n && line[i] != ',' && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') return false;
  }
  return true;
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DiscreteDistributiond parse_distribution(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> nums;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line() || !parse_numbers(line, nums) || nums.size() != 2)
    throw IoError("distribution file: line 1 must be 'k d'");
  const auto k = static_cast<Index>(nums[0]), d = static_cast<Index>(nums[1]);
  if (k < 1 || d < 1 || static_cast<double>(k) != nums[0] || static_cast<double>(d) != nums[1])
    throw IoError("distribution file: k and d must be positive integers");
  MatrixXd atoms(d, k);
  VectorXd w(k);
  for (Index j = 0; j < k; ++j) {
    if (!next_line()) throw IoError("distribution file: expected " + std::to_string(k) + " atom lines");
    if (!parse_numbers(line, nums) || static_cast<Index>(nums.size()) != d + 1)
      throw IoError("distribution file line " + std::to_string(line_no) + ": expected " +
                    std::to_string(d + 1) + " numbers");
    w[j] = nums[0];
    for (Index i = 0; i < d; ++i) atoms(i, j) = nums[static_cast<std::size_t>(i + 1)];
  }
  return DiscreteDistributiond(std::move(atoms), std::move(w));
}

DiscreteDistributiond read_distribution(const std::string& path) {
  try {
    return parse_distribution(slurp(path));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string format_distribution(const DiscreteDistributiond& g) {
  std::string out = std::to_string(g.size()) + " " + std::to_string(g.dim()) + "\n";
  for (Index j = 0; j < g.size(); ++j) {
    out += format_real(g.weight(j));
    for (Index i = 0; i < g.dim(); ++i) out += " " + format_real(g.atoms()(i, j));
    out += "\n";
  }
  return out;
}

void write_distribution(const std::string& path, const DiscreteDistributiond& g) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << format_distribution(g);
  if (!f) throw IoError("write failed for '" + path + "'");
}

MatrixXd read_matrix_csv(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  std::vector<double> nums, flat;
  Index cols = -1, rows = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!parse_numbers(line, nums)) {
      if (rows == 0 && line_no == 1) continue;  // header
      throw IoError(path + " line " + std::to_string(line_no) + ": not a numeric row");
    }
    if (cols < 0) cols = static_cast<Index>(nums.size());
    if (static_cast<Index>(nums.size()) != cols)
      throw IoError(path + " line " + std::to_string(line_no) + ": expected " +
                    std::to_string(cols) + " values");
    flat.insert(flat.end(), nums.begin(), nums.end());
    ++rows;
  }
  if (rows == 0 || cols <= 0) throw IoError(path + ": no data rows");
  MatrixXd x(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) x(i, j) = flat[static_cast<std::size_t>(i * cols + j)];
  return x;
}

MatrixXd read_matrix_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::int64_t rows = 0, cols = 0;
  f.read(reinterpret_cast<char*>(&rows), sizeof rows);
  f.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!f || rows < 1 || cols < 1) throw IoError(path + ": bad binary matrix header");
  std::vector<double> buf(static_cast<std::size_t>(rows * cols));
  f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!f) throw IoError(path + ": truncated binary matrix");
  MatrixXd x(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i)
    for (std::int64_t j = 0; j < cols; ++j) x(i, j) = buf[static_cast<std::size_t>(i * cols + j)];
  return x;
}

void write_matrix_binary(const std::string& path, const MatrixXd& x) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  const std::int64_t rows = x.rows(), cols = x.cols();
  f.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  f.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) {
      const double v = x(i, j);
      f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  if (!f) throw IoError("write failed for '" + path + "'");
}

MatrixXd read_matrix(const std::string& path) {
  const bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
  return binary ? read_matrix_binary(path) : read_matrix_csv(path);
}

}  // namespace gmix::bench
