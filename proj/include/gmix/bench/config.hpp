#pragma once

// Benchmark configuration: flat key=value text, one key per line.

#include "gmix/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gmix::bench {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ExperimentConfig {
  std::string experiment = "k2a";
  Index k = 0;  // fit order; 0 selects the model's number of components
  Index d = 100;
  std::vector<Index> n{10000};
  int reps = 10;
  std::uint64_t seed = 1;
  double R = 2.0;
  std::optional<double> C1;  // default 1, or 2 for k02_k3 and dirichlet
  double C2 = 2.0;
  std::vector<std::string> methods{"dmm", "em"};
  bool center = true;
  bool split = false;
  bool hellinger = false;  // also report Monte-Carlo Hellinger distance
  Index mc_draws = 100000;
  bool timing = true;  // false writes wall_time_s = 0 for byte-stable output
  std::string model_file;  // distribution file for experiment=custom
  double eps_scale = 1.0;  // density k-GM grid multiplier
  double budget = 2e8;     // density k-GM search budget

  double c1() const;
};

/// Parses key=value lines; blank lines and lines starting with '#' are
/// skipped. Unknown keys, duplicates and invalid values are errors that
/// name the line.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& c);

}  // namespace gmix::bench
