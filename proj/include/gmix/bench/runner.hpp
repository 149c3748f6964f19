#pragma once

// Experiment runner: one task per (n, rep), every method on the same data,
// rows written in task order as soon as all earlier tasks are done.

#include "gmix/bench/config.hpp"
#include "gmix/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gmix::bench {

inline constexpr const char* kResultsHeader =
    "experiment,model,method,k,d,n,rep,seed,w1_error,hellinger,wall_time_s";

struct ResultRecord {
  std::string experiment;
  std::string model;
  std::string method;
  Index k = 0;
  Index d = 0;
  Index n = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  double w1_error = 0.0;  // NaN for a failed fit
  std::optional<double> hellinger;
  double wall_time_s = 0.0;
};

std::string format_record(const ResultRecord& r);

/// hash_seed(base, hash_string(experiment), n, rep).
std::uint64_t task_seed(const ExperimentConfig& c, Index n, int rep);

/// Runs the grid and writes `out_path` (header plus one row per record).
/// Estimator failures become rows with w1_error = nan and are reported on
/// stderr; I/O failures throw IoError naming the path.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& c, const std::string& out_path,
                                         int threads = 1);

/// The records of one task, without writing anything.
std::vector<ResultRecord> run_task(const ExperimentConfig& c, Index n, int rep);

}  // namespace gmix::bench
