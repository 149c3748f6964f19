#include "gmix/bench/runner.hpp"

#include "gmix/bench/io.hpp"
#include "gmix/bench/models.hpp"
#include "gmix/density_estimators.hpp"
#include "gmix/em.hpp"
#include "gmix/mixing_estimator.hpp"
#include "gmix/moment_tensors.hpp"
#include "gmix/parallel.hpp"
#include "gmix/rng.hpp"
#include "gmix/transport.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>

namespace gmix::bench {

std::string format_record(const ResultRecord& r) {
  std::string s;
  s += r.experiment + "," + r.model + "," + r.method + "," + std::to_string(r.k) + "," +
       std::to_string(r.d) + "," + std::to_string(r.n) + "," + std::to_string(r.rep) + "," +
       std::to_string(r.seed) + "," + format_real(r.w1_error) + ",";
  if (r.hellinger) s += format_real(*r.hellinger);
  s += "," + format_real(r.wall_time_s);
  return s;
}

std::uint64_t task_seed(const ExperimentConfig& c, Index n, int rep) {
  return hash_seed({c.seed, hash_string(c.experiment), static_cast<std::uint64_t>(n),
                    static_cast<std::uint64_t>(rep)});
}

namespace {

DiscreteDistributiond fit(const ExperimentConfig& c, const std::string& method,
                          const MatrixXd& x, Index k, std::uint64_t seed) {
  if (method == "dmm") {
    EstimatorOptions opt;
    opt.radius = c.R;
    opt.center = c.center;
    opt.split = c.split;
    opt.c1 = c.c1();
    opt.c2 = c.C2;
    return estimate(x, k, opt);
  }
  if (method == "em") return em_fit(x, k, hash_seed({seed, 4})).mixing;
  if (method == "density2gm") {
    if (k != 2) throw InvalidArgument("density2gm needs k = 2");
    Density2gmOptions opt;
    opt.radius = c.R;
    opt.split = true;
    return density_estimate_2gm(x, opt).mixing();
  }
  if (method == "densitykgm") {
    DensityKgmOptions opt;
    opt.radius = c.R;
    opt.eps_scale = c.eps_scale;
    opt.budget = c.budget;
    opt.c2 = c.C2;
    return density_estimate_kgm(x, k, opt).mixing();
  }
  throw InvalidArgument("unknown method '" + method + "'");
}

}  // namespace

std::vector<ResultRecord> run_task(const ExperimentConfig& c, Index n, int rep) {
  const std::uint64_t seed = task_seed(c, n, rep);
  const ModelInstance model = make_model(c.experiment, c.d, hash_seed({seed, 1}), c.model_file);
  const Index k = c.k > 0 ? c.k : model.components;
  const GaussianMixtured truth(model.mixing);
  const MatrixXd x = sample(truth, n, hash_seed({seed, 2}));

  std::vector<ResultRecord> out;
  for (std::size_t mi = 0; mi < c.methods.size(); ++mi) {
    const auto& method = c.methods[mi];
    ResultRecord r;
    r.experiment = c.experiment;
    r.model = model.descriptor;
    r.method = method;
    r.k = k;
    r.d = c.d;
    r.n = n;
    r.rep = rep;
    r.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto est = fit(c, method, x, k, seed);
      r.w1_error = w1_exact(model.mixing, est);
      if (c.hellinger) {
        const auto h = hellinger_mc(truth, GaussianMixtured(est), c.mc_draws,
                                    hash_seed({seed, 3, static_cast<std::uint64_t>(mi)}));
        r.hellinger = std::sqrt(h.value);
      }
    } catch (const Error& e) {
      r.w1_error = std::numeric_limits<double>::quiet_NaN();
      r.hellinger.reset();
      std::cerr << "gmix: " << c.experiment << " n=" << n << " rep=" << rep << " method=" << method
                << " failed: " << e.what() << "\n";
    }
    const auto t1 = std::chrono::steady_clock::now();
    r.wall_time_s = c.timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& c, const std::string& out_path,
                                         int threads) {
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + out_path + "' for writing");
  f << kResultsHeader << "\n";
  f.flush();

  struct Task {
    Index n;
    int rep;
  };
  std::vector<Task> tasks;
  for (Index n : c.n)
    for (int rep = 0; rep < c.reps; ++rep) tasks.push_back({n, rep});

  std::vector<std::vector<ResultRecord>> done(tasks.size());
  std::vector<char> ready(tasks.size(), 0);
  std::size_t next_write = 0;
  std::mutex mu;
  bool io_failed = false;

  parallel_for(static_cast<Index>(tasks.size()), threads, [&](Index t) {
    auto recs = run_task(c, tasks[static_cast<std::size_t>(t)].n, tasks[static_cast<std::size_t>(t)].rep);
    std::lock_guard<std::mutex> lock(mu);
    done[static_cast<std::size_t>(t)] = std::move(recs);
    ready[static_cast<std::size_t>(t)] = 1;
    while (next_write < tasks.size() && ready[next_write]) {
      for (const auto& r : done[next_write]) f << format_record(r) << "\n";
      f.flush();
      if (!f) io_failed = true;
      ++next_write;
    }
  });
  if (io_failed) throw IoError("write failed for '" + out_path + "'");

  std::vector<ResultRecord> all;
  for (auto& d : done)
    for (auto& r : d) all.push_back(std::move(r));
  return all;
}

}  // namespace gmix::bench
