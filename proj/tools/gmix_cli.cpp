// gmix: benchmark runner and estimator front end.

#include "gmix/bench/config.hpp"
#include "gmix/bench/io.hpp"
#include "gmix/bench/runner.hpp"
#include "gmix/bench/summarize.hpp"
#include "gmix/em.hpp"
#include "gmix/mixing_estimator.hpp"
#include "gmix/moment_tensors.hpp"
#include "gmix/nets.hpp"
#include "gmix/transport.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

namespace {

using namespace gmix;

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads) {
  const auto cfg = bench::load_config(config_path);
  std::filesystem::create_directories(out_dir);
  const std::string out = (std::filesystem::path(out_dir) / (cfg.experiment + ".csv")).string();
  const auto recs = bench::run_experiment(cfg, out, threads);
  const auto failed = std::count_if(recs.begin(), recs.end(),
                                    [](const auto& r) { return std::isnan(r.w1_error); });
  std::cout << "wrote " << recs.size() << " records to " << out;
  if (failed > 0) std::cout << " (" << failed << " failed)";
  std::cout << "\n";
  return 0;
}

int cmd_estimate(const std::string& input, Index k, double radius, const std::string& method,
                 const std::string& out, std::uint64_t seed, bool center, int threads) {
  const MatrixXd x = bench::read_matrix(input);
  DiscreteDistributiond est;
  if (method == "dmm") {
    EstimatorOptions opt;
    opt.radius = radius;
    opt.center = center;
    opt.threads = threads;
    est = estimate(x, k, opt);
  } else {
    EmOptions opt;
    opt.threads = threads;
    est = em_fit(x, k, seed, opt).mixing;
  }
  if (out.empty() || out == "-")
    std::cout << bench::format_distribution(est);
  else
    bench::write_distribution(out, est);
  return 0;
}

int cmd_distance(const std::string& a_path, const std::string& b_path, const std::string& metric,
                 double net_eps, int max_order) {
  const auto a = bench::read_distribution(a_path);
  const auto b = bench::read_distribution(b_path);
  if (a.dim() != b.dim()) throw DimensionMismatch("distributions have different dimensions");
  double v = 0.0;
  if (metric == "w1") {
    v = w1_exact(a, b);
  } else if (metric == "sliced") {
    v = sliced_w1(a, b, sphere_net(a.dim(), net_eps));
  } else {
    const int order =
        max_order > 0 ? max_order : static_cast<int>(2 * std::max(a.size(), b.size()) - 1);
    v = frob_dist_max(a, b, order);
  }
  std::cout << bench::format_real(v) << "\n";
  return 0;
}

int cmd_summarize(const std::string& in, const std::string& out) {
  const auto rows = bench::summarize(bench::read_results(in));
  const auto slopes = bench::fit_slopes(rows);
  bench::write_summary(out, rows, slopes);
  std::cout << "wrote " << rows.size() << " summary rows to " << out << " and slopes to "
            << bench::slopes_path_for(out) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian location mixture estimation and benchmarks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a benchmark configuration");
  std::string config_path, out_dir;
  int threads = 1;
  run->add_option("--config", config_path, "key=value config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--threads", threads, "worker count (0 = all cores)")->check(CLI::NonNegativeNumber);

  auto* est = app.add_subcommand("estimate", "fit a mixing distribution to samples");
  std::string input, method = "dmm", est_out;
  Index k = 2;
  double radius = 2.0;
  std::uint64_t seed = 1;
  bool no_center = false;
  int est_threads = 1;
  est->add_option("--input", input, "samples: CSV, or binary matrix (.bin)")->required()->check(CLI::ExistingFile);
  est->add_option("--k", k, "number of components")->required()->check(CLI::PositiveNumber);
  est->add_option("--radius", radius, "radius bound R")->check(CLI::PositiveNumber);
  est->add_option("--method", method, "dmm or em")->check(CLI::IsMember({"dmm", "em"}));
  est->add_option("--out", est_out, "distribution file to write (default stdout)");
  est->add_option("--seed", seed, "EM initialization seed");
  est->add_flag("--no-center", no_center, "project to k dims without centering");
  est->add_option("--threads", est_threads, "worker count")->check(CLI::NonNegativeNumber);

  auto* dist = app.add_subcommand("distance", "distance between two distribution files");
  std::string a_path, b_path, metric = "w1";
  double net_eps = 0.01;
  int max_order = 0;
  dist->add_option("--a", a_path, "first distribution file")->required()->check(CLI::ExistingFile);
  dist->add_option("--b", b_path, "second distribution file")->required()->check(CLI::ExistingFile);
  dist->add_option("--metric", metric, "w1, sliced or frob")->check(CLI::IsMember({"w1", "sliced", "frob"}));
  dist->add_option("--net-eps", net_eps, "sphere net radius for sliced")->check(CLI::PositiveNumber);
  dist->add_option("--max-order", max_order, "largest tensor order for frob (default 2k-1)");

  auto* summ = app.add_subcommand("summarize", "aggregate a results CSV");
  std::string sum_in, sum_out;
  summ->add_option("--in", sum_in, "results CSV")->required()->check(CLI::ExistingFile);
  summ->add_option("--out", sum_out, "summary CSV")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, out_dir, threads);
    if (*est) return cmd_estimate(input, k, radius, method, est_out, seed, !no_center, est_threads);
    if (*dist) return cmd_distance(a_path, b_path, metric, net_eps, max_order);
    if (*summ) return cmd_summarize(sum_in, sum_out);
  } catch (const std::exception& e) {
    std::cerr << "gmix: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
