#pragma once

// EM for k-GMs with known identity covariance.

#include "gmix/core.hpp"
#include "gmix/distribution.hpp"

#include <cstdint>
#include <vector>

namespace gmix {

struct EmOptions {
  int max_iter = 1000;
  double rel_tol = 1e-6;
  int threads = 1;
};

struct EmResult {
  DiscreteDistributiond mixing;
  std::vector<double> log_likelihood;  // after initialization and each iteration
  int iterations = 0;
  int reseeds = 0;  // components restarted after weight collapse
  bool converged = false;
};

/// Sum_i log p(x_i), accumulated with Neumaier compensation.
double log_likelihood(const Eigen::Ref<const MatrixXd>& x, const DiscreteDistributiond& gamma);

/// Initial atoms are k distinct sample rows chosen with the seed, weights
/// uniform. Each iteration is an E-step then an M-step; stops after
/// max_iter iterations or when the relative log-likelihood change is below
/// rel_tol. A component whose weight drops below 1e-12 is restarted at a
/// random sample point.
EmResult em_fit(const Eigen::Ref<const MatrixXd>& x, Index k, std::uint64_t seed,
                const EmOptions& opt = {});

}  // namespace gmix
