#pragma once

// Proper density estimators for k-GMs and the stabilized mixture density.

#include "gmix/core.hpp"
#include "gmix/distribution.hpp"
#include "gmix/moments.hpp"

namespace gmix {

/// log p(x) = log sum_j w_j phi_d(x - mu_j), by log-sum-exp.
double log_density(const GaussianMixtured& p, const Eigen::Ref<const VectorXd>& x);

/// p(x); underflows to zero only where log_density is below double range.
double evaluate_density(const GaussianMixtured& p, const Eigen::Ref<const VectorXd>& x);

struct DensityKgmOptions {
  double radius = 2.0;
  double eps_scale = 1.0;  // grid size eps_scale * n^{-1/2}
  double budget = 2e8;     // max |candidates| * |directions|
  double c2 = 2.0;
  int threads = 1;
  DmmOptions dmm;
};

/// Moment-comparison estimator: candidates from k-subsets of
/// ball_net(k, eps, R) with weights from simplex_net(k, eps), selected by
/// the max over directions theta and r <= 2k-1 of
/// |m_r(gamma'_theta) - m_r(gamma_hat_theta)|. The data is first reduced to
/// its top-k subspace when d > k. Throws BudgetExceeded before searching
/// when the candidate-direction count is over budget.
GaussianMixtured density_estimate_kgm(const Eigen::Ref<const MatrixXd>& x, Index k,
                                      const DensityKgmOptions& opt = {});

/// Number of candidate-direction evaluations density_estimate_kgm performs.
double density_kgm_work(Index n, Index k, const DensityKgmOptions& opt = {});

struct Density2gmOptions {
  double radius = 2.0;
  bool split = true;  // 50/50 split; false reuses all data for both steps
  DmmOptions dmm;
};

/// Centering estimator for 2-GMs: mean and S = cov - I from the first
/// half, top eigenvector u of S, 1-d DMM with k = 2 on <u, X_i - mean> of
/// the second half, atoms theta_i u + mean.
GaussianMixtured density_estimate_2gm(const Eigen::Ref<const MatrixXd>& x,
                                      const Density2gmOptions& opt = {});

}  // namespace gmix
