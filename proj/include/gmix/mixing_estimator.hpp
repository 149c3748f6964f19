#pragma once

// Two-stage estimator of a k-atomic mixing distribution: spectral
// reduction to k (or k - 1 after centering) dimensions, then marginal DMM,
// a candidate set from the product of marginal supports, and a minimax
// search over projections.

#include "gmix/core.hpp"
#include "gmix/distribution.hpp"
#include "gmix/moments.hpp"

#include <vector>

namespace gmix {

struct EstimatorOptions {
  double radius = 2.0;  // atoms are assumed to lie in the radius-R ball
  bool center = true;   // project to k-1 dims after centering; false: k dims
  bool split = false;   // fit the subspace on one half, estimate on the other
  double c1 = 1.0;      // weight net resolution ceil(c1 / eps)
  double c2 = 2.0;      // direction net size ceil(c2 / eps) in 2-d
  int threads = 1;
  DmmOptions dmm;
};

/// Grid size n^{-1/(4k-2)}.
double grid_size_mixing(Index n, Index k);

/// Candidate k-atomic distributions: k-subsets of the product of the
/// marginal supports (multisets when the product has fewer than k points),
/// each combined with every weight vector. Atoms are clipped to the
/// radius ball when radius > 0. Order: subsets lexicographic outer,
/// weights inner.
std::vector<DiscreteDistributiond> candidate_set(const std::vector<VectorXd>& marginal_supports,
                                                 const MatrixXd& weight_net, Index k,
                                                 double radius = 0.0);

/// Points of the product of supports as columns, first coordinate slowest.
MatrixXd support_product(const std::vector<VectorXd>& marginal_supports);

/// Directions used by the search in dimension dim; 1-d gives {1}.
MatrixXd search_directions(Index dim, double eps, double c2);

/// Algorithm for samples in R^r (rows of x): marginal DMM fits, minimax
/// selection over candidate_set with respect to per-direction DMM fits.
/// Ties resolve to the first candidate in construction order.
DiscreteDistributiond estimate_low_dim(const Eigen::Ref<const MatrixXd>& x, Index k, double radius,
                                       const EstimatorOptions& opt = {});

/// Full pipeline in d dimensions. For d <= k the reduction is skipped.
DiscreteDistributiond estimate(const Eigen::Ref<const MatrixXd>& x, Index k,
                               const EstimatorOptions& opt = {});

/// DMM fits of <theta, x_i> for every column theta of `directions`.
std::vector<DiscreteDistributiond> dmm_projections(const Eigen::Ref<const MatrixXd>& x,
                                                   const MatrixXd& directions, Index k,
                                                   double radius, const DmmOptions& opt,
                                                   int threads);

}  // namespace gmix
