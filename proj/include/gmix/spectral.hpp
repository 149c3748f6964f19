#pragma once

// PCA-based dimension reduction: shifted sample covariance, top
// eigenvectors, projection of data and lifting of estimates.

#include "gmix/core.hpp"
#include "gmix/distribution.hpp"

namespace gmix {

/// (1/n) X^T X - I for n x d samples X (one sample per row).
MatrixXd covariance_shifted(const Eigen::Ref<const MatrixXd>& x);

/// Column means of X.
VectorXd sample_mean(const Eigen::Ref<const MatrixXd>& x);

/// Full eigendecomposition ordered by eigenvalue descending; eigenvalue
/// ties are ordered by eigenvector lexicographically descending, and each
/// eigenvector has its first nonzero entry positive.
struct SortedEigen {
  VectorXd values;
  MatrixXd vectors;
};
SortedEigen sorted_eigen(const MatrixXd& m);

/// Eigenvectors of the r largest eigenvalues of a symmetric matrix.
MatrixXd top_subspace(const MatrixXd& m, Index r);

/// Rows V^T x_i, i.e. X V.
MatrixXd reduce(const Eigen::Ref<const MatrixXd>& x, const MatrixXd& basis);

/// Atoms V psi_j + shift, weights unchanged.
DiscreteDistributiond lift_dist(const DiscreteDistributiond& gamma, const MatrixXd& basis,
                                const VectorXd& shift);

struct Reduction {
  MatrixXd samples;  // n' x r reduced data
  MatrixXd basis;    // d x r
  VectorXd mean;     // zero when not centered
};

/// Subtract the sample mean, project onto the top-r eigenvectors of the
/// shifted covariance of the centered data. With split = true the mean and
/// basis come from the first half and the second half is projected.
Reduction center_then_reduce(const Eigen::Ref<const MatrixXd>& x, Index r, bool split = false);

/// Project onto the top-r eigenvectors of covariance_shifted(X) without
/// centering; mean is zero.
Reduction plain_reduce(const Eigen::Ref<const MatrixXd>& x, Index r, bool split = false);

}  // namespace gmix
