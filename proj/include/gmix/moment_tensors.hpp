#pragma once

// Moment tensors M_l(Gamma) = sum_j w_j mu_j^{(x) l} kept in low-rank form,
// their Frobenius and operator norms, and a Monte-Carlo Hellinger
// estimator for the mixtures they describe.

#include "gmix/core.hpp"
#include "gmix/distribution.hpp"

#include <cstdint>
#include <vector>

namespace gmix {

/// Symmetric tensor sum_i c_i z_i^{(x) order}. Coefficients may be
/// negative, so differences of moment tensors are representable.
class MomentTensor {
 public:
  static constexpr double kDenseLimit = 1e6;

  MomentTensor(int order, MatrixXd points, VectorXd coeffs);

  int order() const noexcept { return order_; }
  Index dim() const noexcept { return points_.rows(); }
  Index rank() const noexcept { return points_.cols(); }
  const MatrixXd& points() const noexcept { return points_; }
  const VectorXd& coeffs() const noexcept { return coeffs_; }

  /// <T, u^{(x) l}> = sum_i c_i <z_i, u>^l.
  double contract(const Eigen::Ref<const VectorXd>& u) const;

  /// Entries in row-major multi-index order, size d^l. Throws when d^l
  /// exceeds kDenseLimit.
  VectorXd dense() const;

  /// T - other, as concatenated low-rank terms.
  MomentTensor operator-(const MomentTensor& other) const;

 private:
  int order_;
  MatrixXd points_;
  VectorXd coeffs_;
};

/// M_l(Gamma).
MomentTensor moment_tensor(const DiscreteDistributiond& gamma, int order);

/// <S, T> through the Gram identity <a^{(x) l}, b^{(x) l}> = <a, b>^l.
double tensor_inner(const MomentTensor& s, const MomentTensor& t);

double frobenius_norm(const MomentTensor& t);

/// max_{l <= L} ||M_l(Gamma) - M_l(Gamma')||_F.
double frob_dist_max(const DiscreteDistributiond& a, const DiscreteDistributiond& b, int max_order);

/// Lower bound on max_{|u| = 1} |<T, u^{(x) l}>| by projected gradient
/// ascent from the normalized points and `restarts` random unit vectors.
double operator_norm(const MomentTensor& t, int restarts = 16, std::uint64_t seed = 0);

struct HellingerEstimate {
  double value = 0.0;           // estimate of H^2
  double standard_error = 0.0;
};

/// H^2 = 2 - 2 E_M[sqrt(p p') / m] with draws from M = (P + P') / 2.
HellingerEstimate hellinger_mc(const GaussianMixtured& p, const GaussianMixtured& q, Index n_mc,
                               std::uint64_t seed);

struct MomentHellingerReport {
  double frob_max = 0.0;
  double hellinger_sq = 0.0;
  double hellinger_se = 0.0;
  double ratio = 0.0;        // hellinger_sq / frob_max; 0 when both vanish
  bool frob_zero = false;    // frob_max <= frob_tol
  bool hellinger_zero = false;  // hellinger_sq <= 3 standard errors
  bool consistent = false;   // both zero or both positive
};

/// Both sides of the moment characterization of H^2 with moment tensors
/// up to order 2k - 1.
MomentHellingerReport moment_hellinger_report(const DiscreteDistributiond& a,
                                              const DiscreteDistributiond& b, Index k,
                                              Index n_mc = 100000, std::uint64_t seed = 0,
                                              double frob_tol = 1e-9);

/// Whether a and b are told apart by their 1-d moments up to 2k - 1 along
/// some of `n_dirs` random directions (plus the coordinate axes): the
/// quadrature of each projected moment vector recovers the projection,
/// and differing recoveries certify differing moment tensors.
bool identified_by_moments(const DiscreteDistributiond& a, const DiscreteDistributiond& b, Index k,
                           Index n_dirs = 64, std::uint64_t seed = 0, double tol = 1e-8);

}  // namespace gmix
