#pragma once

// Reference implementations used only by tests. Each one is written
// independently of the library code it checks.

#include "gmix/distribution.hpp"
#include "gmix/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace gmix::oracle {

/// H_r(x) by the three-term recurrence in long double.
inline long double hermite(int r, long double x) {
  long double h0 = 1.0L, h1 = x;
  if (r == 0) return h0;
  for (int j = 1; j < r; ++j) {
    const long double h2 = x * h1 - static_cast<long double>(j) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// W1 between two uniform-weight laws with the same number of atoms: the
/// optimal coupling is a permutation (Birkhoff), so enumerate them all.
inline double permutation_w1(const MatrixXd& a, const MatrixXd& b) {
  const Index k = a.cols();
  std::vector<Index> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), Index(0));
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (Index i = 0; i < k; ++i) c += (a.col(i) - b.col(perm[static_cast<std::size_t>(i)])).norm();
    best = std::min(best, c / static_cast<double>(k));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Dense l-th moment tensor, row-major multi-index, by explicit loops.
inline VectorXd dense_moment_tensor(const DiscreteDistributiond& g, int order) {
  const Index d = g.dim();
  Index size = 1;
  for (int i = 0; i < order; ++i) size *= d;
  VectorXd out = VectorXd::Zero(size);
  std::vector<Index> idx(static_cast<std::size_t>(order));
  for (Index flat = 0; flat < size; ++flat) {
    Index rem = flat;
    for (int p = order - 1; p >= 0; --p) {
      idx[static_cast<std::size_t>(p)] = rem % d;
      rem /= d;
    }
    double s = 0.0;
    for (Index j = 0; j < g.size(); ++j) {
      double prod = g.weight(j);
      for (int p = 0; p < order; ++p) prod *= g.atoms()(idx[static_cast<std::size_t>(p)], j);
      s += prod;
    }
    out[flat] = s;
  }
  return out;
}

/// First r moments of a 1-d law in long double.
inline std::vector<long double> moments(const DiscreteDistribution<long double>& g, Index r) {
  std::vector<long double> m(static_cast<std::size_t>(r), 0.0L);
  for (Index j = 0; j < g.size(); ++j) {
    long double p = 1.0L;
    for (Index i = 0; i < r; ++i) {
      p *= g.atoms()(0, j);
      m[static_cast<std::size_t>(i)] += g.weight(j) * p;
    }
  }
  return m;
}

/// Uniform on (0, 1) weights renormalized, each at least min_w.
inline VectorXd random_weights(CounterRng& rng, Index k, double min_w = 0.0) {
  VectorXd w(k);
  for (Index j = 0; j < k; ++j) w[j] = rng.exponential();
  w /= w.sum();
  return (w.array() * (1.0 - min_w * static_cast<double>(k)) + min_w).matrix();
}

/// Uniform in the radius-R ball of R^d.
inline VectorXd random_in_ball(CounterRng& rng, Index d, double radius) {
  VectorXd v(d);
  for (Index i = 0; i < d; ++i) v[i] = rng.normal();
  v.normalize();
  return v * radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
}

inline DiscreteDistributiond random_distribution(CounterRng& rng, Index k, Index d, double radius,
                                                 double min_w = 0.0) {
  MatrixXd atoms(d, k);
  for (Index j = 0; j < k; ++j) atoms.col(j) = random_in_ball(rng, d, radius);
  return DiscreteDistributiond(std::move(atoms), random_weights(rng, k, min_w));
}

inline DiscreteDistributiond uniform_weight_distribution(CounterRng& rng, Index k, Index d,
                                                         double radius) {
  MatrixXd atoms(d, k);
  for (Index j = 0; j < k; ++j) atoms.col(j) = random_in_ball(rng, d, radius);
  return DiscreteDistributiond(std::move(atoms), VectorXd::Constant(k, 1.0 / static_cast<double>(k)));
}

/// 1-d law on [-R, R] with k atoms pairwise at least min_sep apart and
/// weights at least min_w, by rejection.
template <typename Scalar>
DiscreteDistribution<Scalar> separated_1d(CounterRng& rng, Index k, Scalar radius, Scalar min_sep,
                                          Scalar min_w) {
  Vector<Scalar> x(k);
  for (;;) {
    for (Index j = 0; j < k; ++j) x[j] = radius * Scalar(2 * rng.uniform() - 1);
    std::sort(x.data(), x.data() + k);
    bool ok = true;
    for (Index j = 1; j < k; ++j) ok = ok && (x[j] - x[j - 1] >= min_sep);
    if (ok) break;
  }
  const VectorXd wd = random_weights(rng, k, static_cast<double>(min_w));
  Vector<Scalar> w = wd.cast<Scalar>();
  w /= w.sum();
  return DiscreteDistribution<Scalar>::on_line(x, w);
}

/// Spectral norm of a symmetric matrix.
inline double spectral_norm(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
}

/// H^2 between N(a, I) and N(b, I).
inline double hellinger_sq_gaussians(const VectorXd& a, const VectorXd& b) {
  return 2.0 - 2.0 * std::exp(-(a - b).squaredNorm() / 8.0);
}

/// Median of a copy.
inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Spearman rank correlation (no tie correction).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t(0));
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

}  // namespace gmix::oracle
