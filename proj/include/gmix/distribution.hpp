#pragma once

#include "gmix/core.hpp"
#include "gmix/moment_vector.hpp"
#include "gmix/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace gmix {

/// A finitely supported probability measure on R^d. Atoms are the columns
/// of a d x k matrix; weights are nonnegative and sum to one.
template <typename Scalar>
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  DiscreteDistribution(Matrix<Scalar> atoms, Vector<Scalar> weights)
      : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.cols() != weights_.size())
      throw DimensionMismatch("atom count " + std::to_string(atoms_.cols()) +
                              " != weight count " + std::to_string(weights_.size()));
    if (weights_.size() == 0) throw InvalidArgument("distribution needs at least one atom");
    if (!atoms_.allFinite() || !weights_.allFinite())
      throw InvalidArgument("distribution has non-finite entries");
    const Scalar tiny = Scalar(1e-12);
    for (Index j = 0; j < weights_.size(); ++j) {
      if (weights_[j] < -tiny) throw InvalidArgument("negative weight");
      if (weights_[j] < Scalar(0)) weights_[j] = Scalar(0);
    }
    const Scalar total = weights_.sum();
    if (std::abs(total - Scalar(1)) > Scalar(1e-9))
      throw InvalidArgument("weights sum to " + std::to_string(static_cast<double>(total)));
    weights_ /= total;
  }

  static DiscreteDistribution point_mass(const Vector<Scalar>& at) {
    return DiscreteDistribution(Matrix<Scalar>(at), Vector<Scalar>::Ones(1));
  }

  /// One-dimensional distribution from atom positions and weights.
  static DiscreteDistribution on_line(const Vector<Scalar>& positions,
                                      const Vector<Scalar>& weights) {
    return DiscreteDistribution(Matrix<Scalar>(positions.transpose()), weights);
  }

  Index dim() const noexcept { return atoms_.rows(); }
  Index size() const noexcept { return atoms_.cols(); }
  const Matrix<Scalar>& atoms() const noexcept { return atoms_; }
  const Vector<Scalar>& weights() const noexcept { return weights_; }
  auto atom(Index j) const { return atoms_.col(j); }
  Scalar weight(Index j) const { return weights_[j]; }

  Scalar max_norm() const { return atoms_.colwise().norm().maxCoeff(); }

  /// Membership in the class of k-atomic distributions in the radius-R ball.
  bool in_class(Index k, Scalar radius, Scalar rel = Scalar(1e-6)) const {
    return size() <= k && max_norm() <= radius * (Scalar(1) + rel);
  }

  /// Atoms closer than tol are merged (weights summed); zero-weight atoms
  /// are dropped unless every weight is zero. Atom order follows first
  /// occurrence.
  DiscreteDistribution merged(Scalar tol = Scalar(1e-12)) const {
    std::vector<Index> keep;
    std::vector<Scalar> w;
    for (Index j = 0; j < size(); ++j) {
      if (weights_[j] <= Scalar(0)) continue;
      bool found = false;
      for (std::size_t q = 0; q < keep.size(); ++q) {
        if ((atoms_.col(keep[q]) - atoms_.col(j)).norm() <= tol) {
          w[q] += weights_[j];
          found = true;
          break;
        }
      }
      if (!found) {
        keep.push_back(j);
        w.push_back(weights_[j]);
      }
    }
    if (keep.empty()) return *this;
    Matrix<Scalar> a(dim(), static_cast<Index>(keep.size()));
    Vector<Scalar> ww(static_cast<Index>(keep.size()));
    for (std::size_t q = 0; q < keep.size(); ++q) {
      a.col(static_cast<Index>(q)) = atoms_.col(keep[q]);
      ww[static_cast<Index>(q)] = w[q];
    }
    return DiscreteDistribution(std::move(a), std::move(ww));
  }

  /// Atoms radially projected onto the closed ball of the given radius.
  DiscreteDistribution clipped_to_ball(Scalar radius) const {
    Matrix<Scalar> a = atoms_;
    for (Index j = 0; j < a.cols(); ++j) {
      const Scalar nrm = a.col(j).norm();
      if (nrm > radius) a.col(j) *= radius / nrm;
    }
    return DiscreteDistribution(std::move(a), weights_);
  }

 private:
  Matrix<Scalar> atoms_;
  Vector<Scalar> weights_;
};

using DiscreteDistributiond = DiscreteDistribution<double>;

/// Mixing distribution convolved with N(0, I_d).
template <typename Scalar>
class GaussianMixture {
 public:
  GaussianMixture() = default;
  explicit GaussianMixture(DiscreteDistribution<Scalar> mixing) : mixing_(std::move(mixing)) {}

  const DiscreteDistribution<Scalar>& mixing() const noexcept { return mixing_; }
  Index dim() const noexcept { return mixing_.dim(); }

 private:
  DiscreteDistribution<Scalar> mixing_;
};

using GaussianMixtured = GaussianMixture<double>;

/// n i.i.d. draws (rows) from P: a component by inverse CDF on the
/// weights, then atom + N(0, I). Row i uses stream i of the seed, so any
/// row range can be regenerated independently.
template <typename Scalar>
Matrix<Scalar> sample(const GaussianMixture<Scalar>& p, Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample size must be positive");
  const auto& g = p.mixing();
  const Index d = g.dim(), k = g.size();
  Vector<Scalar> cdf(k);
  Scalar acc = Scalar(0);
  for (Index j = 0; j < k; ++j) cdf[j] = (acc += g.weight(j));
  Matrix<Scalar> x(n, d);
  for (Index i = 0; i < n; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Scalar u = Scalar(rng.uniform()) * acc;
    Index c = 0;
    while (c + 1 < k && !(u < cdf[c])) ++c;
    for (Index j = 0; j < d; ++j) x(i, j) = g.atoms()(j, c) + Scalar(rng.normal());
  }
  return x;
}

/// Pushforward of gamma under x -> <theta, x>.
template <typename Scalar, typename Derived>
DiscreteDistribution<Scalar> project_dist(const DiscreteDistribution<Scalar>& gamma,
                                          const Eigen::MatrixBase<Derived>& theta) {
  if (theta.size() != gamma.dim())
    throw DimensionMismatch("direction has dimension " + std::to_string(theta.size()) +
                            ", distribution has " + std::to_string(gamma.dim()));
  if (std::abs(theta.norm() - Scalar(1)) > Scalar(1e-10))
    throw InvalidArgument("projection direction is not a unit vector");
  Matrix<Scalar> projected = theta.transpose() * gamma.atoms();
  return DiscreteDistribution<Scalar>(std::move(projected), gamma.weights()).merged();
}

/// Coordinate marginal; equivalent to projecting on e_i.
template <typename Scalar>
DiscreteDistribution<Scalar> marginal(const DiscreteDistribution<Scalar>& gamma, Index i) {
  Matrix<Scalar> row = gamma.atoms().row(i);
  return DiscreteDistribution<Scalar>(std::move(row), gamma.weights()).merged();
}

/// Exact moments sum_j w_j a_j^r, r = 1..r_max, of a 1-d distribution.
template <typename Scalar>
MomentVector<Scalar> moments_1d(const DiscreteDistribution<Scalar>& gamma, Index r_max,
                                Scalar radius = Scalar(0)) {
  if (gamma.dim() != 1) throw DimensionMismatch("moments_1d needs a 1-d distribution");
  using Acc = std::conditional_t<(sizeof(Scalar) < sizeof(long double)), long double, Scalar>;
  Vector<Acc> acc = Vector<Acc>::Zero(r_max);
  for (Index j = 0; j < gamma.size(); ++j) {
    const Acc a = gamma.atoms()(0, j);
    Acc p = gamma.weight(j);
    for (Index r = 0; r < r_max; ++r) {
      p *= a;
      acc[r] += p;
    }
  }
  Vector<Scalar> m = acc.template cast<Scalar>();
  if (radius <= Scalar(0)) radius = std::max(Scalar(1), gamma.max_norm());
  return MomentVector<Scalar>(std::move(m), radius);
}

}  // namespace gmix
