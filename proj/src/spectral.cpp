#include "gmix/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace gmix {

MatrixXd covariance_shifted(const Eigen::Ref<const MatrixXd>& x) {
  const Index n = x.rows(), d = x.cols();
  if (n < 1) throw InsufficientData("covariance needs at least one sample");
  MatrixXd s = MatrixXd::Zero(d, d);
  s.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / static_cast<double>(n));
  MatrixXd full = s.selfadjointView<Eigen::Lower>();
  full.diagonal().array() -= 1.0;
  return full;
}

VectorXd sample_mean(const Eigen::Ref<const MatrixXd>& x) {
  if (x.rows() < 1) throw InsufficientData("mean needs at least one sample");
  return x.colwise().mean().transpose();
}

SortedEigen sorted_eigen(const MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("eigendecomposition needs a square matrix");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver failed", 0.0);
  const Index d = m.rows();
  MatrixXd vec = es.eigenvectors();
  const VectorXd val = es.eigenvalues();
  const double scale = std::max(1.0, val.cwiseAbs().maxCoeff());
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      if (std::abs(vec(i, j)) > 1e-12) {
        if (vec(i, j) < 0) vec.col(j) *= -1.0;
        break;
      }
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index(0));
  const double tie = 1e-12 * scale;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (std::abs(val[a] - val[b]) > tie) return val[a] > val[b];
    for (Index i = 0; i < d; ++i)
      if (vec(i, a) != vec(i, b)) return vec(i, a) > vec(i, b);
    return false;
  });
  SortedEigen out{VectorXd(d), MatrixXd(d, d)};
  for (Index j = 0; j < d; ++j) {
    out.values[j] = val[order[static_cast<std::size_t>(j)]];
    out.vectors.col(j) = vec.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

MatrixXd top_subspace(const MatrixXd& m, Index r) {
  if (r < 1 || r > m.rows()) throw InvalidArgument("subspace rank must lie in [1, d]");
  return sorted_eigen(m).vectors.leftCols(r);
}

MatrixXd reduce(const Eigen::Ref<const MatrixXd>& x, const MatrixXd& basis) {
  if (x.cols() != basis.rows()) throw DimensionMismatch("data and basis dimensions differ");
  return x * basis;
}

DiscreteDistributiond lift_dist(const DiscreteDistributiond& gamma, const MatrixXd& basis,
                                const VectorXd& shift) {
  if (gamma.dim() != basis.cols() || shift.size() != basis.rows())
    throw DimensionMismatch("lift: basis, shift and distribution shapes disagree");
  MatrixXd atoms = basis * gamma.atoms();
  atoms.colwise() += shift;
  return DiscreteDistributiond(std::move(atoms), gamma.weights());
}

namespace {

Reduction reduce_impl(const Eigen::Ref<const MatrixXd>& x, Index r, bool split, bool center) {
  const Index n = x.rows(), d = x.cols();
  if (r < 1 || r > d) throw InvalidArgument("reduced dimension must lie in [1, d]");
  if (n < (split ? 4 : 2)) throw InsufficientData("reduction needs more samples");
  const Index n_fit = split ? n / 2 : n;
  const auto fit = x.topRows(n_fit);
  const auto use = split ? x.bottomRows(n - n_fit) : x.topRows(n);
  Reduction out;
  out.mean = center ? sample_mean(fit) : VectorXd::Zero(d);
  MatrixXd centered = fit.rowwise() - out.mean.transpose();
  out.basis = top_subspace(covariance_shifted(centered), r);
  out.samples = (use.rowwise() - out.mean.transpose()) * out.basis;
  return out;
}

}  // namespace

Reduction center_then_reduce(const Eigen::Ref<const MatrixXd>& x, Index r, bool split) {
  return reduce_impl(x, r, split, true);
}

Reduction plain_reduce(const Eigen::Ref<const MatrixXd>& x, Index r, bool split) {
  return reduce_impl(x, r, split, false);
}

}  // namespace gmix
