#include "gmix/spectral.hpp"
#include "gmix/transport.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace gmix;

TEST(CovarianceShifted, OneRow) {
  MatrixXd x(1, 3);
  x << 1.0, -2.0, 0.5;
  const VectorXd v = x.row(0).transpose();
  const MatrixXd expect = v * v.transpose() - MatrixXd::Identity(3, 3);
  EXPECT_TRUE(covariance_shifted(x).isApprox(expect, 1e-15));
  const MatrixXd c = covariance_shifted(x);
  EXPECT_EQ(c, c.transpose());
}

TEST(CovarianceShifted, PureNoiseIsSmall) {
  const Index d = 5, n = 1000000;
  const MatrixXd x = sample(GaussianMixtured(DiscreteDistributiond::point_mass(VectorXd::Zero(d))), n, 41);
  EXPECT_LT(oracle::spectral_norm(covariance_shifted(x)), 0.02);
}

TEST(CovarianceShifted, PointMassApproachesOuterProduct) {
  const Eigen::Vector3d mu(1.0, -0.5, 0.8);
  const MatrixXd x = sample(GaussianMixtured(DiscreteDistributiond::point_mass(mu)), 400000, 42);
  EXPECT_LT(oracle::spectral_norm(covariance_shifted(x) - mu * mu.transpose()), 0.03);
}

TEST(TopSubspace, Diagonal) {
  const MatrixXd m = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const MatrixXd v1 = top_subspace(m, 1);
  EXPECT_NEAR(std::abs(v1(0, 0)), 1.0, 1e-15);
  const MatrixXd v2 = top_subspace(m, 2);
  EXPECT_TRUE((v2 * v2.transpose()).isApprox(MatrixXd(Eigen::Vector3d(1, 1, 0).asDiagonal()), 1e-14));
}

TEST(TopSubspace, PerturbedLowRank) {
  CounterRng rng(7, 0);
  const Index d = 12, k = 3;
  MatrixXd u = MatrixXd::NullaryExpr(d, k, [&] { return rng.normal(); });
  Eigen::HouseholderQR<MatrixXd> qr(u);
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(d, k);
  const MatrixXd truth = q * Eigen::Vector3d(3.0, 2.0, 1.0).asDiagonal() * q.transpose();
  MatrixXd e = MatrixXd::NullaryExpr(d, d, [&] { return 1e-3 * rng.normal(); });
  e = 0.5 * (e + e.transpose()).eval();
  const MatrixXd v = top_subspace(truth + e, k);
  EXPECT_LT((v.transpose() * v - MatrixXd::Identity(k, k)).norm(), 1e-10);
  // Davis-Kahan: projector error <= 2 |E| / gap with gap = 1.
  EXPECT_LT(oracle::spectral_norm(v * v.transpose() - q * q.transpose()),
            2.0 * oracle::spectral_norm(e) / 1.0);
}

TEST(SortedEigen, DeterministicSigns) {
  const MatrixXd m = MatrixXd::Identity(3, 3);
  const auto a = sorted_eigen(m);
  const auto b = sorted_eigen(m);
  EXPECT_EQ(a.vectors, b.vectors);
  for (Index j = 0; j < 3; ++j) {
    Index i = 0;
    while (std::abs(a.vectors(i, j)) <= 1e-12) ++i;
    EXPECT_GT(a.vectors(i, j), 0.0);
  }
}

TEST(Reduce, Examples) {
  CounterRng rng(2, 0);
  const MatrixXd x = MatrixXd::NullaryExpr(20, 4, [&] { return rng.normal(); });
  EXPECT_EQ(reduce(x, MatrixXd::Identity(4, 4)), x);
  EXPECT_EQ(reduce(x, MatrixXd(VectorXd::Unit(4, 0))), MatrixXd(x.col(0)));

  // Round trip of data that lies in the span of V.
  MatrixXd basis = MatrixXd::NullaryExpr(4, 2, [&] { return rng.normal(); });
  Eigen::HouseholderQR<MatrixXd> qr(basis);
  const MatrixXd v = qr.householderQ() * MatrixXd::Identity(4, 2);
  const MatrixXd coords = MatrixXd::NullaryExpr(20, 2, [&] { return rng.normal(); });
  const MatrixXd in_span = coords * v.transpose();
  EXPECT_TRUE((reduce(in_span, v) * v.transpose()).isApprox(in_span, 1e-12));
  EXPECT_THROW(reduce(x, MatrixXd::Identity(3, 3)), DimensionMismatch);
}

TEST(LiftDist, Examples) {
  CounterRng rng(3, 0);
  const auto g = oracle::random_distribution(rng, 3, 2, 1.0);
  const auto same = lift_dist(g, MatrixXd::Identity(2, 2), VectorXd::Zero(2));
  EXPECT_TRUE(same.atoms().isApprox(g.atoms()));

  MatrixXd basis = MatrixXd::NullaryExpr(5, 2, [&] { return rng.normal(); });
  Eigen::HouseholderQR<MatrixXd> qr(basis);
  const MatrixXd v = qr.householderQ() * MatrixXd::Identity(5, 2);
  const VectorXd shift = VectorXd::NullaryExpr(5, [&] { return rng.normal(); });
  const auto one = lift_dist(DiscreteDistributiond::point_mass(Eigen::Vector2d(0.3, -0.2)), v, shift);
  EXPECT_TRUE(VectorXd(one.atom(0)).isApprox(v * Eigen::Vector2d(0.3, -0.2) + shift));

  const auto lifted = lift_dist(g, v, VectorXd::Zero(5));
  for (Index i = 0; i < 2; ++i)
    EXPECT_LT(w1_1d(project_dist(lifted, VectorXd(v.col(i))), marginal(g, i)), 1e-12);
}

TEST(CenterThenReduce, SymmetricDirection) {
  const VectorXd mu = 1.5 * VectorXd::Unit(10, 3);
  MatrixXd atoms(10, 2);
  atoms << mu, -mu;
  const MatrixXd x = sample(GaussianMixtured(DiscreteDistributiond(atoms, Eigen::Vector2d(0.5, 0.5))),
                            50000, 5);
  const auto red = center_then_reduce(x, 1);
  EXPECT_GT(std::abs(red.basis.col(0).dot(mu.normalized())), 0.99);
  EXPECT_EQ(red.samples.rows(), x.rows());
}

TEST(CenterThenReduce, ConstantShift) {
  const VectorXd c = Eigen::Vector3d(0.4, -1.0, 2.0);
  const MatrixXd noise = sample(GaussianMixtured(DiscreteDistributiond::point_mass(VectorXd::Zero(3))),
                                1000, 6);
  const MatrixXd x = noise.rowwise() + c.transpose();
  const auto red = center_then_reduce(x, 2);
  EXPECT_TRUE(red.mean.isApprox(VectorXd(noise.colwise().mean().transpose()) + c, 1e-12));
  const auto again = center_then_reduce(x, 2);
  EXPECT_EQ(red.samples, again.samples);
  EXPECT_EQ(red.basis, again.basis);
}

TEST(CenterThenReduce, SplitUsesSecondHalf) {
  const MatrixXd x = sample(GaussianMixtured(DiscreteDistributiond::point_mass(VectorXd::Zero(4))), 101, 7);
  const auto red = center_then_reduce(x, 2, true);
  EXPECT_EQ(red.samples.rows(), 101 - 50);
  EXPECT_THROW(center_then_reduce(x.topRows(1), 1), InsufficientData);
}

TEST(SubspacePerturbation, ProjectionBound) {
  CounterRng rng(2718, 0);
  for (int t = 0; t < 200; ++t) {
    const Index k = 1 + static_cast<Index>(rng.below(4));
    const Index d = k + static_cast<Index>(rng.below(17));
    const auto g = oracle::random_distribution(rng, k, d, 2.0);
    MatrixXd sigma = MatrixXd::Zero(d, d);
    for (Index j = 0; j < k; ++j) sigma += g.weight(j) * g.atom(j) * g.atom(j).transpose();
    const double scale = std::pow(10.0, -3.0 + 3.0 * rng.uniform());
    MatrixXd e = MatrixXd::NullaryExpr(d, d, [&] { return scale * rng.normal(); });
    e = 0.5 * (e + e.transpose()).eval();
    const Index r = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min(k, d))));
    const MatrixXd v = top_subspace(sigma + e, r);
    const DiscreteDistributiond projected(v * v.transpose() * g.atoms(), g.weights());
    const auto lam = sorted_eigen(sigma).values;
    const double bound = static_cast<double>(k) * ((r < d ? lam[r] : 0.0) + 2.0 * oracle::spectral_norm(e));
    EXPECT_LE(w2_squared(g, projected), bound + 1e-9) << "trial " << t;
  }
}
