#include "gmix/bench/models.hpp"
#include "gmix/mixing_estimator.hpp"
#include "gmix/nets.hpp"
#include "gmix/transport.hpp"

#include "candidate_search.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gmix;

namespace {

double binomial(double n, double k) {
  double c = 1.0;
  for (int i = 1; i <= static_cast<int>(k); ++i) c = c * (n - k + i) / i;
  return c;
}

DiscreteDistributiond symmetric_pair(const VectorXd& mu) {
  MatrixXd atoms(mu.size(), 2);
  atoms << mu, -mu;
  return DiscreteDistributiond(atoms, Eigen::Vector2d(0.5, 0.5));
}

}  // namespace

TEST(CandidateSet, SingletonSupports) {
  const std::vector<VectorXd> supports{VectorXd::Constant(1, 0.3), VectorXd::Constant(1, -0.7)};
  const MatrixXd weights = Eigen::Vector2d(0.5, 0.5);
  const auto c = candidate_set(supports, weights, 2);
  ASSERT_EQ(c.size(), 1u);
  ASSERT_EQ(c[0].size(), 1);
  EXPECT_EQ(VectorXd(c[0].atom(0)), Eigen::Vector2d(0.3, -0.7));
}

TEST(CandidateSet, TwoByTwoProduct) {
  const std::vector<VectorXd> supports{Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 1)};
  const MatrixXd weights = Eigen::Vector2d(0.5, 0.5);
  EXPECT_EQ(candidate_set(supports, weights, 2).size(), 6u);
  EXPECT_EQ(support_product(supports).cols(), 4);
}

TEST(CandidateSet, SizeBound) {
  CounterRng rng(1, 0);
  for (Index k = 1; k <= 3; ++k) {
    std::vector<VectorXd> supports;
    for (Index j = 0; j < k; ++j)
      supports.push_back(VectorXd::NullaryExpr(k, [&] { return rng.normal(); }));
    const MatrixXd weights = simplex_lattice(k, 3);
    const double kk = std::pow(static_cast<double>(k), static_cast<double>(k));
    EXPECT_LE(static_cast<double>(candidate_set(supports, weights, k).size()),
              static_cast<double>(weights.cols()) * binomial(kk, static_cast<double>(k)));
  }
}

TEST(CandidateSet, ClippedToBall) {
  const std::vector<VectorXd> supports{Eigen::Vector2d(-3, 3), Eigen::Vector2d(-3, 3)};
  for (const auto& c : candidate_set(supports, Eigen::Vector2d(0.5, 0.5), 2, 2.0))
    EXPECT_LE(c.max_norm(), 2.0 + 1e-12);
}

TEST(MinimaxSearch, MatchesExhaustiveAndIgnoresThreads) {
  CounterRng rng(4, 0);
  const Index points = 7, dirs = 5, k = 3;
  const MatrixXd proj = MatrixXd::NullaryExpr(points, dirs, [&] { return rng.normal(); });
  const MatrixXd weights = simplex_lattice(k, 4);
  auto score = [&](Index t, const double* pos, const double* w) {
    double s = 0.0;
    for (Index j = 0; j < k; ++j) s += w[j] * std::abs(pos[j] - 0.1 * static_cast<double>(t));
    return s;
  };
  // Brute force over subsets i < j < l.
  double best = 1e300;
  for (Index i = 0; i < points; ++i)
    for (Index j = i + 1; j < points; ++j)
      for (Index l = j + 1; l < points; ++l)
        for (Index w = 0; w < weights.cols(); ++w) {
          double worst = 0.0;
          for (Index t = 0; t < dirs; ++t) {
            const double pos[3] = {proj(i, t), proj(j, t), proj(l, t)};
            worst = std::max(worst, score(t, pos, weights.col(w).data()));
          }
          best = std::min(best, worst);
        }
  const auto r1 = detail::minimax_search(proj, weights, k, false, score, 1);
  const auto r4 = detail::minimax_search(proj, weights, k, false, score, 4);
  EXPECT_DOUBLE_EQ(r1.value, best);
  EXPECT_EQ(r1.subset, r4.subset);
  EXPECT_EQ(r1.weight_index, r4.weight_index);
}

TEST(SearchDirections, Shapes) {
  EXPECT_EQ(search_directions(1, 0.1, 2.0).cols(), 1);
  EXPECT_EQ(search_directions(2, 0.1, 2.0).cols(), 20);
  const MatrixXd d3 = search_directions(3, 0.3, 2.0);
  for (Index j = 0; j < d3.cols(); ++j) EXPECT_NEAR(d3.col(j).norm(), 1.0, 1e-12);
}

TEST(EstimateLowDim, OneComponent) {
  const MatrixXd x =
      sample(GaussianMixtured(DiscreteDistributiond::point_mass(VectorXd::Constant(1, 0.4))), 20000, 3);
  const auto g = estimate_low_dim(x, 1, 2.0);
  const VectorXd y = x.col(0);
  EXPECT_LT(w1_1d(g, dmm_1d(y, 1, 2.0)), 1e-15);
}

// Seeded oracle values, frozen from the first build (observed 0.150286
// and 0.0491528). The 2-d value is dominated by the weight lattice
// resolution ceil(1 / eps) = 7, which cannot represent 1/2.
constexpr double kLowDimThreshold = 0.16;
constexpr double kK2cThreshold = 0.055;

TEST(EstimateLowDim, SeededTwoComponent) {
  const auto g = symmetric_pair(Eigen::Vector2d(1, 0));
  const MatrixXd x = sample(GaussianMixtured(g), 100000, 101);
  const auto est = estimate_low_dim(x, 2, 2.0);
  EXPECT_LE(est.size(), 2);
  EXPECT_LT(w1_exact(g, est), kLowDimThreshold);
}

TEST(Estimate, SeededHighDimensional) {
  const auto m = bench::make_model("k2c", 100, 202);
  const MatrixXd x = sample(GaussianMixtured(m.mixing), 100000, 203);
  const auto est = estimate(x, 2);
  EXPECT_LT(w1_exact(m.mixing, est), kK2cThreshold);
}

TEST(Estimate, OneDimensionalEqualsDmm) {
  VectorXd a(2), w(2);
  a << -1.2, 0.8;
  w << 0.4, 0.6;
  const MatrixXd x = sample(GaussianMixtured(DiscreteDistributiond::on_line(a, w)), 20000, 5);
  const VectorXd y = x.col(0);
  EstimatorOptions opt;
  opt.radius = 2.0;
  EXPECT_LT(w1_1d(estimate(x, 2, opt), dmm_1d(y, 2, 2.0)), 1e-12);
}

TEST(Estimate, OutputInClass) {
  CounterRng rng(9, 0);
  for (int t = 0; t < 6; ++t) {
    const Index k = 1 + static_cast<Index>(rng.below(3));
    const Index d = 1 + static_cast<Index>(rng.below(8));
    const auto g = oracle::random_distribution(rng, k, d, 2.0, 0.1);
    const MatrixXd x = sample(GaussianMixtured(g), 5000, 100 + static_cast<std::uint64_t>(t));
    for (bool center : {true, false}) {
      EstimatorOptions opt;
      opt.center = center;
      const auto est = estimate(x, k, opt);
      EXPECT_TRUE(est.in_class(k, 2.0)) << "t=" << t << " center=" << center;
      EXPECT_EQ(est.dim(), d);
    }
  }
}

TEST(Estimate, DeterministicAcrossThreads) {
  const auto m = bench::make_model("k3b", 6, 77);
  const MatrixXd x = sample(GaussianMixtured(m.mixing), 20000, 78);
  EstimatorOptions one, many;
  many.threads = 4;
  for (bool center : {true, false}) {
    one.center = many.center = center;
    const auto a = estimate(x, 3, one), b = estimate(x, 3, many);
    EXPECT_EQ(a.atoms(), b.atoms());
    EXPECT_EQ(a.weights(), b.weights());
  }
}

TEST(Estimate, RotationEquivariance) {
  CounterRng rng(12, 0);
  const Index d = 6, k = 2, n = 20000;
  const auto g = symmetric_pair(VectorXd(1.5 * VectorXd::Unit(d, 0)));
  const MatrixXd x = sample(GaussianMixtured(g), n, 13);
  Eigen::HouseholderQR<MatrixXd> qr(MatrixXd::NullaryExpr(d, d, [&] { return rng.normal(); }));
  const MatrixXd q = qr.householderQ();
  const DiscreteDistributiond rotated_truth(q * g.atoms(), g.weights());
  for (bool center : {true, false}) {
    EstimatorOptions opt;
    opt.center = center;
    const double e0 = w1_exact(g, estimate(x, k, opt));
    const double e1 = w1_exact(rotated_truth, estimate(x * q.transpose(), k, opt));
    const double slack = 2.0 * 2.0 * std::sqrt(static_cast<double>(k)) * grid_size_mixing(n, k);
    EXPECT_LT(std::abs(e0 - e1), slack) << "center=" << center;
  }
}

TEST(Estimate, ErrorShrinksWithSampleSize) {
  int better = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto m = bench::make_model("k2c", 100, hash_seed({55, static_cast<std::uint64_t>(rep)}));
    const GaussianMixtured p(m.mixing);
    const double small = w1_exact(m.mixing, estimate(sample(p, 10000, hash_seed({56, static_cast<std::uint64_t>(rep)})), 2));
    const double large = w1_exact(m.mixing, estimate(sample(p, 200000, hash_seed({57, static_cast<std::uint64_t>(rep)})), 2));
    better += large <= small;
  }
  EXPECT_GE(better, 8);
}

TEST(GridSize, Formula) {
  EXPECT_DOUBLE_EQ(grid_size_mixing(100000, 2), std::pow(100000.0, -1.0 / 6.0));
  EXPECT_DOUBLE_EQ(grid_size_mixing(64, 1), 1.0 / 8.0);
}
