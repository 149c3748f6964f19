#include "gmix/bench/models.hpp"
#include "gmix/density_estimators.hpp"
#include "gmix/em.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gmix;

TEST(EmFit, OneComponentIsSampleMean) {
  const MatrixXd x = sample(GaussianMixtured(DiscreteDistributiond::point_mass(Eigen::Vector3d(1, 2, 3))), 1000, 1);
  EmOptions opt;
  opt.max_iter = 1;
  const auto r = em_fit(x, 1, 5, opt);
  EXPECT_TRUE(VectorXd(r.mixing.atom(0)).isApprox(VectorXd(x.colwise().mean().transpose()), 1e-14));
}

TEST(EmFit, MonotoneLikelihoodAndSimplexWeights) {
  for (const char* id : {"k2c", "k3b", "dirichlet"}) {
    const auto m = bench::make_model(id, 5, 3);
    const MatrixXd x = sample(GaussianMixtured(m.mixing), 5000, 4);
    const auto r = em_fit(x, m.components, 9);
    ASSERT_GE(r.log_likelihood.size(), 2u);
    for (std::size_t i = 1; i < r.log_likelihood.size(); ++i)
      EXPECT_GE(r.log_likelihood[i], r.log_likelihood[i - 1] - 1e-9) << id << " step " << i;
    EXPECT_NEAR(r.mixing.weights().sum(), 1.0, 1e-12);
    EXPECT_GE(r.mixing.weights().minCoeff(), 0.0);
  }
}

TEST(EmFit, DeterministicAndThreadIndependent) {
  const auto m = bench::make_model("k2c", 8, 5);
  const MatrixXd x = sample(GaussianMixtured(m.mixing), 20000, 6);
  EmOptions many;
  many.threads = 4;
  const auto a = em_fit(x, 2, 11), b = em_fit(x, 2, 11), c = em_fit(x, 2, 11, many);
  EXPECT_EQ(a.mixing.atoms(), b.mixing.atoms());
  EXPECT_EQ(a.log_likelihood, b.log_likelihood);
  EXPECT_EQ(a.mixing.atoms(), c.mixing.atoms());
  EXPECT_EQ(a.log_likelihood, c.log_likelihood);
}

TEST(EmFit, StopsAtIterationCap) {
  const auto m = bench::make_model("k2a", 3, 1);
  const MatrixXd x = sample(GaussianMixtured(m.mixing), 2000, 2);
  EmOptions opt;
  opt.max_iter = 5;
  opt.rel_tol = 0.0;
  const auto r = em_fit(x, 2, 3, opt);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_FALSE(r.converged);
  EXPECT_THROW(em_fit(x.topRows(1), 2, 3), InsufficientData);
}

TEST(EmFit, FarOutlierKeepsFiniteFit) {
  // A component started at the outlier keeps it; the fit stays finite and
  // the weights stay on the simplex.
  MatrixXd x = sample(GaussianMixtured(DiscreteDistributiond::point_mass(VectorXd::Zero(1))), 400, 7);
  x(0, 0) = 1e4;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = em_fit(x, 2, seed);
    EXPECT_TRUE(r.mixing.atoms().allFinite());
    EXPECT_TRUE(std::isfinite(r.log_likelihood.back()));
    EXPECT_NEAR(r.mixing.weights().sum(), 1.0, 1e-12);
  }
  const auto m = bench::make_model("k2c", 3, 1);
  EXPECT_EQ(em_fit(sample(GaussianMixtured(m.mixing), 5000, 2), 2, 3).reseeds, 0);
}

TEST(LogLikelihood, Examples) {
  const Index d = 4;
  const VectorXd mu = VectorXd::LinSpaced(d, -1, 1);
  const auto g = DiscreteDistributiond::point_mass(mu);
  EXPECT_NEAR(log_likelihood(mu.transpose(), g), -0.5 * d * std::log(2 * std::numbers::pi), 1e-14);

  const auto m = bench::make_model("k3c", d, 2);
  const MatrixXd x = sample(GaussianMixtured(m.mixing), 3000, 3);
  const double whole = log_likelihood(x, m.mixing);
  EXPECT_NEAR(whole, log_likelihood(x.topRows(1000), m.mixing) + log_likelihood(x.bottomRows(2000), m.mixing),
              1e-9 * std::abs(whole));

  // Long double summation of the stabilized log densities.
  long double ref = 0.0L;
  const GaussianMixtured p(m.mixing);
  for (Index i = 0; i < x.rows(); ++i) ref += static_cast<long double>(log_density(p, x.row(i).transpose()));
  EXPECT_NEAR(whole, static_cast<double>(ref), 1e-8 * std::abs(whole));
}
