#include "gmix/density_estimators.hpp"

#include "candidate_search.hpp"
#include "gmix/mixing_estimator.hpp"
#include "gmix/nets.hpp"
#include "gmix/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gmix {

double log_density(const GaussianMixtured& p, const Eigen::Ref<const VectorXd>& x) {
  const auto& g = p.mixing();
  if (x.size() != g.dim()) throw DimensionMismatch("point and mixture dimensions differ");
  const double log_norm = -0.5 * static_cast<double>(g.dim()) * std::log(2.0 * std::numbers::pi);
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(static_cast<std::size_t>(g.size()));
  for (Index j = 0; j < g.size(); ++j) {
    const double w = g.weight(j);
    const double t = w > 0 ? std::log(w) - 0.5 * (x - g.atom(j)).squaredNorm()
                           : -std::numeric_limits<double>::infinity();
    terms[static_cast<std::size_t>(j)] = t;
    top = std::max(top, t);
  }
  if (!std::isfinite(top)) return -std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (double t : terms) s += std::exp(t - top);
  return log_norm + top + std::log(s);
}

double evaluate_density(const GaussianMixtured& p, const Eigen::Ref<const VectorXd>& x) {
  return std::exp(log_density(p, x));
}

namespace {

double kgm_grid(Index n, const DensityKgmOptions& opt) {
  return opt.eps_scale / std::sqrt(static_cast<double>(n));
}

struct KgmSizes {
  double points;
  double weights;
  double directions;
};

KgmSizes kgm_sizes(Index n, Index k, Index r, const DensityKgmOptions& opt, const MatrixXd* ball) {
  const double eps = kgm_grid(n, opt);
  const double pts =
      ball ? static_cast<double>(ball->cols()) : ball_net_size_bound(r, eps, opt.radius);
  const double w = simplex_lattice_size(k, simplex_resolution(k, eps));
  double dirs = 1.0;
  if (r == 2) dirs = std::ceil(opt.c2 / eps);
  if (r >= 3) dirs = static_cast<double>(search_directions(r, eps, opt.c2).cols());
  return {pts, w, dirs};
}

double kgm_work(const KgmSizes& s, Index k) {
  const bool multiset = s.points < static_cast<double>(k);
  const double subsets =
      multiset ? detail::subset_count(static_cast<Index>(s.points), k, true)
               : [&] {
                   double c = 1.0;
                   for (Index i = 1; i <= k; ++i)
                     c = c * (s.points - static_cast<double>(k - i)) / static_cast<double>(i);
                   return c;
                 }();
  return subsets * s.weights * s.directions;
}

}  // namespace

double density_kgm_work(Index n, Index k, const DensityKgmOptions& opt) {
  return kgm_work(kgm_sizes(n, k, k, opt, nullptr), k);
}

GaussianMixtured density_estimate_kgm(const Eigen::Ref<const MatrixXd>& x, Index k,
                                      const DensityKgmOptions& opt) {
  const Index n = x.rows(), d = x.cols();
  if (n < 2) throw InsufficientData("density estimate needs n >= 2");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (!(opt.radius > 0) || !(opt.eps_scale > 0)) throw InvalidArgument("radius and eps scale must be positive");
  const double radius = opt.radius;

  if (k == 1) {
    VectorXd mu(d);
    for (Index j = 0; j < d; ++j) mu[j] = dmm_1d(x.col(j), 1, radius, opt.dmm).atoms()(0, 0);
    return GaussianMixtured(DiscreteDistributiond::point_mass(mu).clipped_to_ball(radius));
  }

  const Index r = std::min(d, k);
  const double eps = kgm_grid(n, opt);
  // Refuse before building anything large; the lattice bound overcounts
  // the ball, so the exact count decides when the net is small enough.
  const double bound_work = kgm_work(kgm_sizes(n, k, r, opt, nullptr), k);
  if (bound_work > opt.budget && ball_net_size_bound(r, eps, radius) > 1e7)
    throw BudgetExceeded(bound_work, opt.budget);
  const MatrixXd ball = ball_net(r, eps, radius);
  const double work = kgm_work(kgm_sizes(n, k, r, opt, &ball), k);
  if (work > opt.budget) throw BudgetExceeded(work, opt.budget);

  Reduction red;
  if (d > k) {
    red = plain_reduce(x, k);
  } else {
    red.samples = x;
    red.basis = MatrixXd::Identity(d, d);
    red.mean = VectorXd::Zero(d);
  }
  const MatrixXd weights = simplex_net(k, eps);
  const MatrixXd dirs = search_directions(r, eps, opt.c2);
  const auto fits = dmm_projections(red.samples, dirs, k, radius, opt.dmm, opt.threads);

  const Index q = 2 * k - 1;
  MatrixXd fit_moments(q, static_cast<Index>(fits.size()));
  for (std::size_t t = 0; t < fits.size(); ++t)
    fit_moments.col(static_cast<Index>(t)) = moments_1d(fits[t], q, radius).values();
  const MatrixXd proj = ball.transpose() * dirs;
  auto score = [&](Index t, const double* pos, const double* w) {
    double worst = 0.0;
    double pw[64];
    for (Index j = 0; j < k; ++j) pw[j] = w[j];
    for (Index rr = 0; rr < q; ++rr) {
      double m = 0.0;
      for (Index j = 0; j < k; ++j) {
        pw[j] *= pos[j];
        m += pw[j];
      }
      worst = std::max(worst, std::abs(m - fit_moments(rr, t)));
    }
    return worst;
  };
  const bool multiset = ball.cols() < k;
  const auto best = detail::minimax_search(proj, weights, k, multiset, score, opt.threads);
  MatrixXd atoms(r, k);
  for (Index j = 0; j < k; ++j) atoms.col(j) = ball.col(best.subset[static_cast<std::size_t>(j)]);
  const DiscreteDistributiond low(std::move(atoms), weights.col(best.weight_index));
  return GaussianMixtured(
      lift_dist(low.merged(), red.basis, red.mean).clipped_to_ball(radius).merged());
}

GaussianMixtured density_estimate_2gm(const Eigen::Ref<const MatrixXd>& x,
                                      const Density2gmOptions& opt) {
  const Index n = x.rows();
  if (n < 4) throw InsufficientData("2-GM density estimate needs n >= 4");
  if (!(opt.radius > 0)) throw InvalidArgument("radius must be positive");
  const Index n_fit = opt.split ? n / 2 : n;
  const auto first = x.topRows(n_fit);
  const auto second = opt.split ? x.bottomRows(n - n_fit) : x.topRows(n);
  const VectorXd mu = sample_mean(first);
  const MatrixXd centered = first.rowwise() - mu.transpose();
  const VectorXd u = top_subspace(covariance_shifted(centered), 1).col(0);
  const VectorXd proj = (second.rowwise() - mu.transpose()) * u;
  // Centered atoms lie in the ball of radius 2R.
  const auto g1 = dmm_1d(proj, 2, 2.0 * opt.radius, opt.dmm).merged();
  MatrixXd atoms = u * g1.atoms();
  atoms.colwise() += mu;
  return GaussianMixtured(
      DiscreteDistributiond(std::move(atoms), g1.weights()).clipped_to_ball(opt.radius).merged());
}

}  // namespace gmix
