#include "gmix/mixing_estimator.hpp"

#include "candidate_search.hpp"
#include "gmix/nets.hpp"
#include "gmix/parallel.hpp"
#include "gmix/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmix {

double grid_size_mixing(Index n, Index k) {
  if (n < 1 || k < 1) throw InvalidArgument("grid size needs n >= 1 and k >= 1");
  return std::pow(static_cast<double>(n), -1.0 / static_cast<double>(4 * k - 2));
}

MatrixXd support_product(const std::vector<VectorXd>& supports) {
  if (supports.empty()) throw InvalidArgument("support product needs at least one support");
  Index total = 1;
  for (const auto& s : supports) {
    if (s.size() == 0) throw InvalidArgument("empty marginal support");
    total *= s.size();
  }
  const auto dim = static_cast<Index>(supports.size());
  MatrixXd pts(dim, total);
  for (Index c = 0; c < total; ++c) {
    Index rem = c;
    for (Index i = dim - 1; i >= 0; --i) {
      const auto& s = supports[static_cast<std::size_t>(i)];
      pts(i, c) = s[rem % s.size()];
      rem /= s.size();
    }
  }
  return pts;
}

namespace {

void clip_columns(MatrixXd& pts, double radius) {
  if (radius <= 0) return;
  for (Index j = 0; j < pts.cols(); ++j) {
    const double nrm = pts.col(j).norm();
    if (nrm > radius) pts.col(j) *= radius / nrm;
  }
}

DiscreteDistributiond assemble(const MatrixXd& pts, const std::vector<Index>& subset,
                               const VectorXd& w) {
  MatrixXd atoms(pts.rows(), static_cast<Index>(subset.size()));
  for (std::size_t j = 0; j < subset.size(); ++j) atoms.col(static_cast<Index>(j)) = pts.col(subset[j]);
  return DiscreteDistributiond(std::move(atoms), w).merged();
}

}  // namespace

std::vector<DiscreteDistributiond> candidate_set(const std::vector<VectorXd>& supports,
                                                 const MatrixXd& weight_net, Index k,
                                                 double radius) {
  if (weight_net.rows() != k) throw DimensionMismatch("weight vectors must have k entries");
  MatrixXd pts = support_product(supports);
  clip_columns(pts, radius);
  const bool multiset = pts.cols() < k;
  std::vector<DiscreteDistributiond> out;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index j = 0; j < k; ++j) idx[static_cast<std::size_t>(j)] = multiset ? 0 : j;
  const Index n = pts.cols();
  for (;;) {
    for (Index wi = 0; wi < weight_net.cols(); ++wi)
      out.push_back(assemble(pts, idx, weight_net.col(wi)));
    Index p = k - 1;
    while (p >= 0) {
      const Index limit = multiset ? n - 1 : n - k + p;
      if (idx[static_cast<std::size_t>(p)] < limit) break;
      --p;
    }
    if (p < 0) break;
    ++idx[static_cast<std::size_t>(p)];
    for (Index j = p + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] =
          multiset ? idx[static_cast<std::size_t>(p)] : idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

MatrixXd search_directions(Index dim, double eps, double c2) {
  if (dim < 1) throw InvalidArgument("direction net needs dim >= 1");
  if (dim == 1) return MatrixXd::Ones(1, 1);
  if (dim == 2) return angle_grid(std::max<Index>(1, static_cast<Index>(std::ceil(c2 / eps))));
  // Same covering radius as the 2-d angle grid: half the angular step.
  return sphere_net(dim, std::min(2.0, std::numbers::pi * eps / c2));
}

std::vector<DiscreteDistributiond> dmm_projections(const Eigen::Ref<const MatrixXd>& x,
                                                   const MatrixXd& directions, Index k,
                                                   double radius, const DmmOptions& opt,
                                                   int threads) {
  if (directions.rows() != x.cols()) throw DimensionMismatch("direction and data dimensions differ");
  const MatrixXd proj = x * directions;  // n x |N|, shared by all fits
  std::vector<DiscreteDistributiond> fits(static_cast<std::size_t>(directions.cols()));
  parallel_for(directions.cols(), threads, [&](Index t) {
    fits[static_cast<std::size_t>(t)] = dmm_1d(proj.col(t), k, radius, opt).merged();
  });
  return fits;
}

DiscreteDistributiond estimate_low_dim(const Eigen::Ref<const MatrixXd>& x, Index k, double radius,
                                       const EstimatorOptions& opt) {
  const Index n = x.rows(), r = x.cols();
  if (n < 1) throw InsufficientData("estimator needs at least one sample");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (r == 1) return dmm_1d(x.col(0), k, radius, opt.dmm).merged();

  const double eps = grid_size_mixing(n, k);
  std::vector<VectorXd> supports;
  supports.reserve(static_cast<std::size_t>(r));
  for (Index j = 0; j < r; ++j)
    supports.push_back(dmm_1d(x.col(j), k, radius, opt.dmm).merged().atoms().row(0).transpose());
  MatrixXd pts = support_product(supports);
  clip_columns(pts, radius);

  const auto m = std::max<Index>(1, static_cast<Index>(std::ceil(opt.c1 / eps - 1e-12)));
  const MatrixXd weights = simplex_lattice(k, m);
  const MatrixXd dirs = search_directions(r, eps, opt.c2);
  const auto fits = dmm_projections(x, dirs, k, radius, opt.dmm, opt.threads);

  // Fit atoms and weights per direction, flattened for the scorer.
  std::vector<std::vector<double>> fx(fits.size()), fw(fits.size());
  for (std::size_t t = 0; t < fits.size(); ++t) {
    const auto& f = fits[t];
    fx[t].assign(f.atoms().data(), f.atoms().data() + f.size());
    fw[t].assign(f.weights().data(), f.weights().data() + f.size());
  }
  const MatrixXd proj = pts.transpose() * dirs;  // |A| x |N|
  auto score = [&](Index t, const double* pos, const double* w) {
    const auto ti = static_cast<std::size_t>(t);
    return detail::small_w1(pos, w, k, fx[ti].data(), fw[ti].data(),
                            static_cast<Index>(fx[ti].size()));
  };
  const bool multiset = pts.cols() < k;
  const auto best = detail::minimax_search(proj, weights, k, multiset, score, opt.threads);
  return assemble(pts, best.subset, weights.col(best.weight_index));
}

DiscreteDistributiond estimate(const Eigen::Ref<const MatrixXd>& x, Index k,
                               const EstimatorOptions& opt) {
  const Index n = x.rows(), d = x.cols();
  if (n < 1) throw InsufficientData("estimator needs at least one sample");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (!(opt.radius > 0)) throw InvalidArgument("radius must be positive");
  const double radius = opt.radius;
  if (d <= k) return estimate_low_dim(x, k, radius, opt).clipped_to_ball(radius).merged();

  Reduction red;
  DiscreteDistributiond low;
  if (opt.center) {
    if (k == 1) {
      const VectorXd mean = sample_mean(x);
      return DiscreteDistributiond::point_mass(mean).clipped_to_ball(radius);
    }
    red = center_then_reduce(x, k - 1, opt.split);
    // Centered atoms lie in the ball of radius 2R.
    low = estimate_low_dim(red.samples, k, 2.0 * radius, opt);
  } else {
    red = plain_reduce(x, k, opt.split);
    low = estimate_low_dim(red.samples, k, radius, opt);
  }
  return lift_dist(low, red.basis, red.mean).clipped_to_ball(radius).merged();
}

}  // namespace gmix
