#include "gmix/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gmix {

namespace {

void check_eps(double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw InvalidArgument("net resolution must be positive");
}

// Recursive polar grid on S^{dim-1}: x = (cos phi, sin phi * y). With
// |phi - phi_i| <= h/2 and y within rho of a sub-net point, the distance
// is at most h/2 + sin(phi_i) rho, so rho = eps / (2 sin phi_i) suffices.
void polar_net(Index dim, double eps, std::vector<VectorXd>& out) {
  if (dim == 1) {
    out.push_back(VectorXd::Constant(1, -1.0));
    out.push_back(VectorXd::Constant(1, 1.0));
    return;
  }
  if (eps >= 2.0) {
    out.push_back(VectorXd::Unit(dim, 0));
    return;
  }
  if (dim == 2) {
    const auto n = static_cast<Index>(std::ceil(std::numbers::pi / (2.0 * std::asin(eps / 2.0))));
    for (Index j = 0; j < n; ++j) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      VectorXd v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
    return;
  }
  const auto n_phi = static_cast<Index>(std::ceil(std::numbers::pi / eps));
  const double h = std::numbers::pi / static_cast<double>(n_phi);
  for (Index i = 0; i < n_phi; ++i) {
    const double phi = (static_cast<double>(i) + 0.5) * h;
    const double s = std::sin(phi);
    std::vector<VectorXd> sub;
    polar_net(dim - 1, eps / (2.0 * s), sub);
    for (const auto& y : sub) {
      VectorXd v(dim);
      v[0] = std::cos(phi);
      v.tail(dim - 1) = s * y;
      out.push_back(v);
    }
  }
}

MatrixXd to_matrix(const std::vector<VectorXd>& pts, Index dim) {
  MatrixXd m(dim, static_cast<Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) m.col(static_cast<Index>(j)) = pts[j];
  return m;
}

}  // namespace

MatrixXd sphere_net(Index dim, double eps) {
  if (dim < 1) throw InvalidArgument("sphere dimension must be >= 1");
  check_eps(eps);
  std::vector<VectorXd> pts;
  polar_net(dim, eps, pts);
  return to_matrix(pts, dim);
}

MatrixXd angle_grid(Index count) {
  if (count < 1) throw InvalidArgument("angle grid needs at least one direction");
  MatrixXd net(2, count);
  for (Index j = 0; j < count; ++j) {
    const double a = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                             static_cast<double>(count);
    net(0, j) = std::cos(a);
    net(1, j) = std::sin(a);
  }
  return net;
}

// Largest-remainder rounding to the lattice {j/m} moves a point by at most
// 2 s (k - s) / (k m) in l1, maximized at s = floor(k/2).
Index simplex_resolution(Index k, double eps) {
  if (k < 1) throw InvalidArgument("simplex needs k >= 1");
  check_eps(eps);
  if (k == 1) return 1;
  const double lo = static_cast<double>(k / 2), hi = static_cast<double>(k - k / 2);
  const double bound = 2.0 * lo * hi / static_cast<double>(k);
  return std::max<Index>(1, static_cast<Index>(std::ceil(bound / eps - 1e-12)));
}

double simplex_lattice_size(Index k, Index m) {
  // C(m + k - 1, k - 1) in floating point.
  double c = 1.0;
  for (Index i = 1; i < k; ++i) c = c * static_cast<double>(m + i) / static_cast<double>(i);
  return std::round(c);
}

MatrixXd simplex_lattice(Index k, Index m) {
  if (k < 1 || m < 1) throw InvalidArgument("simplex lattice needs k >= 1 and m >= 1");
  std::vector<VectorXd> pts;
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  // Enumerate compositions of m into k parts in lexicographic order.
  auto rec = [&](auto&& self, Index pos, Index left) -> void {
    if (pos == k - 1) {
      counts[static_cast<std::size_t>(pos)] = left;
      VectorXd w(k);
      for (Index i = 0; i < k; ++i)
        w[i] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / static_cast<double>(m);
      pts.push_back(w);
      return;
    }
    for (Index c = 0; c <= left; ++c) {
      counts[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, m);
  return to_matrix(pts, k);
}

MatrixXd simplex_net(Index k, double eps) {
  return simplex_lattice(k, simplex_resolution(k, eps));
}

double ball_net_size_bound(Index dim, double eps, double radius) {
  const double step = 2.0 * eps / std::sqrt(static_cast<double>(dim));
  const double per_axis = 2.0 * std::floor((radius + eps) / step) + 1.0;
  return std::pow(per_axis, static_cast<double>(dim));
}

MatrixXd ball_net(Index dim, double eps, double radius) {
  if (dim < 1) throw InvalidArgument("ball dimension must be >= 1");
  check_eps(eps);
  if (!(radius > 0)) throw InvalidArgument("ball radius must be positive");
  const double step = 2.0 * eps / std::sqrt(static_cast<double>(dim));
  const auto half = static_cast<Index>(std::floor((radius + eps) / step));
  const double reach = radius + eps;
  std::vector<VectorXd> pts;
  std::vector<Index> idx(static_cast<std::size_t>(dim), -half);
  for (;;) {
    VectorXd p(dim);
    for (Index i = 0; i < dim; ++i) p[i] = step * static_cast<double>(idx[static_cast<std::size_t>(i)]);
    const double nrm = p.norm();
    if (nrm <= reach) {
      if (nrm > radius) p *= radius / nrm;
      pts.push_back(p);
    }
    Index pos = dim - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == half) {
      idx[static_cast<std::size_t>(pos)] = -half;
      --pos;
    }
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
  }
  // Radial projection can make boundary points coincide.
  std::vector<VectorXd> unique;
  unique.reserve(pts.size());
  const double tol = 1e-12 * std::max(1.0, radius);
  for (const auto& p : pts) {
    if (p.norm() < radius - tol) {
      unique.push_back(p);
      continue;
    }
    bool dup = false;
    for (const auto& q : unique)
      if ((q - p).norm() <= tol) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(p);
  }
  return to_matrix(unique, dim);
}

PointSampler sphere_sampler(Index dim) {
  return [dim](CounterRng& rng) {
    VectorXd v(dim);
    do {
      for (Index i = 0; i < dim; ++i) v[i] = rng.normal();
    } while (v.norm() == 0.0);
    return VectorXd(v / v.norm());
  };
}

PointSampler simplex_sampler(Index k) {
  return [k](CounterRng& rng) {
    VectorXd w(k);
    for (Index i = 0; i < k; ++i) w[i] = rng.exponential();
    return VectorXd(w / w.sum());
  };
}

PointSampler ball_sampler(Index dim, double radius) {
  auto dir = sphere_sampler(dim);
  return [dim, radius, dir](CounterRng& rng) {
    VectorXd v = dir(rng);
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
    return VectorXd(r * v);
  };
}

double covering_radius_estimate(const MatrixXd& net, const PointSampler& sampler, Index n_probe,
                                std::uint64_t seed, NetMetric metric) {
  if (net.cols() == 0) throw InvalidArgument("covering radius of an empty net");
  CounterRng rng(seed, 0x6e6574);
  double worst = 0.0;
  for (Index p = 0; p < n_probe; ++p) {
    const VectorXd x = sampler(rng);
    if (x.size() != net.rows()) throw DimensionMismatch("probe and net dimensions differ");
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < net.cols(); ++j) {
      const double d = metric == NetMetric::l2 ? (net.col(j) - x).norm()
                                               : (net.col(j) - x).lpNorm<1>();
      best = std::min(best, d);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

double net_size_constant(Index size, Index dim, double eps) {
  if (dim <= 1) return static_cast<double>(size);
  return eps * std::pow(static_cast<double>(size), 1.0 / static_cast<double>(dim - 1));
}

}  // namespace gmix
