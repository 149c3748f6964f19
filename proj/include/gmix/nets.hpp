#pragma once

// Deterministic eps-coverings of the unit sphere, the probability simplex
// and the centered ball. Nets are returned as matrices whose columns are
// the net points.

#include "gmix/core.hpp"
#include "gmix/rng.hpp"

#include <cstdint>
#include <functional>

namespace gmix {

/// l2 covering of S^{dim-1}. dim 1 gives {-1, +1}; dim 2 an equally spaced
/// angle grid; higher dimensions a recursive polar grid.
MatrixXd sphere_net(Index dim, double eps);

/// `count` directions (cos a, sin a), a equally spaced over [-pi, pi).
MatrixXd angle_grid(Index count);

/// l1 covering of the simplex Delta^{k-1} by the lattice {j / m}, with m
/// the smallest resolution whose rounding error is at most eps.
MatrixXd simplex_net(Index k, double eps);

/// The lattice {j / m} in the simplex, in lexicographic order.
MatrixXd simplex_lattice(Index k, Index m);

/// Number of points of simplex_lattice(k, m), C(m + k - 1, k - 1).
double simplex_lattice_size(Index k, Index m);

/// Resolution m used by simplex_net(k, eps).
Index simplex_resolution(Index k, double eps);

/// l2 covering of the radius-R ball: a cubic lattice of spacing
/// 2 eps / sqrt(dim), with points up to R + eps projected onto the ball.
MatrixXd ball_net(Index dim, double eps, double radius);

/// Upper bound on the number of points of ball_net, without building it.
double ball_net_size_bound(Index dim, double eps, double radius);

enum class NetMetric { l2, l1 };

using PointSampler = std::function<VectorXd(CounterRng&)>;

PointSampler sphere_sampler(Index dim);
PointSampler simplex_sampler(Index k);
PointSampler ball_sampler(Index dim, double radius);

/// Max over n_probe sampled points of the distance to the nearest net
/// point. A lower bound on the covering radius.
double covering_radius_estimate(const MatrixXd& net, const PointSampler& sampler, Index n_probe,
                                std::uint64_t seed, NetMetric metric = NetMetric::l2);

/// eps * size^{1/(dim-1)}: the constant C in size <= (C / eps)^{dim-1}.
double net_size_constant(Index size, Index dim, double eps);

}  // namespace gmix
