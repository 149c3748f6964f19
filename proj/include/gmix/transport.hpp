#pragma once

// Wasserstein distances between finitely supported distributions.

#include "gmix/core.hpp"
#include "gmix/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace gmix {

/// W1 between two 1-d distributions: the integral of |F - G| over the
/// merged sorted support.
template <typename Scalar>
Scalar w1_1d(const DiscreteDistribution<Scalar>& a, const DiscreteDistribution<Scalar>& b) {
  if (a.dim() != 1 || b.dim() != 1) throw DimensionMismatch("w1_1d needs 1-d distributions");
  struct Event {
    Scalar x;
    Scalar dw;  // +w for a, -w for b
  };
  std::vector<Event> ev;
  ev.reserve(static_cast<std::size_t>(a.size() + b.size()));
  for (Index j = 0; j < a.size(); ++j) ev.push_back({a.atoms()(0, j), a.weight(j)});
  for (Index j = 0; j < b.size(); ++j) ev.push_back({b.atoms()(0, j), -b.weight(j)});
  std::sort(ev.begin(), ev.end(), [](const Event& l, const Event& r) { return l.x < r.x; });
  Scalar cdf_diff = Scalar(0), total = Scalar(0);
  for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
    cdf_diff += ev[i].dw;
    total += std::abs(cdf_diff) * (ev[i + 1].x - ev[i].x);
  }
  return total;
}

/// Optimal coupling of a transportation problem.
template <typename Scalar>
struct TransportPlan {
  Scalar cost = Scalar(0);
  Matrix<Scalar> flow;  // supply x demand
};

/// Exact transportation problem min <C, P> over couplings of (supply,
/// demand), solved as a min-cost flow by successive shortest paths with
/// Dijkstra on reduced costs. Dense O((m+n)^2) per augmentation.
template <typename Scalar>
TransportPlan<Scalar> solve_transport(const Matrix<Scalar>& cost, const Vector<Scalar>& supply,
                                      const Vector<Scalar>& demand) {
  const Index m = cost.rows(), n = cost.cols();
  if (supply.size() != m || demand.size() != n)
    throw DimensionMismatch("transport cost/marginal shapes disagree");
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  const Scalar eps = Scalar(64) * std::numeric_limits<Scalar>::epsilon();

  Vector<Scalar> left = supply, right = demand;
  Matrix<Scalar> flow = Matrix<Scalar>::Zero(m, n);
  // Potentials: sources 0..m-1, sinks m..m+n-1. Reduced cost of i->j is
  // C_ij + pi_i - pi_j >= 0, of j->i (residual) is -C_ij + pi_j - pi_i >= 0.
  Vector<Scalar> pot = Vector<Scalar>::Zero(m + n);
  for (Index j = 0; j < n; ++j) pot[m + j] = cost.col(j).minCoeff();

  Vector<Scalar> dist(m + n);
  std::vector<Index> parent(static_cast<std::size_t>(m + n));
  std::vector<char> done(static_cast<std::size_t>(m + n));

  for (int guard = 0; guard < 64 * static_cast<int>(m + n) * static_cast<int>(m + n) + 64; ++guard) {
    if (left.sum() <= eps || right.sum() <= eps) break;
    dist.setConstant(inf);
    std::fill(parent.begin(), parent.end(), Index(-1));
    std::fill(done.begin(), done.end(), 0);
    for (Index i = 0; i < m; ++i)
      if (left[i] > eps) dist[i] = Scalar(0);

    Index target = -1;
    for (;;) {
      Index u = -1;
      Scalar best = inf;
      for (Index v = 0; v < m + n; ++v)
        if (!done[static_cast<std::size_t>(v)] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      if (u < 0) break;
      done[static_cast<std::size_t>(u)] = 1;
      if (u >= m && right[u - m] > eps) {
        target = u;
        break;
      }
      if (u < m) {
        for (Index j = 0; j < n; ++j) {
          const Scalar rc = std::max(Scalar(0), cost(u, j) + pot[u] - pot[m + j]);
          if (dist[u] + rc < dist[m + j]) {
            dist[m + j] = dist[u] + rc;
            parent[static_cast<std::size_t>(m + j)] = u;
          }
        }
      } else {
        const Index j = u - m;
        for (Index i = 0; i < m; ++i) {
          if (flow(i, j) <= eps) continue;
          const Scalar rc = std::max(Scalar(0), -cost(i, j) + pot[u] - pot[i]);
          if (dist[u] + rc < dist[i]) {
            dist[i] = dist[u] + rc;
            parent[static_cast<std::size_t>(i)] = u;
          }
        }
      }
    }
    if (target < 0) break;

    const Scalar dt = dist[target];
    for (Index v = 0; v < m + n; ++v) pot[v] += std::min(dist[v], dt);

    // Bottleneck along the path back to a source with spare supply.
    Scalar delta = right[target - m];
    Index v = target;
    while (parent[static_cast<std::size_t>(v)] >= 0) {
      const Index p = parent[static_cast<std::size_t>(v)];
      if (p >= m) delta = std::min(delta, flow(v, p - m));  // residual j->i
      v = p;
    }
    delta = std::min(delta, left[v]);
    left[v] -= delta;
    right[target - m] -= delta;
    v = target;
    while (parent[static_cast<std::size_t>(v)] >= 0) {
      const Index p = parent[static_cast<std::size_t>(v)];
      if (p < m)
        flow(p, v - m) += delta;
      else
        flow(v, p - m) -= delta;
      v = p;
    }
  }

  TransportPlan<Scalar> plan;
  plan.cost = (cost.array() * flow.array()).sum();
  plan.flow = std::move(flow);
  return plan;
}

/// Pairwise ground costs |x_i - y_j|^power.
template <typename Scalar>
Matrix<Scalar> pairwise_cost(const Matrix<Scalar>& x, const Matrix<Scalar>& y, int power) {
  Matrix<Scalar> c(x.cols(), y.cols());
  for (Index i = 0; i < x.cols(); ++i)
    for (Index j = 0; j < y.cols(); ++j) {
      const Scalar d = (x.col(i) - y.col(j)).norm();
      c(i, j) = power == 1 ? d : std::pow(d, Scalar(power));
    }
  return c;
}

/// Exact W1 with Euclidean ground metric.
template <typename Scalar>
Scalar w1_exact(const DiscreteDistribution<Scalar>& a, const DiscreteDistribution<Scalar>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("w1_exact: dimension mismatch");
  return solve_transport(pairwise_cost(a.atoms(), b.atoms(), 1), a.weights(), b.weights()).cost;
}

/// Exact squared W2.
template <typename Scalar>
Scalar w2_squared(const DiscreteDistribution<Scalar>& a, const DiscreteDistribution<Scalar>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("w2_squared: dimension mismatch");
  return solve_transport(pairwise_cost(a.atoms(), b.atoms(), 2), a.weights(), b.weights()).cost;
}

/// Max over the columns of `net` of the W1 distance between projections.
/// A lower bound on the sliced distance, hence on w1_exact.
template <typename Scalar>
Scalar sliced_w1(const DiscreteDistribution<Scalar>& a, const DiscreteDistribution<Scalar>& b,
                 const Matrix<Scalar>& net) {
  if (net.cols() == 0) throw InvalidArgument("sliced_w1 needs a nonempty net");
  if (a.dim() != b.dim() || net.rows() != a.dim())
    throw DimensionMismatch("sliced_w1: dimension mismatch");
  const Matrix<Scalar> pa = net.transpose() * a.atoms();  // |net| x ka
  const Matrix<Scalar> pb = net.transpose() * b.atoms();
  Scalar best = Scalar(0);
  for (Index t = 0; t < net.cols(); ++t) {
    const auto da = DiscreteDistribution<Scalar>(Matrix<Scalar>(pa.row(t)), a.weights());
    const auto db = DiscreteDistribution<Scalar>(Matrix<Scalar>(pb.row(t)), b.weights());
    best = std::max(best, w1_1d(da, db));
  }
  return best;
}

}  // namespace gmix
