#pragma once

// One-dimensional moment machinery for the denoised method of moments:
// Hermite polynomials, unbiased moment estimates, the moment space of
// [-R, R] and its Euclidean projection, and Gauss quadrature.

#include "gmix/core.hpp"
#include "gmix/distribution.hpp"
#include "gmix/moment_vector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace gmix {

/// Probabilists' Hermite polynomial He_r(x) via the three-term recurrence
/// He_{r+1} = x He_r - r He_{r-1}.
template <typename Scalar>
Scalar hermite_eval(int r, Scalar x) {
  if (r < 0) throw InvalidArgument("Hermite degree must be nonnegative");
  if (r == 0) return Scalar(1);
  Scalar prev = Scalar(1), cur = x;
  for (int j = 1; j < r; ++j) {
    const Scalar next = x * cur - Scalar(j) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// He_r(x) from the explicit sum r! sum_i (-1/2)^i x^{r-2i} / (i! (r-2i)!).
template <typename Scalar>
Scalar hermite_eval_sum(int r, Scalar x) {
  if (r < 0) throw InvalidArgument("Hermite degree must be nonnegative");
  // coefficient c_i = r! (-1/2)^i / (i! (r-2i)!) built by ratio
  // c_{i+1}/c_i = -(r-2i)(r-2i-1) / (2 (i+1)).
  Scalar coeff = Scalar(1);
  Scalar total = Scalar(0);
  for (int i = 0; 2 * i <= r; ++i) {
    total += coeff * std::pow(x, r - 2 * i);
    coeff *= -Scalar((r - 2 * i) * (r - 2 * i - 1)) / Scalar(2 * (i + 1));
  }
  return total;
}

/// Unbiased estimates (1/n) sum_i He_j(Y_i), j = 1..r_max. Under
/// Y ~ nu * N(0, 1) entry j has expectation m_j(nu).
template <typename Derived>
MomentVector<typename Derived::Scalar> unbiased_moment_estimates(
    const Eigen::MatrixBase<Derived>& samples, Index r_max,
    typename Derived::Scalar radius = 1) {
  using Scalar = typename Derived::Scalar;
  const Index n = samples.size();
  if (n < 1) throw InsufficientData("moment estimation needs at least one sample");
  if (r_max < 1) throw InvalidArgument("r_max must be positive");
  Vector<Scalar> sums = Vector<Scalar>::Zero(r_max);
  for (Index i = 0; i < n; ++i) {
    const Scalar y = samples.derived().coeff(i);
    Scalar prev = Scalar(1), cur = y;
    sums[0] += cur;
    for (Index j = 1; j < r_max; ++j) {
      const Scalar next = y * cur - Scalar(j) * prev;
      prev = cur;
      cur = next;
      sums[j] += cur;
    }
  }
  return MomentVector<Scalar>(sums / Scalar(n), radius);
}

namespace detail {

template <typename Scalar>
using work_t = std::conditional_t<(sizeof(Scalar) < sizeof(long double)), long double, Scalar>;

// A_sign(x)_{ij} = R m_{i+j} + sign m_{i+j+1}, with m_0 = 1, for a moment
// vector x of length 2k-1.
template <typename Scalar>
Matrix<Scalar> localizing_matrix(const Vector<Scalar>& x, Index k, Scalar radius, int sign) {
  Matrix<Scalar> a(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      const Index s = i + j;
      const Scalar h = s == 0 ? Scalar(1) : x[s - 1];
      a(i, j) = radius * h + Scalar(sign) * x[s];
    }
  return a;
}

template <typename Scalar>
Index half_order(Index order) {
  if (order < 1 || order % 2 == 0)
    throw InvalidArgument("moment-space test needs odd order 2k-1, got " +
                          std::to_string(order));
  return (order + 1) / 2;
}

template <typename Scalar>
Scalar min_eigenvalue(const Matrix<Scalar>& a) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace detail

/// The pair (R H + B, R H - B) of k x k localizing Hankel matrices, where
/// H = [m_{i+j}] and B = [m_{i+j+1}], i, j = 0..k-1. A vector of order
/// 2k-1 is a moment vector of some measure on [-R, R] iff both are PSD.
template <typename Scalar>
std::pair<Matrix<Scalar>, Matrix<Scalar>> localizing_hankels(const MomentVector<Scalar>& m,
                                                             Scalar radius) {
  const Index k = detail::half_order<Scalar>(m.order());
  return {detail::localizing_matrix(m.values(), k, radius, +1),
          detail::localizing_matrix(m.values(), k, radius, -1)};
}

/// Membership test: both localizing matrices have smallest eigenvalue >= -tol.
template <typename Scalar>
bool is_valid(const MomentVector<Scalar>& m, Scalar radius, Scalar tol) {
  const auto [plus, minus] = localizing_hankels(m, radius);
  return detail::min_eigenvalue(plus) >= -tol && detail::min_eigenvalue(minus) >= -tol;
}

struct ProjectionOptions {
  double tol = 1e-9;
  int max_outer = 60;
  int max_newton = 200;
};

/// Euclidean projection onto the moment space M_{2k-1} of [-R, R].
///
/// Solved with a log-barrier path-following Newton method on
///   t |x - m|^2 - log det(R H(x) + B(x)) - log det(R H(x) - B(x)),
/// increasing t tenfold per stage and stopping once successive central
/// points move less than tol. Valid inputs are returned unchanged.
template <typename Scalar>
MomentVector<Scalar> project_to_moment_space(const MomentVector<Scalar>& m_tilde, Scalar radius,
                                             const ProjectionOptions& opt = {}) {
  using Mat = Matrix<Scalar>;
  using Vec = Vector<Scalar>;
  const Index order = m_tilde.order();
  const Index k = detail::half_order<Scalar>(order);
  if (!(opt.tol > 0)) throw InvalidArgument("projection tolerance must be positive");
  const Vec& target = m_tilde.values();

  if (order == 1) {
    Vec x(1);
    x[0] = std::clamp(target[0], -radius, radius);
    return MomentVector<Scalar>(std::move(x), radius);
  }

  {
    const Mat plus = detail::localizing_matrix(target, k, radius, +1);
    const Mat minus = detail::localizing_matrix(target, k, radius, -1);
    const Scalar guard = Scalar(1e-14) * std::max(Scalar(1), plus.norm());
    if (detail::min_eigenvalue(plus) >= -guard && detail::min_eigenvalue(minus) >= -guard)
      return MomentVector<Scalar>(target, radius);
  }

  // Strictly feasible start: moments of the uniform law on [-R, R].
  Vec x(order);
  {
    Scalar p = Scalar(1);
    for (Index j = 1; j <= order; ++j) {
      p *= radius;
      x[j - 1] = (j % 2 == 0) ? p / Scalar(j + 1) : Scalar(0);
    }
  }

  // Barrier value; +inf outside the interior.
  auto barrier = [&](const Vec& y, Scalar t) -> Scalar {
    Scalar val = t * (y - target).squaredNorm();
    for (int s : {+1, -1}) {
      Eigen::LLT<Mat> llt(detail::localizing_matrix(y, k, radius, s));
      if (llt.info() != Eigen::Success) return std::numeric_limits<Scalar>::infinity();
      const Mat& l = llt.matrixLLT();
      for (Index i = 0; i < k; ++i) {
        if (!(l(i, i) > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
        val -= Scalar(2) * std::log(l(i, i));
      }
    }
    return val;
  };

  auto newton_center = [&](Vec& y, Scalar t) -> bool {
    for (int it = 0; it < opt.max_newton; ++it) {
      Vec grad = Scalar(2) * t * (y - target);
      Mat hess = Scalar(2) * t * Mat::Identity(order, order);
      for (int s : {+1, -1}) {
        const Mat a = detail::localizing_matrix(y, k, radius, s);
        Eigen::LLT<Mat> llt(a);
        if (llt.info() != Eigen::Success) return false;
        const Mat inv = llt.solve(Mat::Identity(k, k));
        // d/dx_l log det A = tr(A^{-1} F_l), F_l = R E_l + s E_{l-1},
        // E_q the Hankel indicator of anti-diagonal q.
        std::vector<Mat> p(static_cast<std::size_t>(order));
        for (Index l = 1; l <= order; ++l) {
          Mat f = Mat::Zero(k, k);
          for (Index i = 0; i < k; ++i)
            for (Index j = 0; j < k; ++j) {
              if (i + j == l) f(i, j) += radius;
              if (i + j == l - 1) f(i, j) += Scalar(s);
            }
          Mat pl = inv * f;
          grad[l - 1] -= pl.trace();
          p[static_cast<std::size_t>(l - 1)] = std::move(pl);
        }
        for (Index l = 0; l < order; ++l)
          for (Index q = l; q < order; ++q) {
            const Scalar h = (p[static_cast<std::size_t>(l)].array() *
                              p[static_cast<std::size_t>(q)].transpose().array())
                                 .sum();
            hess(l, q) += h;
            if (q != l) hess(q, l) += h;
          }
      }
      Eigen::LDLT<Mat> ldlt(hess);
      const Vec step = -ldlt.solve(grad);
      const Scalar decrement = -grad.dot(step);
      if (!(decrement >= Scalar(0)) || !step.allFinite()) return false;
      if (decrement <= Scalar(1e-20)) return true;
      const Scalar f0 = barrier(y, t);
      Scalar alpha = Scalar(1);
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls, alpha *= Scalar(0.5)) {
        const Vec cand = y + alpha * step;
        const Scalar f1 = barrier(cand, t);
        if (f1 <= f0 - Scalar(0.25) * alpha * decrement) {
          y = cand;
          moved = true;
          break;
        }
      }
      if (!moved) return decrement <= Scalar(1e-10) * std::max(Scalar(1), std::abs(f0));
      if (decrement <= Scalar(1e-14) * std::max(Scalar(1), std::abs(f0))) return true;
    }
    return true;
  };

  Scalar t = Scalar(1);
  Vec prev = x;
  Scalar movement = std::numeric_limits<Scalar>::infinity();
  for (int outer = 0; outer < opt.max_outer; ++outer, t *= Scalar(10)) {
    if (!newton_center(x, t)) break;
    if (outer > 0) {
      movement = (x - prev).norm();
      if (movement < Scalar(opt.tol)) return MomentVector<Scalar>(std::move(x), radius);
    }
    prev = x;
  }
  throw ConvergenceError("moment-space projection did not converge",
                         static_cast<double>(movement));
}

struct QuadratureOptions {
  double node_slack = 1e-6;       // admissible nodes lie in [-R, R] widened by slack * max(1, R)
  double consistency_tol = 1e-6;  // scaled tail-moment check when fewer than k atoms are used
  int polish_steps = 8;
};

namespace detail {

// Gauss-Newton refinement of (atoms, weights) against m_0..m_{q-1}.
template <typename Scalar>
void polish_quadrature(Vector<Scalar>& atoms, Vector<Scalar>& weights,
                       const MomentVector<Scalar>& m, Index q, Scalar radius, int steps) {
  using Mat = Matrix<Scalar>;
  using Vec = Vector<Scalar>;
  const Index r = atoms.size();
  if (r == 0 || steps <= 0) return;
  Vec scale(q);
  {
    Scalar p = Scalar(1);
    const Scalar base = std::max(Scalar(1), radius);
    for (Index j = 0; j < q; ++j) {
      scale[j] = Scalar(1) / p;
      p *= base;
    }
  }
  auto residual = [&](const Vec& a, const Vec& w) {
    Vec res(q);
    for (Index j = 0; j < q; ++j) {
      Scalar s = Scalar(0);
      for (Index i = 0; i < r; ++i) s += w[i] * std::pow(a[i], Scalar(j));
      res[j] = (s - m(j)) * scale[j];
    }
    return res;
  };
  Vec res = residual(atoms, weights);
  for (int it = 0; it < steps; ++it) {
    const Scalar rn = res.norm();
    if (rn <= Scalar(8) * std::numeric_limits<Scalar>::epsilon()) return;
    Mat jac(q, 2 * r);
    for (Index j = 0; j < q; ++j)
      for (Index i = 0; i < r; ++i) {
        jac(j, i) = (j == 0 ? Scalar(0)
                            : Scalar(j) * weights[i] * std::pow(atoms[i], Scalar(j - 1))) *
                    scale[j];
        jac(j, r + i) = std::pow(atoms[i], Scalar(j)) * scale[j];
      }
    Eigen::ColPivHouseholderQR<Mat> qr(jac);
    if (qr.rank() < 2 * r) return;
    const Vec delta = qr.solve(res);
    const Vec a1 = atoms - delta.head(r);
    const Vec w1 = weights - delta.tail(r);
    const Vec res1 = residual(a1, w1);
    if (!(res1.norm() < rn)) return;
    atoms = a1;
    weights = w1;
    res = res1;
  }
}

// r-point Golub-Welsch rule from m_0..m_{2r-1}; false if the leading
// Hankel block is not numerically positive definite.
template <typename Scalar>
bool golub_welsch(const MomentVector<Scalar>& m, Index r, Vector<Scalar>& nodes,
                  Vector<Scalar>& weights) {
  using Mat = Matrix<Scalar>;
  Mat hankel(r, r), shifted(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) {
      hankel(i, j) = m(i + j);
      shifted(i, j) = m(i + j + 1);
    }
  Eigen::LLT<Mat> llt(hankel);
  if (llt.info() != Eigen::Success) return false;
  const Mat l = llt.matrixL();
  for (Index i = 0; i < r; ++i)
    if (!(l(i, i) > Scalar(0))) return false;
  // Jacobi matrix L^{-1} B L^{-T}; tridiagonal in exact arithmetic.
  const Mat y = l.template triangularView<Eigen::Lower>().solve(shifted);
  Mat jacobi = l.template triangularView<Eigen::Lower>().solve(y.transpose()).transpose();
  jacobi = (jacobi + jacobi.transpose()).eval() * Scalar(0.5);
  if (!jacobi.allFinite()) return false;
  Eigen::SelfAdjointEigenSolver<Mat> js(jacobi);
  nodes = js.eigenvalues();
  weights = js.eigenvectors().row(0).transpose().array().square();
  return nodes.allFinite() && weights.allFinite();
}

}  // namespace detail

/// Gauss quadrature (Golub-Welsch): the unique measure with at most k atoms
/// whose first 2k-1 moments match m. Cholesky of the Hankel matrix gives
/// the orthonormal polynomials; the eigenpairs of the Jacobi matrix
/// L^{-1} B L^{-T} give nodes and weights, refined by Gauss-Newton on the
/// moment equations. Since R H +- B = L (R I +- J) L^T, a valid moment
/// vector yields nodes in [-R, R]. When the k-point rule is not admissible
/// (numerically singular Hankel) the largest admissible r < k is used,
/// provided it also explains the remaining moments.
template <typename Scalar>
DiscreteDistribution<Scalar> gauss_quadrature(const MomentVector<Scalar>& m_in, Index k,
                                              Scalar radius_in, const QuadratureOptions& opt = {}) {
  // Nodes of clustered atoms are ill-conditioned in the moments; the rule
  // is computed in extended precision and rounded at the end.
  using Work = detail::work_t<Scalar>;
  using Vec = Vector<Work>;
  const MomentVector<Work> m(m_in.values().template cast<Work>(), Work(m_in.radius()));
  const Work radius = Work(radius_in);
  if (k < 1) throw InvalidArgument("quadrature needs k >= 1");
  if (m.order() < 2 * k - 1)
    throw InvalidArgument("quadrature with k atoms needs 2k-1 moments");
  const Work slack = Work(opt.node_slack) * std::max(Work(1), radius);

  Vec nodes, weights;
  Index used = 0;
  for (Index r = k; r >= 1; --r) {
    Vec x, w;
    if (!detail::golub_welsch(m, r, x, w)) continue;
    detail::polish_quadrature(x, w, m, 2 * r, radius, opt.polish_steps);
    const bool admissible = x.allFinite() && w.allFinite() &&
                            x.minCoeff() >= -radius - slack && x.maxCoeff() <= radius + slack &&
                            w.minCoeff() >= -slack;
    if (!admissible) continue;
    if (r < k) {
      Work worst = Work(0);
      Work base = Work(1);
      for (Index j = 1; j <= 2 * k - 1; ++j) {
        base *= std::max(Work(1), radius);
        Work s = Work(0);
        for (Index i = 0; i < r; ++i) s += w[i] * std::pow(x[i], Work(j));
        worst = std::max(worst, std::abs(s - m(j)) / base);
      }
      if (worst > Work(opt.consistency_tol))
        throw QuadratureError("moment Hankel matrix is numerically rank " + std::to_string(r) +
                              " < " + std::to_string(k) +
                              " but the higher moments are inconsistent (scaled error " +
                              std::to_string(static_cast<double>(worst)) + ")");
    }
    nodes = std::move(x);
    weights = std::move(w);
    used = r;
    break;
  }
  if (used == 0) throw QuadratureError("no admissible quadrature rule for these moments");

  for (Index i = 0; i < nodes.size(); ++i) {
    nodes[i] = std::clamp(nodes[i], -radius, radius);
    weights[i] = std::max(weights[i], Work(0));
  }
  weights /= weights.sum();
  return DiscreteDistribution<Scalar>::on_line(nodes.template cast<Scalar>(),
                                               weights.template cast<Scalar>());
}

struct DmmOptions {
  ProjectionOptions projection{};
  QuadratureOptions quadrature{};
};

/// Denoise an estimated moment vector and convert it to a k-atomic law.
template <typename Scalar>
DiscreteDistribution<Scalar> dmm_from_moments(const MomentVector<Scalar>& m_tilde, Index k,
                                              Scalar radius, const DmmOptions& opt = {}) {
  const MomentVector<Scalar> m_hat = project_to_moment_space(m_tilde, radius, opt.projection);
  return gauss_quadrature(m_hat, k, radius, opt.quadrature);
}

/// Denoised method of moments on a 1-d sample: unbiased Hermite moments,
/// projection onto the moment space, Gauss quadrature.
template <typename Derived>
DiscreteDistribution<typename Derived::Scalar> dmm_1d(const Eigen::MatrixBase<Derived>& samples,
                                                      Index k, typename Derived::Scalar radius,
                                                      const DmmOptions& opt = {}) {
  if (k < 1) throw InvalidArgument("DMM needs k >= 1");
  const auto m_tilde = unbiased_moment_estimates(samples, 2 * k - 1, radius);
  return dmm_from_moments(m_tilde, k, radius, opt);
}

}  // namespace gmix
