#include "gmix/moment_tensors.hpp"

#include "gmix/density_estimators.hpp"
#include "gmix/moments.hpp"
#include "gmix/rng.hpp"
#include "gmix/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gmix {

namespace {

double ipow(double x, int l) {
  double r = 1.0;
  for (int i = 0; i < l; ++i) r *= x;
  return r;
}

}  // namespace

MomentTensor::MomentTensor(int order, MatrixXd points, VectorXd coeffs)
    : order_(order), points_(std::move(points)), coeffs_(std::move(coeffs)) {
  if (order_ < 1) throw InvalidArgument("tensor order must be >= 1");
  if (points_.cols() != coeffs_.size()) throw DimensionMismatch("tensor points/coeffs disagree");
  // Canonical form: equal points merged, zero coefficients dropped.
  std::vector<Index> keep;
  std::vector<double> c;
  for (Index j = 0; j < points_.cols(); ++j) {
    bool found = false;
    for (std::size_t q = 0; q < keep.size(); ++q)
      if (points_.col(keep[q]) == points_.col(j)) {
        c[q] += coeffs_[j];
        found = true;
        break;
      }
    if (!found) {
      keep.push_back(j);
      c.push_back(coeffs_[j]);
    }
  }
  Index live = 0;
  for (double v : c) live += v != 0.0;
  MatrixXd p(points_.rows(), live);
  VectorXd cc(live);
  Index out = 0;
  for (std::size_t q = 0; q < keep.size(); ++q) {
    if (c[q] == 0.0) continue;
    p.col(out) = points_.col(keep[q]);
    cc[out++] = c[q];
  }
  points_ = std::move(p);
  coeffs_ = std::move(cc);
}

double MomentTensor::contract(const Eigen::Ref<const VectorXd>& u) const {
  if (u.size() != dim()) throw DimensionMismatch("contraction vector has wrong dimension");
  const VectorXd proj = points_.transpose() * u;
  double s = 0.0;
  for (Index i = 0; i < rank(); ++i) s += coeffs_[i] * ipow(proj[i], order_);
  return s;
}

VectorXd MomentTensor::dense() const {
  const double entries = std::pow(static_cast<double>(dim()), order_);
  if (entries > kDenseLimit)
    throw InvalidArgument("dense tensor would have " + std::to_string(entries) + " entries");
  const Index d = dim();
  const auto size = static_cast<Index>(std::llround(entries));
  VectorXd out = VectorXd::Zero(size);
  for (Index i = 0; i < rank(); ++i) {
    VectorXd v = points_.col(i);
    for (int m = 1; m < order_; ++m) {
      VectorXd next(v.size() * d);
      for (Index a = 0; a < v.size(); ++a) next.segment(a * d, d) = v[a] * points_.col(i);
      v = std::move(next);
    }
    out += coeffs_[i] * v;
  }
  return out;
}

MomentTensor MomentTensor::operator-(const MomentTensor& other) const {
  if (other.order_ != order_ || other.dim() != dim())
    throw DimensionMismatch("tensor difference needs equal order and dimension");
  MatrixXd p(dim(), rank() + other.rank());
  p << points_, other.points_;
  VectorXd c(rank() + other.rank());
  c << coeffs_, -other.coeffs_;
  return MomentTensor(order_, std::move(p), std::move(c));
}

MomentTensor moment_tensor(const DiscreteDistributiond& gamma, int order) {
  return MomentTensor(order, gamma.atoms(), gamma.weights());
}

double tensor_inner(const MomentTensor& s, const MomentTensor& t) {
  if (s.order() != t.order() || s.dim() != t.dim())
    throw DimensionMismatch("tensor inner product needs equal order and dimension");
  const MatrixXd gram = s.points().transpose() * t.points();
  double total = 0.0;
  for (Index i = 0; i < gram.rows(); ++i)
    for (Index j = 0; j < gram.cols(); ++j)
      total += s.coeffs()[i] * t.coeffs()[j] * ipow(gram(i, j), s.order());
  return total;
}

double frobenius_norm(const MomentTensor& t) { return std::sqrt(std::max(0.0, tensor_inner(t, t))); }

double frob_dist_max(const DiscreteDistributiond& a, const DiscreteDistributiond& b, int max_order) {
  if (a.dim() != b.dim()) throw DimensionMismatch("frob_dist_max: dimension mismatch");
  double best = 0.0;
  for (int l = 1; l <= max_order; ++l)
    best = std::max(best, frobenius_norm(moment_tensor(a, l) - moment_tensor(b, l)));
  return best;
}

namespace {

// Backtracking ascent of s * <T, u^l> on the sphere from u.
double ascend(const MomentTensor& t, VectorXd u, double sign) {
  const int l = t.order();
  u.normalize();
  double val = sign * t.contract(u);
  double step = 1.0;
  for (int it = 0; it < 2000 && step > 1e-14; ++it) {
    const VectorXd proj = t.points().transpose() * u;
    VectorXd g = VectorXd::Zero(u.size());
    for (Index i = 0; i < t.rank(); ++i)
      g += (sign * l * t.coeffs()[i] * ipow(proj[i], l - 1)) * t.points().col(i);
    g -= g.dot(u) * u;
    if (g.norm() <= 1e-15 * std::max(1.0, std::abs(val))) break;
    VectorXd cand = (u + step * g).normalized();
    const double cv = sign * t.contract(cand);
    if (cv > val) {
      const double gain = cv - val;
      u = std::move(cand);
      val = cv;
      step *= 2.0;
      if (gain <= 1e-16 * std::max(1.0, std::abs(val))) break;
    } else {
      step *= 0.5;
    }
  }
  return val;
}

}  // namespace

double operator_norm(const MomentTensor& t, int restarts, std::uint64_t seed) {
  if (t.rank() == 0) return 0.0;
  const Index d = t.dim();
  if (t.order() == 2) {
    MatrixXd m = MatrixXd::Zero(d, d);
    for (Index i = 0; i < t.rank(); ++i)
      m += t.coeffs()[i] * t.points().col(i) * t.points().col(i).transpose();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  std::vector<VectorXd> starts;
  for (Index i = 0; i < t.rank(); ++i)
    if (t.points().col(i).norm() > 0) starts.emplace_back(t.points().col(i));
  if (t.order() == 1) {
    VectorXd v = t.points() * t.coeffs();
    if (v.norm() > 0) starts.push_back(v);
  }
  CounterRng rng(seed, 0x6f70);
  for (int r = 0; r < restarts; ++r) {
    VectorXd v(d);
    do {
      for (Index i = 0; i < d; ++i) v[i] = rng.normal();
    } while (v.norm() == 0.0);
    starts.push_back(v);
  }
  double best = 0.0;
  for (const auto& s : starts)
    for (double sign : {1.0, -1.0}) best = std::max(best, ascend(t, s, sign));
  return best;
}

HellingerEstimate hellinger_mc(const GaussianMixtured& p, const GaussianMixtured& q, Index n_mc,
                               std::uint64_t seed) {
  if (p.dim() != q.dim()) throw DimensionMismatch("hellinger_mc: dimension mismatch");
  if (n_mc < 1000) throw InvalidArgument("hellinger_mc needs at least 1000 draws");
  const Index d = p.dim();
  double sum = 0.0, sum_sq = 0.0;
  VectorXd x(d);
  for (Index i = 0; i < n_mc; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const auto& g = rng.uniform() < 0.5 ? p.mixing() : q.mixing();
    const double u = rng.uniform();
    Index c = 0;
    double acc = g.weight(0);
    while (c + 1 < g.size() && !(u < acc)) acc += g.weight(++c);
    for (Index j = 0; j < d; ++j) x[j] = g.atoms()(j, c) + rng.normal();
    const double lp = log_density(p, x), lq = log_density(q, x);
    const double hi = std::max(lp, lq), lo = std::min(lp, lq);
    const double lm = hi + std::log1p(std::exp(lo - hi)) - std::numbers::ln2;
    const double f = std::exp(0.5 * (lp + lq) - lm);
    sum += f;
    sum_sq += f * f;
  }
  const double n = static_cast<double>(n_mc);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {std::clamp(2.0 - 2.0 * mean, 0.0, 2.0), 2.0 * std::sqrt(var / n)};
}

MomentHellingerReport moment_hellinger_report(const DiscreteDistributiond& a,
                                              const DiscreteDistributiond& b, Index k, Index n_mc,
                                              std::uint64_t seed, double frob_tol) {
  if (a.size() > k || b.size() > k) throw InvalidArgument("inputs must have at most k atoms");
  MomentHellingerReport r;
  r.frob_max = frob_dist_max(a, b, static_cast<int>(2 * k - 1));
  const auto h = hellinger_mc(GaussianMixtured(a), GaussianMixtured(b), n_mc, seed);
  r.hellinger_sq = h.value;
  r.hellinger_se = h.standard_error;
  r.frob_zero = r.frob_max <= frob_tol;
  r.hellinger_zero = h.value <= 3.0 * h.standard_error;
  r.consistent = r.frob_zero == r.hellinger_zero;
  if (r.frob_max > 0)
    r.ratio = r.hellinger_sq / r.frob_max;
  else
    r.ratio = r.hellinger_zero ? 0.0 : std::numeric_limits<double>::infinity();
  return r;
}

bool identified_by_moments(const DiscreteDistributiond& a, const DiscreteDistributiond& b, Index k,
                           Index n_dirs, std::uint64_t seed, double tol) {
  if (a.dim() != b.dim()) throw DimensionMismatch("identifiability check: dimension mismatch");
  const Index d = a.dim();
  const double radius = std::max({1.0, a.max_norm(), b.max_norm()});
  CounterRng rng(seed, 0x6964);
  MatrixXd dirs(d, d + n_dirs);
  dirs.leftCols(d).setIdentity();
  for (Index t = 0; t < n_dirs; ++t) {
    VectorXd v(d);
    do {
      for (Index i = 0; i < d; ++i) v[i] = rng.normal();
    } while (v.norm() == 0.0);
    dirs.col(d + t) = v.normalized();
  }
  for (Index t = 0; t < dirs.cols(); ++t) {
    const auto pa = project_dist(a, dirs.col(t));
    const auto pb = project_dist(b, dirs.col(t));
    const auto qa = gauss_quadrature(moments_1d(pa, 2 * k - 1, radius), k, radius);
    const auto qb = gauss_quadrature(moments_1d(pb, 2 * k - 1, radius), k, radius);
    if (w1_1d(qa, qb) > tol) return true;
  }
  return false;
}

}  // namespace gmix
