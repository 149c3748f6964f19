#include "gmix/em.hpp"

#include "gmix/parallel.hpp"
#include "gmix/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gmix {

namespace {

constexpr Index kBlock = 4096;

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Responsibilities of one row block and its log-likelihood terms.
void e_step_block(const Eigen::Ref<const MatrixXd>& x, Index begin, Index end,
                  const DiscreteDistributiond& gamma, MatrixXd& resp, CompensatedSum& ll) {
  const Index k = gamma.size(), d = gamma.dim();
  const double log_norm = -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi);
  const auto xb = x.middleRows(begin, end - begin);
  MatrixXd cross = xb * gamma.atoms();  // rows x k
  const VectorXd atom_sq = gamma.atoms().colwise().squaredNorm().transpose();
  VectorXd log_w(k);
  for (Index j = 0; j < k; ++j)
    log_w[j] = gamma.weight(j) > 0 ? std::log(gamma.weight(j))
                                   : -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < xb.rows(); ++i) {
    const double xsq = xb.row(i).squaredNorm();
    double top = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < k; ++j) {
      const double t = log_w[j] - 0.5 * (xsq - 2.0 * cross(i, j) + atom_sq[j]);
      cross(i, j) = t;
      top = std::max(top, t);
    }
    double s = 0.0;
    for (Index j = 0; j < k; ++j) s += std::exp(cross(i, j) - top);
    for (Index j = 0; j < k; ++j) resp(begin + i, j) = std::exp(cross(i, j) - top) / s;
    ll.add(log_norm + top + std::log(s));
  }
}

double e_step(const Eigen::Ref<const MatrixXd>& x, const DiscreteDistributiond& gamma,
              MatrixXd& resp, int threads) {
  const Index n = x.rows();
  const Index blocks = (n + kBlock - 1) / kBlock;
  std::vector<CompensatedSum> partial(static_cast<std::size_t>(blocks));
  parallel_for(blocks, threads, [&](Index b) {
    e_step_block(x, b * kBlock, std::min(n, (b + 1) * kBlock), gamma, resp,
                 partial[static_cast<std::size_t>(b)]);
  });
  CompensatedSum total;
  for (const auto& p : partial) {
    total.add(p.sum);
    total.add(p.carry);
  }
  return total.value();
}

}  // namespace

double log_likelihood(const Eigen::Ref<const MatrixXd>& x, const DiscreteDistributiond& gamma) {
  if (x.cols() != gamma.dim()) throw DimensionMismatch("data and mixture dimensions differ");
  MatrixXd resp(x.rows(), gamma.size());
  return e_step(x, gamma, resp, 1);
}

EmResult em_fit(const Eigen::Ref<const MatrixXd>& x, Index k, std::uint64_t seed,
                const EmOptions& opt) {
  const Index n = x.rows(), d = x.cols();
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (n < k) throw InsufficientData("EM needs at least k samples");
  CounterRng rng(seed, 0x656d);

  // k distinct sample rows.
  std::vector<Index> chosen;
  MatrixXd atoms(d, k);
  for (int attempt = 0; static_cast<Index>(chosen.size()) < k; ++attempt) {
    const auto i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    bool dup = std::find(chosen.begin(), chosen.end(), i) != chosen.end();
    if (!dup && attempt < 1000 * static_cast<int>(k))
      for (Index c : chosen)
        if (x.row(c) == x.row(i)) dup = true;
    if (dup) continue;
    atoms.col(static_cast<Index>(chosen.size())) = x.row(i).transpose();
    chosen.push_back(i);
  }

  EmResult res;
  DiscreteDistributiond gamma(atoms, VectorXd::Constant(k, 1.0 / static_cast<double>(k)));
  MatrixXd resp(n, k);
  double ll = e_step(x, gamma, resp, opt.threads);
  res.log_likelihood.push_back(ll);

  for (int it = 1; it <= opt.max_iter; ++it) {
    // M-step.
    VectorXd mass = resp.colwise().sum().transpose();
    MatrixXd sums = x.transpose() * resp;  // d x k
    VectorXd w(k);
    for (Index j = 0; j < k; ++j) {
      w[j] = mass[j] / static_cast<double>(n);
      if (w[j] < 1e-12) {
        const auto i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
        atoms.col(j) = x.row(i).transpose();
        w[j] = 1.0 / static_cast<double>(n);
        ++res.reseeds;
      } else {
        atoms.col(j) = sums.col(j) / mass[j];
      }
    }
    w /= w.sum();
    gamma = DiscreteDistributiond(atoms, w);

    const double prev = ll;
    ll = e_step(x, gamma, resp, opt.threads);
    res.log_likelihood.push_back(ll);
    res.iterations = it;
    if (std::abs(ll - prev) < opt.rel_tol * std::abs(prev)) {
      res.converged = true;
      break;
    }
  }
  res.mixing = gamma;
  return res;
}

}  // namespace gmix
