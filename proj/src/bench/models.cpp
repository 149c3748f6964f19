#include "gmix/bench/models.hpp"

#include "gmix/bench/config.hpp"
#include "gmix/bench/io.hpp"
#include "gmix/rng.hpp"

#include <algorithm>
#include <cstdio>

namespace gmix::bench {

const std::vector<std::string>& model_ids() {
  static const std::vector<std::string> ids{"k2a", "k2b", "k2c",    "k2d",       "k3a",
                                            "k3b", "k3c", "k02_k3", "dirichlet", "custom"};
  return ids;
}

bool is_known_model(const std::string& id) {
  const auto& ids = model_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

VectorXd uniform_on_sphere(Index d, double radius, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  VectorXd v(d);
  do {
    for (Index i = 0; i < d; ++i) v[i] = rng.normal();
  } while (v.norm() == 0.0);
  return radius * v / v.norm();
}

namespace {

ModelInstance two_point(const std::string& id, Index d, double norm, double w_plus,
                        std::uint64_t seed) {
  const VectorXd mu = norm > 0 ? uniform_on_sphere(d, norm, seed, 1) : VectorXd::Zero(d);
  MatrixXd atoms(d, 2);
  atoms.col(0) = mu;
  atoms.col(1) = -mu;
  VectorXd w(2);
  w << w_plus, 1.0 - w_plus;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s:norm=%g:w=%g/%g", id.c_str(), norm, w_plus, 1.0 - w_plus);
  return {buf, DiscreteDistributiond(std::move(atoms), std::move(w)), 2};
}

ModelInstance three_point(const std::string& id, Index d, double norm, std::uint64_t seed) {
  const VectorXd mu = norm > 0 ? uniform_on_sphere(d, norm, seed, 1) : VectorXd::Zero(d);
  MatrixXd atoms(d, 3);
  atoms.col(0) = mu;
  atoms.col(1).setZero();
  atoms.col(2) = -mu;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s:norm=%g:w=1/3", id.c_str(), norm);
  return {buf, DiscreteDistributiond(std::move(atoms), VectorXd::Constant(3, 1.0 / 3.0)), 3};
}

}  // namespace

ModelInstance make_model(const std::string& id, Index d, std::uint64_t seed,
                         const std::string& model_file) {
  if (d < 1) throw ConfigError("model dimension must be >= 1");
  if (id == "k2a") return two_point(id, d, 0.0, 0.5, seed);
  if (id == "k2b") return two_point(id, d, 1.0, 0.5, seed);
  if (id == "k2c") return two_point(id, d, 2.0, 0.5, seed);
  if (id == "k2d") return two_point(id, d, 2.0, 0.25, seed);
  if (id == "k3a") return three_point(id, d, 0.0, seed);
  if (id == "k3b") return three_point(id, d, 1.0, seed);
  if (id == "k3c") return three_point(id, d, 2.0, seed);
  if (id == "k02_k3") {
    auto m = two_point(id, d, 2.0, 0.5, seed);
    m.components = 3;
    return m;
  }
  if (id == "dirichlet") {
    MatrixXd atoms(d, 3);
    for (Index j = 0; j < 3; ++j)
      atoms.col(j) = uniform_on_sphere(d, 1.0, seed, 1 + static_cast<std::uint64_t>(j));
    CounterRng rng(seed, 7);
    VectorXd w(3);
    for (Index j = 0; j < 3; ++j) w[j] = rng.exponential();
    w /= w.sum();
    return {"dirichlet:sphere=1:w~Dir(1/1/1)", DiscreteDistributiond(std::move(atoms), std::move(w)),
            3};
  }
  if (id == "custom") {
    if (model_file.empty()) throw ConfigError("custom model needs model_file");
    auto g = read_distribution(model_file);
    if (g.dim() != d)
      throw ConfigError("model file dimension " + std::to_string(g.dim()) + " != d = " +
                        std::to_string(d));
    std::string name = model_file.substr(model_file.find_last_of('/') + 1);
    std::replace(name.begin(), name.end(), ',', '_');
    const Index k = g.size();
    return {"custom:" + name, std::move(g), k};
  }
  throw ConfigError("unknown model id '" + id + "'");
}

}  // namespace gmix::bench
