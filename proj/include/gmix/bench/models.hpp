#pragma once

// Mixing distributions of the simulation study.

#include "gmix/core.hpp"
#include "gmix/distribution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gmix::bench {

struct ModelInstance {
  std::string descriptor;  // short text, no commas
  DiscreteDistributiond mixing;
  Index components = 0;  // default fit order
};

/// Registered ids: k2a k2b k2c k2d k3a k3b k3c k02_k3 dirichlet custom.
const std::vector<std::string>& model_ids();
bool is_known_model(const std::string& id);

/// Draws an instance in dimension d. Random parts (direction of mu, the
/// dirichlet atoms and weights) come from `seed`. custom reads model_file.
ModelInstance make_model(const std::string& id, Index d, std::uint64_t seed,
                         const std::string& model_file = {});

/// Uniform point on the sphere of the given radius in R^d.
VectorXd uniform_on_sphere(Index d, double radius, std::uint64_t seed, std::uint64_t stream);

}  // namespace gmix::bench
