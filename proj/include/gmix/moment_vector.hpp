#pragma once

#include "gmix/core.hpp"

#include <cmath>
#include <utility>

namespace gmix {

/// First r power moments (m_1, ..., m_r) of a measure on [-R, R].
/// m_0 = 1 is implicit and never stored.
template <typename Scalar>
class MomentVector {
 public:
  MomentVector() = default;
  MomentVector(Vector<Scalar> values, Scalar radius)
      : values_(std::move(values)), radius_(radius) {
    if (!(radius_ > Scalar(0))) throw InvalidArgument("moment radius must be positive");
    for (Index j = 0; j < values_.size(); ++j)
      if (!std::isfinite(static_cast<double>(values_[j])))
        throw InvalidArgument("moment vector has a non-finite entry");
  }

  Index order() const noexcept { return values_.size(); }
  Scalar radius() const noexcept { return radius_; }
  const Vector<Scalar>& values() const noexcept { return values_; }

  /// 1-based access: m(j) is the j-th moment, m(0) == 1.
  Scalar operator()(Index j) const { return j == 0 ? Scalar(1) : values_[j - 1]; }

  /// True when |m_j| <= R^j (1 + rel) for every stored j.
  bool within_power_bounds(Scalar rel = Scalar(1e-9)) const {
    Scalar p = Scalar(1);
    for (Index j = 0; j < values_.size(); ++j) {
      p *= radius_;
      if (std::abs(values_[j]) > p * (Scalar(1) + rel)) return false;
    }
    return true;
  }

 private:
  Vector<Scalar> values_;
  Scalar radius_ = Scalar(1);
};

using MomentVectord = MomentVector<double>;

}  // namespace gmix
