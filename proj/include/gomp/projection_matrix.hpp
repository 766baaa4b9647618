// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gomp/common.hpp"

namespace gomp {

/// N x M analog combiner whose entries all have unit modulus.
class ProjectionMatrix
{
public:
  static constexpr double kModulusTol = 1e-9;

  explicit ProjectionMatrix(CMatrix phi)
    : phi_(std::move(phi))
  {
    if (phi_.size() == 0)
      fail_arg("projection matrix must be non-empty");
    for (Eigen::Index i = 0; i < phi_.size(); ++i) {
      const double mag = std::abs(phi_.data()[i]);
      if (!(std::abs(mag - 1.0) <= kModulusTol))
        fail_arg("projection matrix entry violates the constant-modulus "
                 "constraint (|phi| = " +
                 std::to_string(mag) + ")");
    }
  }

  const CMatrix& matrix() const { return phi_; }
  Eigen::Index rows() const { return phi_.rows(); }
  Eigen::Index cols() const { return phi_.cols(); }

private:
  CMatrix phi_;
};

} // namespace gomp
