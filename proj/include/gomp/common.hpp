// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gomp {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using IVector = Eigen::VectorXi;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Columns whose norm is below this fraction of the largest column norm are
// treated as zero.
inline constexpr double kZeroColumnTol = 1e-10;

// Relative rank tolerance for pseudoinverses.
inline constexpr double kRankTol = 1e-12;

/// Raised when a least-squares system is rank deficient or otherwise
/// numerically unusable.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Raised by OMP when the measurement carries no energy to select from.
class EmptySelectionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail_arg(const std::string& what)
{
  throw std::invalid_argument(what);
}

/// Wraps an angle difference into (-pi, pi].
inline double wrap_phase(double d)
{
  d = std::remainder(d, kTwoPi);
  if (d <= -kPi)
    d += kTwoPi;
  return d;
}

} // namespace gomp
