// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gomp/common.hpp"
#include "gomp/projection_matrix.hpp"

#include <cstdint>
#include <optional>

namespace gomp {

struct UlaConfig
{
  int M = 0;                   // number of sensors
  double spacing_ratio = 0.5;  // d / lambda

  void validate() const;
};

/// Spatial frequency 2*pi*(d/lambda)*sin(theta) for an angle in radians.
double spatial_frequency(double theta_rad, double spacing_ratio = 0.5);

struct SourceScene
{
  RVector nu;  // K spatial frequencies (rad)
  CMatrix X;   // K x L waveforms

  Eigen::Index K() const { return nu.size(); }
  Eigen::Index L() const { return X.cols(); }
  void validate() const;
};

/// Uniform frequency grid and the matching steering-vector matrix.
class Dictionary
{
public:
  Dictionary(RVector grid, CMatrix atoms, double nu_max);

  const RVector& grid() const { return grid_; }
  const CMatrix& atoms() const { return atoms_; }
  double nu_max() const { return nu_max_; }
  double spacing() const { return nu_max_ / static_cast<double>(grid_.size()); }
  Eigen::Index size() const { return grid_.size(); }
  Eigen::Index sensors() const { return atoms_.rows(); }

private:
  RVector grid_;
  CMatrix atoms_;
  double nu_max_;
};

struct MeasurementSet
{
  CMatrix Y;                       // N x L
  double snr_db = 0.0;             // +inf for noiseless
  std::optional<SourceScene> truth;
  std::uint64_t noise_seed = 0;
};

/// a(nu) = [1, e^{j nu}, ..., e^{j (M-1) nu}]^T
CVector steering_vector(double nu, int M);

/// Derivative of steering_vector with respect to nu: j * diag(0..M-1) * a(nu).
CVector steering_gradient(double nu, int M);

/// M x K matrix of steering vectors.
CMatrix steering_matrix(const RVector& nu, int M);

/// Grid nu_p = nu_max * p / P for p = 0..P-1, with one steering column per
/// grid point.
Dictionary build_dictionary(int P, double nu_max, int M);

/// Noise amplitude sigma with signal_power / (sigma^2 * noise_unit_power)
/// equal to the requested SNR. Infinite SNR gives zero.
double noise_scale_for_snr(double signal_power, double snr_db, double noise_unit_power);

/// Y = Phi A(nu) X + Phi Nbar, where Nbar is white sensor noise scaled so the
/// realized signal energy over the expected noise energy hits snr_db.
MeasurementSet synthesize_measurements(const SourceScene& scene,
                                       const ProjectionMatrix& phi,
                                       const UlaConfig& ula,
                                       double snr_db,
                                       std::uint64_t seed);

} // namespace gomp
