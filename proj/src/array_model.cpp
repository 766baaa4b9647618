// SPDX-License-Identifier: Apache-2.0

#include "gomp/array_model.hpp"
#include "gomp/random.hpp"

#include <cmath>
#include <limits>

namespace gomp {

void UlaConfig::validate() const
{
  if (M < 2)
    fail_arg("UlaConfig: M >= 2 required");
  if (!(spacing_ratio > 0.0))
    fail_arg("UlaConfig: spacing_ratio > 0 required");
}

double spatial_frequency(double theta_rad, double spacing_ratio)
{
  return kTwoPi * spacing_ratio * std::sin(theta_rad);
}

void SourceScene::validate() const
{
  if (nu.size() < 1)
    fail_arg("SourceScene: K >= 1 required");
  if (X.rows() != nu.size())
    fail_arg("SourceScene: X must have K rows");
  if (X.cols() < 1)
    fail_arg("SourceScene: L >= 1 required");
  for (Eigen::Index k = 0; k < nu.size(); ++k) {
    if (!std::isfinite(nu(k)))
      fail_arg("SourceScene: non-finite frequency");
    if (X.row(k).squaredNorm() == 0.0)
      fail_arg("SourceScene: all-zero waveform row");
  }
}

Dictionary::Dictionary(RVector grid, CMatrix atoms, double nu_max)
  : grid_(std::move(grid))
  , atoms_(std::move(atoms))
  , nu_max_(nu_max)
{
  if (atoms_.cols() != grid_.size())
    fail_arg("Dictionary: one atom per grid point required");
  if (grid_.size() < atoms_.rows())
    fail_arg("Dictionary: P >= M required");
}

CVector steering_vector(double nu, int M)
{
  if (M < 1)
    fail_arg("steering_vector: M >= 1 required");
  CVector a(M);
  for (int m = 0; m < M; ++m)
    a(m) = std::polar(1.0, m * nu);
  return a;
}

CVector steering_gradient(double nu, int M)
{
  CVector g = steering_vector(nu, M);
  for (int m = 0; m < M; ++m)
    g(m) *= cplx(0.0, static_cast<double>(m));
  return g;
}

CMatrix steering_matrix(const RVector& nu, int M)
{
  CMatrix A(M, nu.size());
  for (Eigen::Index k = 0; k < nu.size(); ++k)
    A.col(k) = steering_vector(nu(k), M);
  return A;
}

Dictionary build_dictionary(int P, double nu_max, int M)
{
  if (P < 1)
    fail_arg("build_dictionary: P >= 1 required");
  if (!(nu_max > 0.0))
    fail_arg("build_dictionary: nu_max > 0 required");
  RVector grid(P);
  for (int p = 0; p < P; ++p)
    grid(p) = nu_max * static_cast<double>(p) / static_cast<double>(P);
  return Dictionary(grid, steering_matrix(grid, M), nu_max);
}

double noise_scale_for_snr(double signal_power, double snr_db, double noise_unit_power)
{
  if (!(signal_power >= 0.0))
    fail_arg("noise_scale_for_snr: signal_power >= 0 required");
  if (!(noise_unit_power > 0.0))
    fail_arg("noise_scale_for_snr: noise_unit_power > 0 required");
  if (std::isinf(snr_db) && snr_db > 0)
    return 0.0;
  const double snr_lin = std::pow(10.0, snr_db / 10.0);
  return std::sqrt(signal_power / (snr_lin * noise_unit_power));
}

MeasurementSet synthesize_measurements(const SourceScene& scene,
                                       const ProjectionMatrix& phi,
                                       const UlaConfig& ula,
                                       double snr_db,
                                       std::uint64_t seed)
{
  ula.validate();
  scene.validate();
  if (phi.cols() != ula.M)
    fail_arg("synthesize_measurements: projection has " + std::to_string(phi.cols()) +
             " columns but the array has " + std::to_string(ula.M) + " sensors");

  const CMatrix& P = phi.matrix();
  CMatrix Y = P * (steering_matrix(scene.nu, ula.M) * scene.X);

  MeasurementSet out;
  out.snr_db = snr_db;
  out.noise_seed = seed;
  out.truth = scene;

  if (!(std::isinf(snr_db) && snr_db > 0)) {
    // E||Phi Nbar||_F^2 = L * ||Phi||_F^2 for unit-variance sensor noise.
    const double unit = static_cast<double>(scene.L()) * P.squaredNorm();
    const double sigma = noise_scale_for_snr(Y.squaredNorm(), snr_db, unit);
    Rng rng(seed);
    const CMatrix sensor_noise = complex_gaussian(ula.M, scene.L(), rng);
    Y += sigma * (P * sensor_noise);
  }
  out.Y = std::move(Y);
  return out;
}

} // namespace gomp
