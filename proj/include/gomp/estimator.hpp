// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gomp/array_model.hpp"
#include "gomp/common.hpp"
#include "gomp/projection_design.hpp"

#include <vector>

namespace gomp {

struct GompConfig
{
  int i_max = 10; // inner (per-source) iterations
  int j_max = 5;  // outer sweeps over all sources

  void validate() const;
};

struct OmpResult
{
  IVector indices; // grid indices in selection order
  CMatrix X0;      // K x L least-squares coefficients, rows follow `indices`
};

struct SingleRefinement
{
  double nu = 0.0;
  CVector x;
  std::vector<double> history; // accepted residuals, starting with the initial one
};

struct EstimationResult
{
  RVector nu_hat;
  CMatrix X_hat; // K x L
  std::vector<double> residual_history;
  IVector initial_grid_indices;
  RVector nu_initial;
};

/// Simultaneous OMP over the columns of the sensing matrix. Each round picks
/// the column with the largest ||psi_p^H R|| / ||psi_p|| and re-solves least
/// squares on the whole selected set.
OmpResult omp(const CMatrix& Y, const SensingMatrix& psi, int K);

/// Least-squares waveform for a single source at nu: x = ((Phi a)^+ Y)^T.
CVector ls_signal(const CMatrix& Y, const ProjectionMatrix& phi, double nu);

/// First-order sampling-error correction around nu_ring for a fixed waveform.
double delta_step(const CMatrix& Y, const ProjectionMatrix& phi, double nu_ring, const CVector& x);

/// ||Y - Phi a(nu) x^T||_F^2
double residual_cost(const CMatrix& Y, const ProjectionMatrix& phi, double nu, const CVector& x);

/// Single-source refinement with the update acceptance rule: a step that
/// raises the residual is discarded and the loop ends.
SingleRefinement refine_single(const CMatrix& Y,
                               const ProjectionMatrix& phi,
                               double nu0,
                               const CVector& x0,
                               const GompConfig& cfg);

/// Sequential refinement of all K sources over cfg.j_max outer passes. Source
/// k sees Y minus the current-pass estimates of sources < k and the previous
/// pass estimates of sources > k.
EstimationResult refine_multi(const CMatrix& Y,
                              const ProjectionMatrix& phi,
                              const RVector& nu0,
                              const CMatrix& X0,
                              const GompConfig& cfg);

/// OMP on the dictionary grid followed by refine_multi.
EstimationResult estimate(const CMatrix& Y,
                          const ProjectionMatrix& phi,
                          const Dictionary& dict,
                          int K,
                          const GompConfig& cfg);

} // namespace gomp
