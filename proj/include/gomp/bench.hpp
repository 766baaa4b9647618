// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gomp/array_model.hpp"
#include "gomp/estimator.hpp"
#include "gomp/projection_design.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gomp {

enum class ProjectionKind
{
  designed,   // shrunk-error gradient descent, unit norms inside the objective
  dft,        // strided DFT rows
  random,     // i.i.d. uniform phases
  gd_prior_a, // shrunk error, normalization applied after each update
  gd_prior_b, // exact error (no shrinking), constant-modulus extension
};

std::string to_string(ProjectionKind k);
ProjectionKind projection_kind_from_string(const std::string& s);

struct SweepConfig
{
  int N = 16;
  int M = 64;
  int P = 64;
  int K = 5;
  int L = 16;
  std::vector<double> snr_grid_db{0.0, 5.0, 10.0, 15.0, 20.0};
  int trials = 200;
  std::uint64_t seed = 0;
  std::vector<ProjectionKind> projection_kinds{ProjectionKind::designed};
  std::optional<double> nu_max;
  double min_separation_cells = 2.0;
  double spacing_ratio = 0.5;
  std::vector<int> P_list{64, 128}; // coherence experiment only
  bool include_timing = false;      // adds a runtime column to sweep CSVs
  GompConfig gomp;
  DesignConfig design;

  /// Throws std::invalid_argument naming the violated constraint, e.g.
  /// "K <= N".
  void validate() const;

  /// Explicit nu_max, else 2*pi*(N-1)/M.
  double sweep_nu_max() const;
  /// Explicit nu_max, else 2*pi.
  double coherence_nu_max() const;
  double min_separation() const { return min_separation_cells * sweep_nu_max() / P; }
};

struct ProjectionOutcome
{
  ProjectionMatrix phi;
  std::optional<DesignTrace> trace; // only for the gradient-descent kinds
};

/// Builds the projection for `kind` on `dict`; seeds derive from cfg.seed.
ProjectionOutcome make_projection(ProjectionKind kind, const Dictionary& dict, const SweepConfig& cfg);

// ---------------------------------------------------------------------------
// Metrics and scenes

/// Sum of squared (2*pi-wrapped) frequency errors under the minimum-cost
/// one-to-one pairing of truth and estimate.
double mse_frequencies(const RVector& truth, const RVector& est);

/// K frequencies uniform on [0, nu_max] with pairwise (wrapped) gaps of at
/// least cfg.min_separation(), and unit-variance complex Gaussian waveforms.
SourceScene draw_scene(const SweepConfig& cfg, std::uint64_t trial_seed);

// ---------------------------------------------------------------------------
// Experiments

struct CoherenceRow
{
  std::string method;
  int P = 0;
  int iter = 0;
  double mu_max = 0.0;
};

struct CoherenceResult
{
  std::vector<CoherenceRow> rows;

  /// Last-iteration coherence of `method` at grid size P.
  double final_mu(const std::string& method, int P) const;
};

/// Coherence versus iteration for each projection kind and each P in
/// cfg.P_list. Gradient methods report the running best; baselines repeat
/// their single value for every iteration.
CoherenceResult run_coherence_experiment(const SweepConfig& cfg);

struct SweepRow
{
  std::string method;
  double snr_db = 0.0;
  double mse_ongrid = 0.0;
  double mse_refined = 0.0;
  double mean_runtime_s = 0.0;
  int trials = 0;        // successful trials
  int failed_trials = 0; // estimator failures, excluded from the means
};

struct SweepResult
{
  std::vector<SweepRow> rows;
  bool include_timing = false;

  const SweepRow* find(const std::string& method, double snr_db) const;
};

/// MSE of the on-grid initialization and of the refined estimate versus SNR.
SweepResult run_mse_sweep(const SweepConfig& cfg);

/// Header plus rows ordered by method name, then ascending SNR.
void emit_csv(const SweepResult& result, const std::filesystem::path& path);
void emit_csv(const CoherenceResult& result, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Configuration files

/// Reads a flat JSON object into a SweepConfig. Unknown keys and type errors
/// raise std::invalid_argument naming the key.
SweepConfig sweep_config_from_json_text(const std::string& text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

} // namespace gomp
