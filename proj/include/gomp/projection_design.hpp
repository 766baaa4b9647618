// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gomp/array_model.hpp"
#include "gomp/common.hpp"
#include "gomp/projection_matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gomp {

/// Psi = Phi * A_ring together with the grid it was built on.
struct SensingMatrix
{
  CMatrix psi;          // N x P
  CMatrix phi;          // N x M (constant modulus)
  RVector grid;         // P grid frequencies
  RVector column_norms; // ||psi_p||

  Eigen::Index rows() const { return psi.rows(); }
  Eigen::Index cols() const { return psi.cols(); }
};

SensingMatrix make_sensing_matrix(const ProjectionMatrix& phi, const Dictionary& dict);

// ---------------------------------------------------------------------------
// Coherence diagnostics

/// Largest normalized |psi_i^H psi_j| over distinct column pairs.
double mutual_coherence(const CMatrix& psi);

/// Same as mutual_coherence, but a sensing matrix with a (numerically) zero
/// column reports 1: such a column cannot be told apart from any other.
double coherence_or_one(const CMatrix& psi);

/// sqrt((P - N) / (N (P - 1))), the lower bound on mutual coherence of an
/// N x P frame.
double welch_bound(int N, int P);

/// Diagonal of D = diag(1/||q_p||).
RVector column_normalizer(const CMatrix& Q);

/// E = D Q^H Q D - I for D given by its diagonal.
CMatrix gram_error(const CMatrix& Q, const RVector& d);

/// Entry-wise complex soft threshold at alpha*beta.
CMatrix shrink_error(const CMatrix& E, double alpha, double beta);

/// eta(Phi) = ||D Q^H Q D - I||_F^2 with Q = Phi A_ring.
double objective_eta(const CMatrix& phi, const Dictionary& dict);

/// ||shrink(E)||_F^2 at threshold alpha*beta. This is the quantity whose
/// gradient gradient_eta returns when it is fed the shrunk error matrix.
double shrunk_energy(const CMatrix& phi, const Dictionary& dict, double threshold);

/// 4 Q D E D A^H - 2 Phi A R A^H with R = Re diag(2 E D Q^H Q D^3), where E
/// is replaced by `e_used`. With the exact error this is the gradient of eta
/// in the sense d(eta) = Re tr(G^H dPhi).
CMatrix gradient_eta(const CMatrix& phi, const Dictionary& dict, const CMatrix& e_used);

/// First term only (4 Q D E D A^H): the update used when the unit-norm
/// normalization is applied after each step rather than inside eta.
CMatrix gradient_renormalized(const CMatrix& phi, const Dictionary& dict, const CMatrix& e_used);

/// Entry-wise z / |z|; zero maps to 1.
CMatrix cm_project(const CMatrix& z);

// ---------------------------------------------------------------------------
// Projection design

/// How the error matrix enters the update.
enum class DesignRule
{
  shrink,              // shrunk error, unit norms embedded in eta (proposed)
  exact,               // exact error, unit norms embedded (no shrinking)
  renormalized_shrink, // shrunk error, D held fixed in the gradient
};

enum class InitKind
{
  svd_with_fallback,
  svd,
  random,
  dft,
};

struct DesignConfig
{
  int t_max = 200;
  double step_size = 0.05;
  double alpha = 1.5;
  std::uint64_t seed = 0;
  DesignRule rule = DesignRule::shrink;
  InitKind init = InitKind::svd_with_fallback;
  int max_halvings = 20;
  std::vector<double> alpha_candidates{1.0, 1.5, 2.0, 3.0, 5.0};

  void validate() const;
};

struct DesignTrace
{
  std::vector<double> coherence_per_iter;      // mu_max of every iterate
  std::vector<double> best_coherence_per_iter; // running minimum
  std::vector<double> objective_per_iter;      // eta of every iterate
  std::vector<double> step_per_iter;           // accepted step (0 for t = 0)
  ProjectionMatrix final_phi;                  // lowest-coherence iterate
  int best_iter = 0;
  double alpha = 0.0;
};

ProjectionMatrix dft_projection(int N, int M);
ProjectionMatrix random_cm_projection(int N, int M, std::uint64_t seed);

/// Dictionary-aware start: constant-modulus projection of the N principal
/// left singular vectors of A_ring.
ProjectionMatrix svd_projection(const Dictionary& dict, int N);

ProjectionMatrix initial_projection(const Dictionary& dict, int N, const DesignConfig& cfg);

/// Projected gradient descent on the constant-modulus set. Returns the
/// best-coherence iterate.
DesignTrace design(const Dictionary& dict, const DesignConfig& cfg, const ProjectionMatrix& phi0);

/// Runs design once per cfg.alpha_candidates entry and keeps the trace with
/// the lowest final coherence. Ties go to the earlier candidate.
DesignTrace design_alpha_sweep(const Dictionary& dict,
                               const DesignConfig& cfg,
                               const ProjectionMatrix& phi0);

/// CSV with header `iter,eta,mu_max`.
void write_design_csv(const DesignTrace& trace, const std::filesystem::path& path);

std::string to_string(DesignRule r);
std::string to_string(InitKind k);
DesignRule design_rule_from_string(const std::string& s);
InitKind init_kind_from_string(const std::string& s);

} // namespace gomp
