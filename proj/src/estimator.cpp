// SPDX-License-Identifier: Apache-2.0

#include "gomp/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace gomp {

void GompConfig::validate() const
{
  if (i_max < 1)
    fail_arg("i_max >= 1 required");
  if (j_max < 1)
    fail_arg("j_max >= 1 required");
}

namespace {

CVector project_steering(const ProjectionMatrix& phi, double nu)
{
  return phi.matrix() * steering_vector(nu, static_cast<int>(phi.cols()));
}

void check_measurement(const CMatrix& Y, const ProjectionMatrix& phi, const char* who)
{
  if (Y.rows() != phi.rows())
    fail_arg(std::string(who) + ": Y has " + std::to_string(Y.rows()) +
             " rows but the projection has " + std::to_string(phi.rows()));
}

} // namespace

OmpResult omp(const CMatrix& Y, const SensingMatrix& psi, int K)
{
  const Eigen::Index N = psi.rows();
  const Eigen::Index P = psi.cols();
  if (K < 1)
    fail_arg("omp: K >= 1 required");
  if (K > N)
    fail_arg("omp: K <= N required");
  if (N > P)
    fail_arg("omp: N <= P required");
  if (Y.rows() != N)
    fail_arg("omp: Y must have N rows");
  if (Y.squaredNorm() == 0.0)
    throw EmptySelectionError("omp: measurement is identically zero");

  const double norm_floor = kZeroColumnTol * psi.column_norms.maxCoeff();
  std::vector<bool> taken(P, false);
  std::vector<Eigen::Index> support;
  support.reserve(K);
  CMatrix residual = Y;
  CMatrix coeffs;

  for (int round = 0; round < K; ++round) {
    const CMatrix corr = psi.psi.adjoint() * residual; // P x L
    Eigen::Index best = -1;
    double best_score = -1.0;
    for (Eigen::Index p = 0; p < P; ++p) {
      if (taken[p] || !(psi.column_norms(p) > norm_floor))
        continue;
      const double score = corr.row(p).norm() / psi.column_norms(p);
      if (score > best_score) {
        best_score = score;
        best = p;
      }
    }
    if (best < 0)
      throw EmptySelectionError("omp: no selectable column left");
    taken[best] = true;
    support.push_back(best);

    CMatrix sub(N, static_cast<Eigen::Index>(support.size()));
    for (std::size_t s = 0; s < support.size(); ++s)
      sub.col(static_cast<Eigen::Index>(s)) = psi.psi.col(support[s]);
    Eigen::ColPivHouseholderQR<CMatrix> qr(sub);
    qr.setThreshold(kRankTol);
    if (qr.rank() < sub.cols())
      throw NumericalError("omp: selected columns are rank deficient at round " +
                           std::to_string(round + 1));
    coeffs = qr.solve(Y);
    residual = Y - sub * coeffs;
  }

  OmpResult out;
  out.indices.resize(K);
  for (int k = 0; k < K; ++k)
    out.indices(k) = static_cast<int>(support[k]);
  out.X0 = std::move(coeffs);
  return out;
}

CVector ls_signal(const CMatrix& Y, const ProjectionMatrix& phi, double nu)
{
  check_measurement(Y, phi, "ls_signal");
  const CVector b = project_steering(phi, nu);
  const double nb = b.squaredNorm();
  if (!(nb > 0.0))
    fail_arg("ls_signal: projected steering vector is zero");
  return Y.transpose() * b.conjugate() / nb;
}

double delta_step(const CMatrix& Y, const ProjectionMatrix& phi, double nu_ring, const CVector& x)
{
  check_measurement(Y, phi, "delta_step");
  if (x.size() != Y.cols())
    fail_arg("delta_step: x must have L entries");
  const int M = static_cast<int>(phi.cols());
  const CVector pa = phi.matrix() * steering_vector(nu_ring, M);
  const CVector pg = phi.matrix() * steering_gradient(nu_ring, M);
  // v = x (Khatri-Rao) Phi g;  v^H r = (Phi g)^H (Y - Phi a x^T) conj(x)
  const double den = x.squaredNorm() * pg.squaredNorm();
  if (!(den > 0.0))
    fail_arg("delta_step: Khatri-Rao column is zero");
  const CMatrix r = Y - pa * x.transpose();
  const cplx num = pg.dot(r * x.conjugate());
  return num.real() / den;
}

double residual_cost(const CMatrix& Y, const ProjectionMatrix& phi, double nu, const CVector& x)
{
  check_measurement(Y, phi, "residual_cost");
  if (x.size() != Y.cols())
    fail_arg("residual_cost: x must have L entries");
  return (Y - project_steering(phi, nu) * x.transpose()).squaredNorm();
}

SingleRefinement refine_single(const CMatrix& Y,
                               const ProjectionMatrix& phi,
                               double nu0,
                               const CVector& x0,
                               const GompConfig& cfg)
{
  cfg.validate();
  SingleRefinement out{.nu = nu0, .x = x0, .history = {}};
  double eps = residual_cost(Y, phi, nu0, x0);
  out.history.push_back(eps);

  for (int i = 1; i <= cfg.i_max; ++i) {
    const double delta = delta_step(Y, phi, out.nu, out.x);
    const double nu = out.nu + delta;
    CVector x = ls_signal(Y, phi, nu);
    const double e = residual_cost(Y, phi, nu, x);
    if (e > eps)
      break;
    out.nu = nu;
    out.x = std::move(x);
    eps = e;
    out.history.push_back(eps);
  }
  return out;
}

EstimationResult refine_multi(const CMatrix& Y,
                              const ProjectionMatrix& phi,
                              const RVector& nu0,
                              const CMatrix& X0,
                              const GompConfig& cfg)
{
  cfg.validate();
  const Eigen::Index K = nu0.size();
  if (K < 1)
    fail_arg("refine_multi: K >= 1 required");
  if (X0.rows() != K || X0.cols() != Y.cols())
    fail_arg("refine_multi: X0 must be K x L");
  check_measurement(Y, phi, "refine_multi");

  RVector nu_prev = nu0;
  CMatrix X_prev = X0;
  EstimationResult out;

  for (int j = 1; j <= cfg.j_max; ++j) {
    RVector nu_cur = RVector::Zero(K);
    CMatrix X_cur = CMatrix::Zero(K, Y.cols());
    for (Eigen::Index k = 0; k < K; ++k) {
      CMatrix Yk = Y;
      for (Eigen::Index q = 0; q < k; ++q)
        Yk -= project_steering(phi, nu_cur(q)) * X_cur.row(q);
      for (Eigen::Index q = k + 1; q < K; ++q)
        Yk -= project_steering(phi, nu_prev(q)) * X_prev.row(q);

      SingleRefinement r = refine_single(Yk, phi, nu_prev(k), X_prev.row(k).transpose(), cfg);
      nu_cur(k) = r.nu;
      X_cur.row(k) = r.x.transpose();
      out.residual_history.insert(out.residual_history.end(), r.history.begin(), r.history.end());
    }
    nu_prev = std::move(nu_cur);
    X_prev = std::move(X_cur);
  }
  out.nu_hat = std::move(nu_prev);
  out.X_hat = std::move(X_prev);
  out.nu_initial = nu0;
  return out;
}

EstimationResult estimate(const CMatrix& Y,
                          const ProjectionMatrix& phi,
                          const Dictionary& dict,
                          int K,
                          const GompConfig& cfg)
{
  if (K > phi.rows())
    fail_arg("estimate: K <= N required");
  const SensingMatrix psi = make_sensing_matrix(phi, dict);
  const OmpResult init = omp(Y, psi, K);
  RVector nu0(K);
  for (int k = 0; k < K; ++k)
    nu0(k) = dict.grid()(init.indices(k));
  EstimationResult out = refine_multi(Y, phi, nu0, init.X0, cfg);
  out.initial_grid_indices = init.indices;
  return out;
}

} // namespace gomp
