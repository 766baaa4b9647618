// SPDX-License-Identifier: Apache-2.0

#include "gomp/projection_design.hpp"
#include "gomp/csv.hpp"
#include "gomp/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace gomp {

namespace {

// Column norms, rejecting (numerically) zero columns.
RVector checked_column_norms(const CMatrix& Q, const char* who)
{
  RVector norms = Q.colwise().norm().transpose();
  const double scale = norms.size() ? norms.maxCoeff() : 0.0;
  for (Eigen::Index p = 0; p < norms.size(); ++p)
    if (!(norms(p) > kZeroColumnTol * scale) || scale == 0.0)
      fail_arg(std::string(who) + ": column " + std::to_string(p) + " is zero");
  return norms;
}

// Everything the design loop needs about one iterate.
struct Evaluation
{
  CMatrix Q;     // Phi * A_ring
  RVector d;     // 1 / ||q_p||
  CMatrix gram;  // D Q^H Q D
  CMatrix E;     // gram - I
  double eta = 0.0;
};

Evaluation evaluate(const CMatrix& phi, const Dictionary& dict)
{
  Evaluation ev;
  ev.Q = phi * dict.atoms();
  ev.d = checked_column_norms(ev.Q, "objective").cwiseInverse();
  const CMatrix psi = ev.Q * ev.d.asDiagonal();
  ev.gram = psi.adjoint() * psi;
  ev.E = ev.gram;
  ev.E.diagonal().array() -= 1.0;
  ev.eta = ev.E.squaredNorm();
  return ev;
}

double coherence_from_gram(const CMatrix& gram)
{
  double mu = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      mu = std::max(mu, std::abs(gram(i, j)));
  return std::min(mu, 1.0);
}

double soft_threshold_energy(const CMatrix& E, double threshold)
{
  double acc = 0.0;
  for (Eigen::Index i = 0; i < E.size(); ++i) {
    const double excess = std::abs(E.data()[i]) - threshold;
    if (excess > 0.0)
      acc += excess * excess;
  }
  return acc;
}

// Q W A^H with W = 4 D E D - 2 R (R dropped when `with_norm_term` is false).
CMatrix assemble_gradient(const CMatrix& Q,
                          const RVector& d,
                          const CMatrix& gram,
                          const CMatrix& e_used,
                          const Dictionary& dict,
                          bool with_norm_term)
{
  const Eigen::Index P = Q.cols();
  if (e_used.rows() != P || e_used.cols() != P)
    fail_arg("gradient: error matrix must be P x P");
  CMatrix W = 4.0 * (d.asDiagonal() * e_used * d.asDiagonal());
  if (with_norm_term) {
    // diag(C) with C = 2 E D Q^H Q D^3, i.e. C_pp = 2 d_p^2 [E * gram]_pp
    for (Eigen::Index p = 0; p < P; ++p) {
      const cplx ec = e_used.row(p).transpose().cwiseProduct(gram.col(p)).sum();
      W(p, p) -= 2.0 * (2.0 * d(p) * d(p) * ec.real());
    }
  }
  return (Q * W) * dict.atoms().adjoint();
}

} // namespace

SensingMatrix make_sensing_matrix(const ProjectionMatrix& phi, const Dictionary& dict)
{
  if (phi.cols() != dict.sensors())
    fail_arg("make_sensing_matrix: projection has " + std::to_string(phi.cols()) +
             " columns, dictionary has " + std::to_string(dict.sensors()) + " rows");
  SensingMatrix s;
  s.phi = phi.matrix();
  s.psi = phi.matrix() * dict.atoms();
  s.grid = dict.grid();
  s.column_norms = s.psi.colwise().norm().transpose();
  return s;
}

double mutual_coherence(const CMatrix& psi)
{
  if (psi.cols() < 2)
    fail_arg("mutual_coherence: at least two columns required");
  const RVector norms = checked_column_norms(psi, "mutual_coherence");
  const CMatrix unit = psi * norms.cwiseInverse().asDiagonal();
  return coherence_from_gram(unit.adjoint() * unit);
}

double coherence_or_one(const CMatrix& psi)
{
  try {
    return mutual_coherence(psi);
  } catch (const std::invalid_argument&) {
    return 1.0;
  }
}

double welch_bound(int N, int P)
{
  if (N < 1 || P < 2)
    fail_arg("welch_bound: N >= 1 and P >= 2 required");
  if (P < N)
    fail_arg("welch_bound: P >= N required");
  return std::sqrt(static_cast<double>(P - N) / (static_cast<double>(N) * (P - 1)));
}

RVector column_normalizer(const CMatrix& Q)
{
  return checked_column_norms(Q, "column_normalizer").cwiseInverse();
}

CMatrix gram_error(const CMatrix& Q, const RVector& d)
{
  if (d.size() != Q.cols())
    fail_arg("gram_error: D must be P x P");
  const CMatrix psi = Q * d.asDiagonal();
  CMatrix E = psi.adjoint() * psi;
  E.diagonal().array() -= 1.0;
  return E;
}

CMatrix shrink_error(const CMatrix& E, double alpha, double beta)
{
  const double threshold = alpha * beta;
  CMatrix out(E.rows(), E.cols());
  for (Eigen::Index i = 0; i < E.size(); ++i) {
    const cplx e = E.data()[i];
    const double mag = std::abs(e);
    out.data()[i] = mag < threshold ? cplx(0.0) : e / mag * (mag - threshold);
  }
  return out;
}

double objective_eta(const CMatrix& phi, const Dictionary& dict)
{
  return evaluate(phi, dict).eta;
}

double shrunk_energy(const CMatrix& phi, const Dictionary& dict, double threshold)
{
  return soft_threshold_energy(evaluate(phi, dict).E, threshold);
}

CMatrix gradient_eta(const CMatrix& phi, const Dictionary& dict, const CMatrix& e_used)
{
  const Evaluation ev = evaluate(phi, dict);
  return assemble_gradient(ev.Q, ev.d, ev.gram, e_used, dict, true);
}

CMatrix gradient_renormalized(const CMatrix& phi, const Dictionary& dict, const CMatrix& e_used)
{
  const Evaluation ev = evaluate(phi, dict);
  return assemble_gradient(ev.Q, ev.d, ev.gram, e_used, dict, false);
}

CMatrix cm_project(const CMatrix& z)
{
  CMatrix out(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const cplx v = z.data()[i];
    const double mag = std::abs(v);
    out.data()[i] = mag == 0.0 ? cplx(1.0, 0.0) : v / mag;
  }
  return out;
}

// ---------------------------------------------------------------------------

void DesignConfig::validate() const
{
  if (t_max < 0)
    fail_arg("t_max >= 0 required");
  if (!(step_size > 0.0))
    fail_arg("step_size > 0 required");
  if (!(alpha >= 1.0))
    fail_arg("alpha >= 1 required");
  if (max_halvings < 0)
    fail_arg("max_halvings >= 0 required");
  for (double a : alpha_candidates)
    if (!(a >= 1.0))
      fail_arg("alpha_candidates: every alpha >= 1 required");
}

ProjectionMatrix dft_projection(int N, int M)
{
  if (N < 1 || M < 1)
    fail_arg("dft_projection: N, M >= 1 required");
  if (M % N != 0)
    fail_arg("dft_projection: M must be divisible by N");
  const int stride = M / N;
  CMatrix phi(N, M);
  for (int n = 0; n < N; ++n) {
    const long row = static_cast<long>(n) * stride;
    for (int m = 0; m < M; ++m) {
      // reduce the exponent first so the phase stays exact for large M
      const long k = (row * m) % M;
      phi(n, m) = std::polar(1.0, -kTwoPi * static_cast<double>(k) / M);
    }
  }
  return ProjectionMatrix(phi);
}

ProjectionMatrix random_cm_projection(int N, int M, std::uint64_t seed)
{
  if (N < 1 || M < 1)
    fail_arg("random_cm_projection: N, M >= 1 required");
  Rng rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  CMatrix phi(N, M);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < N; ++n)
      phi(n, m) = std::polar(1.0, phase(rng));
  return ProjectionMatrix(phi);
}

ProjectionMatrix svd_projection(const Dictionary& dict, int N)
{
  if (N < 1 || N > dict.sensors())
    fail_arg("svd_projection: 1 <= N <= M required");
  Eigen::BDCSVD<CMatrix> svd(dict.atoms(), Eigen::ComputeThinU);
  return ProjectionMatrix(cm_project(svd.matrixU().leftCols(N).adjoint()));
}

ProjectionMatrix initial_projection(const Dictionary& dict, int N, const DesignConfig& cfg)
{
  const int M = static_cast<int>(dict.sensors());
  switch (cfg.init) {
    case InitKind::svd:
      return svd_projection(dict, N);
    case InitKind::random:
      return random_cm_projection(N, M, cfg.seed);
    case InitKind::dft:
      return dft_projection(N, M);
    case InitKind::svd_with_fallback: {
      ProjectionMatrix svd = svd_projection(dict, N);
      ProjectionMatrix rnd = random_cm_projection(N, M, cfg.seed);
      const double mu_svd = coherence_or_one(svd.matrix() * dict.atoms());
      const double mu_rnd = coherence_or_one(rnd.matrix() * dict.atoms());
      return mu_svd <= mu_rnd ? svd : rnd;
    }
  }
  fail_arg("initial_projection: unknown init kind");
}

DesignTrace design(const Dictionary& dict, const DesignConfig& cfg, const ProjectionMatrix& phi0)
{
  cfg.validate();
  if (phi0.cols() != dict.sensors())
    fail_arg("design: projection columns must match dictionary rows");

  const int N = static_cast<int>(phi0.rows());
  const int P = static_cast<int>(dict.size());
  const double threshold =
    cfg.rule == DesignRule::exact ? 0.0 : cfg.alpha * welch_bound(N, P);

  DesignTrace trace{{}, {}, {}, {}, phi0, 0, cfg.alpha};
  CMatrix phi = phi0.matrix();
  Evaluation ev = evaluate(phi, dict);
  double best = coherence_from_gram(ev.gram);

  auto record = [&](double step) {
    const double mu = coherence_from_gram(ev.gram);
    trace.coherence_per_iter.push_back(mu);
    trace.objective_per_iter.push_back(ev.eta);
    trace.step_per_iter.push_back(step);
    trace.best_coherence_per_iter.push_back(std::min(mu, best));
    return mu;
  };
  record(0.0);

  for (int t = 1; t <= cfg.t_max; ++t) {
    const CMatrix e_used = threshold > 0.0 ? shrink_error(ev.E, 1.0, threshold) : ev.E;
    const CMatrix G = assemble_gradient(
      ev.Q, ev.d, ev.gram, e_used, dict, cfg.rule != DesignRule::renormalized_shrink);
    if (G.squaredNorm() == 0.0)
      break; // stationary: every error entry is below the threshold

    // backtrack on the objective the update actually descends
    const double f0 = soft_threshold_energy(ev.E, threshold);
    double step = cfg.step_size;
    CMatrix candidate = phi - step * G;
    for (int h = 0; h < cfg.max_halvings; ++h) {
      const double f = soft_threshold_energy(evaluate(candidate, dict).E, threshold);
      if (f <= f0)
        break;
      step *= 0.5;
      candidate = phi - step * G;
    }

    phi = cm_project(candidate);
    ev = evaluate(phi, dict);
    const double mu = record(step);
    if (mu < best) {
      best = mu;
      trace.best_iter = t;
      trace.final_phi = ProjectionMatrix(phi);
    }
  }
  return trace;
}

DesignTrace design_alpha_sweep(const Dictionary& dict,
                               const DesignConfig& cfg,
                               const ProjectionMatrix& phi0)
{
  if (cfg.alpha_candidates.empty() || cfg.rule == DesignRule::exact)
    return design(dict, cfg, phi0);

  std::optional<DesignTrace> best;
  for (double a : cfg.alpha_candidates) {
    DesignConfig c = cfg;
    c.alpha = a;
    DesignTrace tr = design(dict, c, phi0);
    if (!best || tr.best_coherence_per_iter.back() < best->best_coherence_per_iter.back())
      best = std::move(tr);
  }
  return std::move(*best);
}

void write_design_csv(const DesignTrace& trace, const std::filesystem::path& path)
{
  auto out = csv::open_for_write(path);
  out << "iter,eta,mu_max\n";
  for (std::size_t t = 0; t < trace.coherence_per_iter.size(); ++t)
    out << t << ',' << csv::format_number(trace.objective_per_iter[t]) << ','
        << csv::format_number(trace.coherence_per_iter[t]) << '\n';
  if (!out)
    throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string to_string(DesignRule r)
{
  switch (r) {
    case DesignRule::shrink: return "shrink";
    case DesignRule::exact: return "exact";
    case DesignRule::renormalized_shrink: return "renormalized_shrink";
  }
  return "?";
}

std::string to_string(InitKind k)
{
  switch (k) {
    case InitKind::svd_with_fallback: return "svd_with_fallback";
    case InitKind::svd: return "svd";
    case InitKind::random: return "random";
    case InitKind::dft: return "dft";
  }
  return "?";
}

DesignRule design_rule_from_string(const std::string& s)
{
  if (s == "shrink") return DesignRule::shrink;
  if (s == "exact") return DesignRule::exact;
  if (s == "renormalized_shrink") return DesignRule::renormalized_shrink;
  fail_arg("unknown design rule '" + s + "'");
}

InitKind init_kind_from_string(const std::string& s)
{
  if (s == "svd_with_fallback") return InitKind::svd_with_fallback;
  if (s == "svd") return InitKind::svd;
  if (s == "random") return InitKind::random;
  if (s == "dft") return InitKind::dft;
  fail_arg("unknown init kind '" + s + "'");
}

} // namespace gomp
