// SPDX-License-Identifier: Apache-2.0

#include "gomp/bench.hpp"
#include "gomp/csv.hpp"
#include "gomp/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

namespace gomp {

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kTagProjection = 0x50524f4aULL;
constexpr std::uint64_t kTagScene = 0x5343454eULL;
constexpr std::uint64_t kTagNoise = 0x4e4f4953ULL;

// Minimum-cost perfect assignment on a square cost matrix (Hungarian method,
// potentials form). Returns assignment[row] = col.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost)
{
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j])
          continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0)
      assignment[p[j] - 1] = j - 1;
  return assignment;
}

} // namespace

std::string to_string(ProjectionKind k)
{
  switch (k) {
    case ProjectionKind::designed: return "designed";
    case ProjectionKind::dft: return "dft";
    case ProjectionKind::random: return "random";
    case ProjectionKind::gd_prior_a: return "gd_prior_a";
    case ProjectionKind::gd_prior_b: return "gd_prior_b";
  }
  return "?";
}

ProjectionKind projection_kind_from_string(const std::string& s)
{
  if (s == "designed") return ProjectionKind::designed;
  if (s == "dft") return ProjectionKind::dft;
  if (s == "random") return ProjectionKind::random;
  if (s == "gd_prior_a") return ProjectionKind::gd_prior_a;
  if (s == "gd_prior_b") return ProjectionKind::gd_prior_b;
  fail_arg("projection_kind: unknown value '" + s + "'");
}

void SweepConfig::validate() const
{
  auto need = [](bool ok, const std::string& what) {
    if (!ok)
      fail_arg("invalid config: " + what);
  };
  need(N >= 1, "N >= 1");
  need(K >= 1, "K >= 1");
  need(L >= 1, "L >= 1");
  need(K <= N, "K <= N (K = " + std::to_string(K) + ", N = " + std::to_string(N) + ")");
  need(N <= M, "N <= M (N = " + std::to_string(N) + ", M = " + std::to_string(M) + ")");
  need(M <= P, "M <= P (M = " + std::to_string(M) + ", P = " + std::to_string(P) + ")");
  need(M >= 2, "M >= 2");
  need(trials >= 1, "trials >= 1");
  need(!projection_kinds.empty(), "projection_kind must name at least one method");
  need(!nu_max || *nu_max > 0.0, "nu_max > 0");
  need(min_separation_cells >= 0.0, "min_separation_cells >= 0");
  need(spacing_ratio > 0.0, "spacing_ratio > 0");
  for (int p : P_list)
    need(p >= M, "every P_list entry >= M");
  for (double s : snr_grid_db)
    need(!std::isnan(s), "snr_grid_db entries must be numbers");
  gomp.validate();
  design.validate();
}

double SweepConfig::sweep_nu_max() const
{
  return nu_max ? *nu_max : kTwoPi * (N - 1) / static_cast<double>(M);
}

double SweepConfig::coherence_nu_max() const
{
  return nu_max ? *nu_max : kTwoPi;
}

ProjectionOutcome make_projection(ProjectionKind kind, const Dictionary& dict, const SweepConfig& cfg)
{
  const int M = static_cast<int>(dict.sensors());
  DesignConfig dc = cfg.design;
  dc.seed = derive_seed({cfg.seed, kTagProjection});
  switch (kind) {
    case ProjectionKind::dft:
      return {dft_projection(cfg.N, M), std::nullopt};
    case ProjectionKind::random:
      return {random_cm_projection(cfg.N, M, dc.seed), std::nullopt};
    case ProjectionKind::designed:
    case ProjectionKind::gd_prior_a:
    case ProjectionKind::gd_prior_b: {
      dc.rule = kind == ProjectionKind::designed     ? DesignRule::shrink
                : kind == ProjectionKind::gd_prior_a ? DesignRule::renormalized_shrink
                                                     : DesignRule::exact;
      const ProjectionMatrix phi0 = initial_projection(dict, cfg.N, dc);
      DesignTrace tr = design_alpha_sweep(dict, dc, phi0);
      ProjectionMatrix phi = tr.final_phi;
      return {std::move(phi), std::move(tr)};
    }
  }
  fail_arg("make_projection: unknown kind");
}

double mse_frequencies(const RVector& truth, const RVector& est)
{
  if (truth.size() != est.size())
    fail_arg("mse_frequencies: length mismatch (" + std::to_string(truth.size()) + " vs " +
             std::to_string(est.size()) + ")");
  const Eigen::Index K = truth.size();
  if (K == 0)
    return 0.0;
  Eigen::MatrixXd cost(K, K);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) {
      const double d = wrap_phase(truth(i) - est(j));
      cost(i, j) = d * d;
    }
  const std::vector<int> match = min_cost_assignment(cost);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < K; ++i)
    acc += cost(i, match[i]);
  return acc;
}

SourceScene draw_scene(const SweepConfig& cfg, std::uint64_t trial_seed)
{
  const double nu_max = cfg.sweep_nu_max();
  const double gap = cfg.min_separation();
  // K - 1 gaps must fit in [0, nu_max], and K gaps around the circle
  if (cfg.K > 1 && ((cfg.K - 1) * gap > nu_max || cfg.K * gap > kTwoPi))
    fail_arg("draw_scene: K = " + std::to_string(cfg.K) + " sources cannot be separated by " +
             std::to_string(gap) + " rad within [0, " + std::to_string(nu_max) + "]");

  Rng rng(trial_seed);
  std::uniform_real_distribution<double> uni(0.0, nu_max);
  RVector nu(cfg.K);
  constexpr int kMaxAttempts = 100000;
  bool ok = false;
  for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
    for (int k = 0; k < cfg.K; ++k)
      nu(k) = uni(rng);
    ok = true;
    for (int i = 0; i < cfg.K && ok; ++i)
      for (int j = i + 1; j < cfg.K && ok; ++j)
        ok = std::abs(wrap_phase(nu(i) - nu(j))) >= gap;
  }
  if (!ok)
    fail_arg("draw_scene: separation infeasible (rejection sampling exhausted)");

  SourceScene scene;
  scene.nu = nu;
  scene.X = complex_gaussian(cfg.K, cfg.L, rng);
  return scene;
}

double CoherenceResult::final_mu(const std::string& method, int P) const
{
  const CoherenceRow* last = nullptr;
  for (const auto& r : rows)
    if (r.method == method && r.P == P && (!last || r.iter >= last->iter))
      last = &r;
  if (!last)
    fail_arg("final_mu: no rows for method '" + method + "' at P = " + std::to_string(P));
  return last->mu_max;
}

CoherenceResult run_coherence_experiment(const SweepConfig& cfg)
{
  cfg.validate();
  CoherenceResult out;
  const int t_max = cfg.design.t_max;
  for (int P : cfg.P_list) {
    const Dictionary dict = build_dictionary(P, cfg.coherence_nu_max(), cfg.M);
    for (ProjectionKind kind : cfg.projection_kinds) {
      const std::string name = to_string(kind);
      const ProjectionOutcome proj = make_projection(kind, dict, cfg);
      if (proj.trace) {
        const auto& best = proj.trace->best_coherence_per_iter;
        for (int t = 0; t <= t_max; ++t) {
          // a stationary run stops early; its best value carries forward
          const double mu = best[std::min<std::size_t>(t, best.size() - 1)];
          out.rows.push_back({name, P, t, mu});
        }
      } else {
        const double mu = coherence_or_one(proj.phi.matrix() * dict.atoms());
        for (int t = 0; t <= t_max; ++t)
          out.rows.push_back({name, P, t, mu});
      }
    }
  }
  return out;
}

const SweepRow* SweepResult::find(const std::string& method, double snr_db) const
{
  for (const auto& r : rows)
    if (r.method == method && r.snr_db == snr_db)
      return &r;
  return nullptr;
}

SweepResult run_mse_sweep(const SweepConfig& cfg)
{
  cfg.validate();
  const Dictionary dict = build_dictionary(cfg.P, cfg.sweep_nu_max(), cfg.M);
  const UlaConfig ula{cfg.M, cfg.spacing_ratio};

  SweepResult out;
  out.include_timing = cfg.include_timing;
  for (ProjectionKind kind : cfg.projection_kinds) {
    const ProjectionMatrix phi = make_projection(kind, dict, cfg).phi;
    for (std::size_t s = 0; s < cfg.snr_grid_db.size(); ++s) {
      const double snr = cfg.snr_grid_db[s];
      double sum_ongrid = 0.0;
      double sum_refined = 0.0;
      double sum_time = 0.0;
      int ok = 0;
      int failed = 0;
      for (int t = 0; t < cfg.trials; ++t) {
        const auto ut = static_cast<std::uint64_t>(t);
        // the scene is shared across SNR points; the noise is not
        const SourceScene scene = draw_scene(cfg, derive_seed({cfg.seed, kTagScene, ut}));
        const MeasurementSet meas = synthesize_measurements(
          scene, phi, ula, snr, derive_seed({cfg.seed, kTagNoise, s, ut}));
        try {
          const auto t0 = std::chrono::steady_clock::now();
          const EstimationResult est = estimate(meas.Y, phi, dict, cfg.K, cfg.gomp);
          sum_time += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          const double e0 = mse_frequencies(scene.nu, est.nu_initial);
          const double e1 = mse_frequencies(scene.nu, est.nu_hat);
          if (!std::isfinite(e0) || !std::isfinite(e1))
            throw NumericalError("non-finite estimate");
          sum_ongrid += e0;
          sum_refined += e1;
          ++ok;
        } catch (const std::exception&) {
          ++failed;
        }
      }
      SweepRow row;
      row.method = to_string(kind);
      row.snr_db = snr;
      row.trials = ok;
      row.failed_trials = failed;
      if (ok > 0) {
        row.mse_ongrid = sum_ongrid / ok;
        row.mse_refined = sum_refined / ok;
        row.mean_runtime_s = sum_time / ok;
      } else {
        row.mse_ongrid = row.mse_refined = std::numeric_limits<double>::quiet_NaN();
      }
      out.rows.push_back(row);
    }
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path)
{
  std::vector<SweepRow> rows = result.rows;
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.method != b.method)
      return a.method < b.method;
    return a.snr_db < b.snr_db;
  });
  auto out = csv::open_for_write(path);
  out << "method,snr_db,mse_ongrid,mse_refined,trials,failed_trials";
  if (result.include_timing)
    out << ",mean_runtime_s";
  out << '\n';
  for (const auto& r : rows) {
    out << r.method << ',' << csv::format_number(r.snr_db) << ','
        << csv::format_number(r.mse_ongrid) << ',' << csv::format_number(r.mse_refined) << ','
        << r.trials << ',' << r.failed_trials;
    if (result.include_timing)
      out << ',' << csv::format_number(r.mean_runtime_s);
    out << '\n';
  }
  if (!out)
    throw std::runtime_error("write to '" + path.string() + "' failed");
}

void emit_csv(const CoherenceResult& result, const std::filesystem::path& path)
{
  std::vector<CoherenceRow> rows = result.rows;
  std::stable_sort(rows.begin(), rows.end(), [](const CoherenceRow& a, const CoherenceRow& b) {
    if (a.method != b.method)
      return a.method < b.method;
    if (a.P != b.P)
      return a.P < b.P;
    return a.iter < b.iter;
  });
  auto out = csv::open_for_write(path);
  out << "method,P,iter,mu_max\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.P << ',' << r.iter << ',' << csv::format_number(r.mu_max) << '\n';
  if (!out)
    throw std::runtime_error("write to '" + path.string() + "' failed");
}

} // namespace gomp
