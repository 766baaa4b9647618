// SPDX-License-Identifier: Apache-2.0

#include "gomp/bench.hpp"
#include "gomp/csv.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Flat config keys that may be overridden from the command line.
const char* const kOverrideKeys[] = {
  "N", "M", "P", "K", "L", "trials", "snr_grid_db", "projection_kind", "nu_max",
  "min_separation_cells", "spacing_ratio", "P_list", "include_timing", "i_max", "j_max",
  "t_max", "step_size", "alpha", "alpha_candidates", "max_halvings", "init", "design_rule",
};

struct Options
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::map<std::string, std::string> overrides;
  // estimate
  std::string y_path;
  std::string phi_path;
  // design
  std::string phi_out;
};

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Options& opt, bool experiment)
{
  sub->add_option("--config", opt.config, "JSON config file with flat keys")->check(CLI::ExistingFile);
  auto* seed = sub->add_option("--seed", opt.seed, "base random seed");
  auto* out = sub->add_option("--out", opt.out, "output CSV path");
  if (experiment) {
    seed->required();
    out->required();
  }
  for (const char* key : kOverrideKeys)
    sub->add_option(std::string("--") + key, opt.overrides[key], std::string("override config key ") + key);
}

gomp::SweepConfig resolve_config(const Options& opt)
{
  json doc = json::object();
  if (!opt.config.empty()) {
    std::ifstream in(opt.config);
    if (!in)
      throw UsageError("cannot open config '" + opt.config + "'");
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw UsageError("config '" + opt.config + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
      throw UsageError("config '" + opt.config + "' must be a JSON object");
  }
  for (const auto& [key, value] : opt.overrides) {
    if (value.empty())
      continue;
    try {
      doc[key] = json::parse(value);
    } catch (const json::parse_error&) {
      doc[key] = value; // bare words such as `designed` or `inf`
    }
  }
  if (opt.seed)
    doc["seed"] = *opt.seed;
  try {
    return gomp::sweep_config_from_json_text(doc.dump());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

gomp::ProjectionKind kind_for_rule(gomp::DesignRule rule)
{
  switch (rule) {
    case gomp::DesignRule::shrink: return gomp::ProjectionKind::designed;
    case gomp::DesignRule::renormalized_shrink: return gomp::ProjectionKind::gd_prior_a;
    case gomp::DesignRule::exact: return gomp::ProjectionKind::gd_prior_b;
  }
  return gomp::ProjectionKind::designed;
}

int run_design(const Options& opt)
{
  const gomp::SweepConfig cfg = resolve_config(opt);
  const gomp::Dictionary dict = gomp::build_dictionary(cfg.P, cfg.coherence_nu_max(), cfg.M);
  const auto proj = gomp::make_projection(kind_for_rule(cfg.design.rule), dict, cfg);
  gomp::write_design_csv(*proj.trace, opt.out);
  if (!opt.phi_out.empty())
    gomp::csv::write_complex_matrix(proj.phi.matrix(), opt.phi_out);
  const auto& tr = *proj.trace;
  std::printf("mu_max %.6f -> %.6f (best at t=%d, alpha=%g, welch=%.6f)\n",
              tr.coherence_per_iter.front(), tr.best_coherence_per_iter.back(), tr.best_iter,
              tr.alpha, gomp::welch_bound(cfg.N, cfg.P));
  return kExitOk;
}

int run_sweep(const Options& opt)
{
  const gomp::SweepConfig cfg = resolve_config(opt);
  const gomp::SweepResult res = gomp::run_mse_sweep(cfg);
  gomp::emit_csv(res, opt.out);
  return kExitOk;
}

int run_coherence(const Options& opt)
{
  const gomp::SweepConfig cfg = resolve_config(opt);
  const gomp::CoherenceResult res = gomp::run_coherence_experiment(cfg);
  gomp::emit_csv(res, opt.out);
  return kExitOk;
}

int run_estimate(const Options& opt)
{
  const gomp::SweepConfig cfg = resolve_config(opt);
  const gomp::CMatrix Y = gomp::csv::read_complex_matrix(opt.y_path);
  if (Y.rows() != cfg.N)
    throw UsageError("Y has " + std::to_string(Y.rows()) + " rows but config N = " +
                     std::to_string(cfg.N));
  const gomp::Dictionary dict = gomp::build_dictionary(cfg.P, cfg.sweep_nu_max(), cfg.M);

  std::optional<gomp::ProjectionMatrix> phi;
  if (!opt.phi_path.empty()) {
    phi.emplace(gomp::csv::read_complex_matrix(opt.phi_path));
    if (phi->rows() != cfg.N || phi->cols() != cfg.M)
      throw UsageError("projection file must be N x M (" + std::to_string(cfg.N) + " x " +
                       std::to_string(cfg.M) + ")");
  } else {
    phi.emplace(gomp::make_projection(cfg.projection_kinds.front(), dict, cfg).phi);
  }

  const gomp::EstimationResult est = gomp::estimate(Y, *phi, dict, cfg.K, cfg.gomp);
  std::ostringstream body;
  body << "k,nu_hat,nu_initial,grid_index\n";
  for (Eigen::Index k = 0; k < est.nu_hat.size(); ++k)
    body << k << ',' << gomp::csv::format_number(est.nu_hat(k)) << ','
         << gomp::csv::format_number(est.nu_initial(k)) << ',' << est.initial_grid_indices(k)
         << '\n';
  if (opt.out.empty()) {
    std::cout << body.str();
  } else {
    auto out = gomp::csv::open_for_write(opt.out);
    out << body.str();
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Off-grid DoA estimation (GOMP) and constant-modulus projection design"};
  app.require_subcommand(1);

  Options opt;
  auto* design = app.add_subcommand("design", "run projection design and write its trace");
  add_common(design, opt, true);
  design->add_option("--phi-out", opt.phi_out, "also write the designed projection matrix");

  auto* sweep = app.add_subcommand("sweep", "MSE versus SNR Monte Carlo sweep");
  add_common(sweep, opt, true);

  auto* coherence = app.add_subcommand("coherence", "mutual coherence versus iteration");
  add_common(coherence, opt, true);

  auto* est = app.add_subcommand("estimate", "estimate frequencies from a measurement file");
  add_common(est, opt, false);
  est->add_option("--y", opt.y_path, "measurement CSV (header 'N,L')")->required()->check(CLI::ExistingFile);
  est->add_option("--phi", opt.phi_path, "projection matrix CSV (header 'N,M')")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (design->parsed())
      return run_design(opt);
    if (sweep->parsed())
      return run_sweep(opt);
    if (coherence->parsed())
      return run_coherence(opt);
    return run_estimate(opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
