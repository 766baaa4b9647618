// SPDX-License-Identifier: Apache-2.0

#include "gomp/bench.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace gomp;

namespace {

ProjectionMatrix to_phi(const CMatrix& phi)
{
  return ProjectionMatrix(phi);
}

Dictionary make_dict(int P, double nu_max, int M)
{
  return build_dictionary(P, nu_max, M);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Off-grid DoA estimation with constant-modulus projection design";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<EmptySelectionError>(m, "EmptySelectionError", PyExc_RuntimeError);

  // array model
  m.def("steering_vector", &steering_vector, py::arg("nu"), py::arg("M"));
  m.def("steering_gradient", &steering_gradient, py::arg("nu"), py::arg("M"));
  m.def("steering_matrix", &steering_matrix, py::arg("nu"), py::arg("M"));
  m.def("spatial_frequency", &spatial_frequency, py::arg("theta"), py::arg("spacing_ratio") = 0.5);
  m.def(
    "dictionary_grid", [](int P, double nu_max, int M) { return make_dict(P, nu_max, M).grid(); },
    py::arg("P"), py::arg("nu_max"), py::arg("M"));
  m.def(
    "synthesize",
    [](const RVector& nu, const CMatrix& X, const CMatrix& phi, double snr_db, std::uint64_t seed) {
      SourceScene scene{nu, X};
      UlaConfig ula{static_cast<int>(phi.cols())};
      return synthesize_measurements(scene, to_phi(phi), ula, snr_db, seed).Y;
    },
    py::arg("nu"), py::arg("X"), py::arg("phi"), py::arg("snr_db"), py::arg("seed"),
    "Y = Phi A(nu) X plus projected sensor noise at the given SNR (dB, inf for none).");

  // coherence and projections
  m.def("mutual_coherence", &mutual_coherence, py::arg("psi"));
  m.def("welch_bound", &welch_bound, py::arg("N"), py::arg("P"));
  m.def(
    "sensing_matrix",
    [](const CMatrix& phi, int P, double nu_max) {
      return make_sensing_matrix(to_phi(phi), make_dict(P, nu_max, static_cast<int>(phi.cols()))).psi;
    },
    py::arg("phi"), py::arg("P"), py::arg("nu_max"));
  m.def(
    "objective_eta",
    [](const CMatrix& phi, int P, double nu_max) {
      return objective_eta(phi, make_dict(P, nu_max, static_cast<int>(phi.cols())));
    },
    py::arg("phi"), py::arg("P"), py::arg("nu_max"));
  m.def("cm_project", &cm_project, py::arg("z"));
  m.def("dft_projection", [](int N, int M) { return dft_projection(N, M).matrix(); }, py::arg("N"), py::arg("M"));
  m.def(
    "random_projection", [](int N, int M, std::uint64_t seed) { return random_cm_projection(N, M, seed).matrix(); },
    py::arg("N"), py::arg("M"), py::arg("seed"));

  py::class_<DesignTrace>(m, "DesignTrace")
    .def_readonly("coherence", &DesignTrace::coherence_per_iter)
    .def_readonly("best_coherence", &DesignTrace::best_coherence_per_iter)
    .def_readonly("eta", &DesignTrace::objective_per_iter)
    .def_readonly("step", &DesignTrace::step_per_iter)
    .def_readonly("best_iter", &DesignTrace::best_iter)
    .def_readonly("alpha", &DesignTrace::alpha)
    .def_property_readonly("phi", [](const DesignTrace& t) { return t.final_phi.matrix(); });

  m.def(
    "design_projection",
    [](int N, int M, int P, double nu_max, std::uint64_t seed, int t_max, double step_size,
       std::optional<double> alpha, const std::string& rule) {
      const Dictionary dict = make_dict(P, nu_max, M);
      DesignConfig cfg;
      cfg.seed = seed;
      cfg.t_max = t_max;
      cfg.step_size = step_size;
      cfg.rule = design_rule_from_string(rule);
      const ProjectionMatrix phi0 = initial_projection(dict, N, cfg);
      if (alpha) {
        cfg.alpha = *alpha;
        return design(dict, cfg, phi0);
      }
      return design_alpha_sweep(dict, cfg, phi0);
    },
    py::arg("N"), py::arg("M"), py::arg("P"), py::arg("nu_max"), py::arg("seed"), py::arg("t_max") = 200,
    py::arg("step_size") = 0.05, py::arg("alpha") = py::none(), py::arg("rule") = "shrink",
    "Gradient-descent design of a constant-modulus N x M projection. Without alpha the\n"
    "default candidate list is swept and the lowest-coherence result returned.");

  // estimation
  py::class_<EstimationResult>(m, "EstimationResult")
    .def_readonly("nu_hat", &EstimationResult::nu_hat)
    .def_readonly("X_hat", &EstimationResult::X_hat)
    .def_readonly("residual_history", &EstimationResult::residual_history)
    .def_readonly("grid_indices", &EstimationResult::initial_grid_indices)
    .def_readonly("nu_initial", &EstimationResult::nu_initial);

  m.def(
    "estimate",
    [](const CMatrix& Y, const CMatrix& phi, int P, double nu_max, int K, int i_max, int j_max) {
      GompConfig cfg{i_max, j_max};
      return estimate(Y, to_phi(phi), make_dict(P, nu_max, static_cast<int>(phi.cols())), K, cfg);
    },
    py::arg("Y"), py::arg("phi"), py::arg("P"), py::arg("nu_max"), py::arg("K"), py::arg("i_max") = 10,
    py::arg("j_max") = 5);
  m.def(
    "refine",
    [](const CMatrix& Y, const CMatrix& phi, const RVector& nu0, const CMatrix& X0, int i_max, int j_max) {
      return refine_multi(Y, to_phi(phi), nu0, X0, GompConfig{i_max, j_max});
    },
    py::arg("Y"), py::arg("phi"), py::arg("nu0"), py::arg("X0"), py::arg("i_max") = 10, py::arg("j_max") = 5);
  m.def("mse_frequencies", &mse_frequencies, py::arg("truth"), py::arg("estimate"));

  // experiments
  m.def(
    "run_sweep",
    [](const std::string& config_json) {
      const SweepResult res = run_mse_sweep(sweep_config_from_json_text(config_json));
      py::list rows;
      for (const auto& r : res.rows) {
        py::dict d;
        d["method"] = r.method;
        d["snr_db"] = r.snr_db;
        d["mse_ongrid"] = r.mse_ongrid;
        d["mse_refined"] = r.mse_refined;
        d["trials"] = r.trials;
        d["failed_trials"] = r.failed_trials;
        rows.append(d);
      }
      return rows;
    },
    py::arg("config_json"), "MSE-versus-SNR sweep from a flat JSON config; returns one dict per row.");
}
