// SPDX-License-Identifier: Apache-2.0

#include "gomp/projection_design.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <fstream>
#include <string>

using namespace gomp;
using testing::max_abs;
using testing::random_complex;

namespace {

const cplx J(0.0, 1.0);

CMatrix exact_error(const CMatrix& phi, const Dictionary& dict)
{
  const CMatrix Q = phi * dict.atoms();
  return gram_error(Q, column_normalizer(Q));
}

double re_inner(const CMatrix& a, const CMatrix& b)
{
  return (a.adjoint() * b).trace().real();
}

// Ratio of the central-difference directional derivative to Re<G, dir>.
template<class F>
double fd_ratio(F&& f, const CMatrix& phi, const CMatrix& G, const CMatrix& dir, double h = 1e-6)
{
  const double fd = (f(phi + h * dir) - f(phi - h * dir)) / (2.0 * h);
  return fd / re_inner(G, dir);
}

} // namespace

TEST_CASE("mutual coherence examples")
{
  const CMatrix I3 = CMatrix::Identity(4, 4).leftCols(3);
  CHECK(mutual_coherence(I3) == 0.0);

  CMatrix dup(3, 3);
  dup << 1.0, 2.0, 1.0, J, 0.5, J, 0.0, 1.0, 0.0;
  CHECK(mutual_coherence(dup) == doctest::Approx(1.0));

  CMatrix three(2, 3);
  three << 1.0, 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0), 1.0;
  CHECK(mutual_coherence(three) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  CMatrix zero = CMatrix::Ones(3, 3);
  zero.col(1).setZero();
  CHECK_THROWS_AS(mutual_coherence(zero), std::invalid_argument);
  CHECK(coherence_or_one(zero) == 1.0);
  CHECK_THROWS_AS(mutual_coherence(CMatrix::Ones(3, 1)), std::invalid_argument);
}

TEST_CASE("mutual coherence ignores column scaling")
{
  const CMatrix psi = random_complex(5, 9, 1);
  CMatrix scaled = psi;
  for (Eigen::Index p = 0; p < psi.cols(); ++p)
    scaled.col(p) *= cplx(0.3 + p, -1.0 + 0.2 * p);
  CHECK(mutual_coherence(scaled) == doctest::Approx(mutual_coherence(psi)).epsilon(1e-12));
}

TEST_CASE("welch bound")
{
  CHECK(welch_bound(16, 64) == doctest::Approx(std::sqrt(48.0 / 1008.0)).epsilon(1e-15));
  CHECK(std::abs(welch_bound(16, 64) - 0.218218) < 1e-6);
  CHECK(welch_bound(7, 7) == 0.0);
  for (int P : {2, 5, 64})
    CHECK(welch_bound(1, P) == doctest::Approx(1.0));
  CHECK_THROWS_AS(welch_bound(8, 4), std::invalid_argument);
}

TEST_CASE("welch bound holds for random and designed frames")
{
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CMatrix psi = random_complex(4, 12, 100 + s);
    CHECK(mutual_coherence(psi) >= welch_bound(4, 12) - 1e-9);
  }
}

TEST_CASE("column normalizer")
{
  CMatrix unit = CMatrix::Identity(3, 3);
  unit.col(1) *= J;
  CHECK((column_normalizer(unit).array() == 1.0).all());

  CMatrix q(2, 2);
  q << 2.0, 0.0, 0.0, 4.0;
  const RVector d = column_normalizer(q);
  CHECK(d(0) == 0.5);
  CHECK(d(1) == 0.25);

  const CMatrix Q = random_complex(4, 6, 3);
  const RVector dq = column_normalizer(Q);
  for (Eigen::Index p = 0; p < 6; ++p)
    CHECK(std::abs((Q.col(p) * dq(p)).norm() - 1.0) < 1e-12);

  CMatrix z = Q;
  z.col(2).setZero();
  CHECK_THROWS_AS(column_normalizer(z), std::invalid_argument);
}

TEST_CASE("gram error")
{
  const CMatrix orth = CMatrix::Identity(4, 4).leftCols(3);
  CHECK(max_abs(gram_error(orth, column_normalizer(orth))) < 1e-15);

  CMatrix dup(2, 2);
  dup << 1.0, 1.0, 0.0, 0.0;
  CMatrix expect(2, 2);
  expect << 0.0, 1.0, 1.0, 0.0;
  CHECK(max_abs(gram_error(dup, column_normalizer(dup)) - expect) < 1e-15);

  const CMatrix Q = random_complex(5, 8, 4);
  const CMatrix E = gram_error(Q, column_normalizer(Q));
  CHECK(max_abs(E - E.adjoint()) < 1e-12);
  CHECK(E.diagonal().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shrink error")
{
  CMatrix e(1, 3);
  e << 0.5, 0.1, 0.4 * J;
  const CMatrix s = shrink_error(e, 1.0, 0.3);
  CHECK(std::abs(s(0, 0) - 0.2) < 1e-15);
  CHECK(s(0, 1) == 0.0);
  CHECK(std::abs(s(0, 2) - 0.1 * J) < 1e-15);

  // alpha and beta enter as a product
  CHECK(max_abs(shrink_error(e, 1.5, 0.2) - s) < 1e-15);

  const CMatrix Q = random_complex(3, 7, 8);
  const CMatrix E = gram_error(Q, column_normalizer(Q));
  const CMatrix S = shrink_error(E, 1.2, 0.3);
  CHECK(max_abs(S - S.adjoint()) < 1e-12);
  for (Eigen::Index i = 0; i < E.size(); ++i) {
    CHECK(std::abs(S.data()[i]) <= std::abs(E.data()[i]) + 1e-15);
    if (std::abs(E.data()[i]) < 0.36)
      CHECK(S.data()[i] == cplx(0.0));
  }
}

TEST_CASE("objective eta")
{
  // two identical CM rows make every column of Q parallel to [1, 1]
  const Dictionary dict = build_dictionary(2, kTwoPi, 2);
  CMatrix phi(1, 2);
  phi << 1.0, 1.0;
  // column for nu = pi is zero, so eta is undefined there
  CHECK_THROWS_AS(objective_eta(phi, dict), std::invalid_argument);

  CMatrix phi2(2, 2);
  phi2 << 1.0, 1.0, 1.0, -1.0;
  CHECK(objective_eta(phi2, dict) < 1e-20);

  const Dictionary d8 = build_dictionary(8, kTwoPi, 4);
  const CMatrix phi3 = random_complex(3, 4, 5);
  CHECK(objective_eta(phi3, d8) == doctest::Approx(exact_error(phi3, d8).squaredNorm()).epsilon(1e-12));
}

TEST_CASE("gradient with zero error is zero")
{
  const Dictionary dict = build_dictionary(8, kTwoPi, 5);
  const CMatrix phi = random_cm_projection(3, 5, 2).matrix();
  CHECK(max_abs(gradient_eta(phi, dict, CMatrix::Zero(8, 8))) == 0.0);
  CHECK(max_abs(gradient_renormalized(phi, dict, CMatrix::Zero(8, 8))) == 0.0);
}

TEST_CASE("gradient matches finite differences with a single constant")
{
  const Dictionary dict = build_dictionary(4, kTwoPi, 3);
  const CMatrix phi = random_complex(2, 3, 21);
  const CMatrix G = gradient_eta(phi, dict, exact_error(phi, dict));
  auto eta = [&](const CMatrix& p) { return objective_eta(p, dict); };

  std::vector<double> ratios;
  for (std::uint64_t s = 0; s < 20; ++s)
    ratios.push_back(fd_ratio(eta, phi, G, random_complex(2, 3, 500 + s)));
  for (double r : ratios) {
    CHECK(r == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(r - ratios.front()) / std::abs(ratios.front()) < 1e-4);
  }
}

TEST_CASE("shrunk-error gradient is the gradient of the shrunk energy")
{
  const Dictionary dict = build_dictionary(12, kTwoPi, 6);
  const CMatrix phi = random_cm_projection(3, 6, 8).matrix();
  const double thr = 1.0 * welch_bound(3, 12);
  const CMatrix G = gradient_eta(phi, dict, shrink_error(exact_error(phi, dict), 1.0, thr));
  auto energy = [&](const CMatrix& p) { return shrunk_energy(p, dict, thr); };
  for (std::uint64_t s = 0; s < 10; ++s)
    CHECK(fd_ratio(energy, phi, G, random_complex(3, 6, 900 + s), 1e-7) ==
          doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("negative gradient is a descent direction")
{
  int descents = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Dictionary dict = build_dictionary(8, kTwoPi, 5);
    const CMatrix phi = random_cm_projection(3, 5, 70 + s).matrix();
    const CMatrix G = gradient_eta(phi, dict, exact_error(phi, dict));
    if (objective_eta(phi - 1e-6 * G, dict) < objective_eta(phi, dict))
      ++descents;
  }
  CHECK(descents >= 95);
}

TEST_CASE("constant-modulus projection")
{
  CMatrix z(1, 4);
  z << 2.0, cplx(1.0, 1.0), 0.0, cplx(0.0, -3.0);
  const CMatrix p = cm_project(z);
  CHECK(std::abs(p(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(p(0, 1) - cplx(1.0, 1.0) / std::sqrt(2.0)) < 1e-15);
  CHECK(p(0, 2) == cplx(1.0));
  CHECK(std::abs(p(0, 3) + J) < 1e-15);

  const CMatrix r = random_complex(6, 6, 12);
  const CMatrix once = cm_project(r);
  CHECK(max_abs(cm_project(once) - once) < 1e-12);
  CHECK((once.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("dft projection")
{
  const CMatrix d = dft_projection(2, 4).matrix();
  CMatrix expect(2, 4);
  expect << 1.0, 1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0;
  CHECK(max_abs(d - expect) < 1e-15);

  const CMatrix big = dft_projection(16, 64).matrix();
  REQUIRE(big.rows() == 16);
  for (int n = 0; n < 16; ++n)
    for (int m = 0; m < 64; ++m)
      CHECK(std::abs(big(n, m) - std::polar(1.0, -kTwoPi * 4.0 * n * m / 64.0)) < 1e-12);
  CHECK((big.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(dft_projection(3, 8), std::invalid_argument);
}

TEST_CASE("random projection")
{
  const CMatrix a = random_cm_projection(5, 7, 99).matrix();
  const CMatrix b = random_cm_projection(5, 7, 99).matrix();
  const CMatrix c = random_cm_projection(5, 7, 100).matrix();
  CHECK(max_abs(a - b) == 0.0);
  CHECK(max_abs(a - c) > 0.0);
  CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("projection matrix rejects non-constant modulus")
{
  CMatrix bad = CMatrix::Ones(2, 2);
  bad(1, 1) = 0.9;
  CHECK_THROWS_AS(ProjectionMatrix{bad}, std::invalid_argument);
}

TEST_CASE("svd start spans the dictionary's principal subspace")
{
  const Dictionary fov = build_dictionary(64, kTwoPi * 15.0 / 64.0, 64);
  const ProjectionMatrix phi = svd_projection(fov, 16);
  REQUIRE(phi.rows() == 16);
  REQUIRE(phi.cols() == 64);
  CHECK(coherence_or_one(make_sensing_matrix(phi, fov).psi) < 1.0);
}

TEST_CASE("design with no iterations returns the start")
{
  const Dictionary dict = build_dictionary(16, kTwoPi, 8);
  const ProjectionMatrix phi0 = random_cm_projection(4, 8, 1);
  DesignConfig cfg;
  cfg.t_max = 0;
  const DesignTrace t = design(dict, cfg, phi0);
  CHECK(max_abs(t.final_phi.matrix() - phi0.matrix()) == 0.0);
  REQUIRE(t.coherence_per_iter.size() == 1);
  CHECK(t.coherence_per_iter[0] == doctest::Approx(mutual_coherence(phi0.matrix() * dict.atoms())));
}

TEST_CASE("design lowers coherence and never returns worse than the start")
{
  const Dictionary dict = build_dictionary(64, kTwoPi, 64);
  DesignConfig cfg;
  cfg.seed = 5;
  const ProjectionMatrix phi0 = initial_projection(dict, 16, cfg);
  const DesignTrace t = design(dict, cfg, phi0);

  REQUIRE(t.coherence_per_iter.size() == 201);
  CHECK(t.best_coherence_per_iter.back() < t.coherence_per_iter.front());
  CHECK(mutual_coherence(t.final_phi.matrix() * dict.atoms()) ==
        doctest::Approx(t.best_coherence_per_iter.back()).epsilon(1e-12));
  for (std::size_t i = 1; i < t.best_coherence_per_iter.size(); ++i)
    CHECK(t.best_coherence_per_iter[i] <= t.best_coherence_per_iter[i - 1]);
  for (double mu : t.coherence_per_iter) {
    CHECK(mu >= welch_bound(16, 64) - 1e-9);
    CHECK(mu <= 1.0);
  }
}

TEST_CASE("design rules and the alpha sweep")
{
  const Dictionary dict = build_dictionary(32, kTwoPi, 16);
  DesignConfig cfg;
  cfg.t_max = 60;
  cfg.seed = 3;
  const ProjectionMatrix phi0 = initial_projection(dict, 6, cfg);
  const double mu0 = mutual_coherence(phi0.matrix() * dict.atoms());

  for (DesignRule rule : {DesignRule::shrink, DesignRule::exact, DesignRule::renormalized_shrink}) {
    cfg.rule = rule;
    const DesignTrace t = design(dict, cfg, phi0);
    CHECK(t.best_coherence_per_iter.back() <= mu0);
  }

  cfg.rule = DesignRule::shrink;
  cfg.alpha_candidates = {1.0, 2.0, 4.0};
  const DesignTrace best = design_alpha_sweep(dict, cfg, phi0);
  for (double a : cfg.alpha_candidates) {
    DesignConfig one = cfg;
    one.alpha = a;
    CHECK(best.best_coherence_per_iter.back() <= design(dict, one, phi0).best_coherence_per_iter.back());
  }

  // a threshold above every error entry leaves the start untouched
  cfg.alpha = 50.0;
  const DesignTrace frozen = design(dict, cfg, phi0);
  CHECK(max_abs(frozen.final_phi.matrix() - phi0.matrix()) == 0.0);
}

TEST_CASE("design is deterministic")
{
  const Dictionary dict = build_dictionary(32, kTwoPi, 16);
  DesignConfig cfg;
  cfg.t_max = 30;
  cfg.seed = 11;
  const auto a = design_alpha_sweep(dict, cfg, initial_projection(dict, 6, cfg));
  const auto b = design_alpha_sweep(dict, cfg, initial_projection(dict, 6, cfg));
  CHECK(max_abs(a.final_phi.matrix() - b.final_phi.matrix()) == 0.0);
  CHECK(a.coherence_per_iter == b.coherence_per_iter);
}

TEST_CASE("design config validation and names")
{
  DesignConfig cfg;
  cfg.alpha = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = DesignConfig{};
  cfg.step_size = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  for (auto r : {DesignRule::shrink, DesignRule::exact, DesignRule::renormalized_shrink})
    CHECK(design_rule_from_string(to_string(r)) == r);
  for (auto k : {InitKind::svd_with_fallback, InitKind::svd, InitKind::random, InitKind::dft})
    CHECK(init_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(design_rule_from_string("nope"), std::invalid_argument);
}

TEST_CASE("design trace csv")
{
  const Dictionary dict = build_dictionary(16, kTwoPi, 8);
  DesignConfig cfg;
  cfg.t_max = 3;
  const DesignTrace t = design(dict, cfg, random_cm_projection(4, 8, 2));
  const auto path = testing::tmp_path("trace.csv");
  write_design_csv(t, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "iter,eta,mu_max");
  int rows = 0;
  while (std::getline(in, line))
    ++rows;
  CHECK(rows == 4);
}
