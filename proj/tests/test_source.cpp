#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "chd/grid.hpp"
#include "chd/source.hpp"

using namespace chd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("cutoff_chi tapers between 1.5 and 2") {
  CHECK(cutoff_chi(0.0) == 1.0);
  CHECK(cutoff_chi(1.5) == 1.0);
  CHECK(cutoff_chi(-1.5) == 1.0);
  CHECK(cutoff_chi(1.75) == 0.5);
  CHECK(cutoff_chi(2.0) == 0.0);
  CHECK(cutoff_chi(2.5) == 0.0);
  CHECK(cutoff_chi(-3.0) == 0.0);
}

TEST_CASE("gamma vanishes once |phi| reaches 2, for every preset") {
  for (auto preset : {GammaPreset::Constant, GammaPreset::SpaceBump,
                      GammaPreset::TimeRamp, GammaPreset::SignedLogistic}) {
    GammaSpec s;
    s.preset = preset;
    s.amplitude = 0.7;
    CHECK(gamma_eval(s, 0.3, 0.4, 1.0, 2.5) == 0.0);
    CHECK(gamma_eval(s, 0.3, 0.4, 1.0, -2.0) == 0.0);
  }
}

TEST_CASE("preset shapes at reference points") {
  GammaSpec c{GammaPreset::Constant, 0.3};
  CHECK(gamma_eval(c, 0.1, 0.9, 5.0, 0.0) == 0.3);

  GammaSpec b;
  b.preset = GammaPreset::SpaceBump;
  b.amplitude = 0.3;
  b.x0 = 0.25;
  b.y0 = 0.75;
  b.w = 0.2;
  CHECK(gamma_eval(b, 0.25, 0.75, 0.0, 0.0) == 0.3);
  CHECK_THAT(gamma_eval(b, 0.45, 0.75, 0.0, 0.0),
             WithinRel(0.3 * std::exp(-1.0), 1e-14));

  GammaSpec r;
  r.preset = GammaPreset::TimeRamp;
  r.amplitude = 0.4;
  r.t_ramp = 2.0;
  CHECK(gamma_eval(r, 0.0, 0.0, 0.0, 0.0) == 0.0);
  CHECK_THAT(gamma_eval(r, 0.0, 0.0, 1.0, 0.0), WithinRel(0.2, 1e-15));
  CHECK(gamma_eval(r, 0.0, 0.0, 2.0, 0.0) == 0.4);
  CHECK(gamma_eval(r, 0.0, 0.0, 7.0, 0.0) == 0.4);

  GammaSpec l;
  l.preset = GammaPreset::SignedLogistic;
  l.amplitude = 0.5;
  CHECK(gamma_eval(l, 0.0, 0.0, 0.0, 0.0) == 0.0);
  CHECK_THAT(gamma_eval(l, 0.0, 0.0, 0.0, 0.5),
             WithinRel(0.5 * std::tanh(0.5), 1e-14));
  CHECK(gamma_eval(l, 0.0, 0.0, 0.0, -0.5) == -gamma_eval(l, 0.0, 0.0, 0.0, 0.5));
}

TEST_CASE("source_S: closed forms on constant states") {
  Grid g{8, 8, 1.0, 1.0};
  GammaSpec c{GammaPreset::Constant, 0.3};

  ScalarField minus_one(g, BcKind::NeumannZero, -1.0);
  for (double v : source_S(c, minus_one, 0.0).data) CHECK(v == 0.0);

  ScalarField zero(g, BcKind::NeumannZero, 0.0);
  for (double v : source_S(c, zero, 0.0).data) CHECK(v == -0.3);

  ScalarField one(g, BcKind::NeumannZero, 1.0);
  for (double v : source_S(c, one, 0.0).data) CHECK(v == -0.6);
}

TEST_CASE("effective source reduces to -(1 - phi^2) gamma inside [-1, 1]") {
  Grid g{16, 16, 2.0, 1.0};
  GammaSpec c{GammaPreset::Constant, 0.45};
  ScalarField phi(g, BcKind::NeumannZero);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      phi(i, j) = -1.0 + 2.0 * (i + g.nx * j) / (g.cells() - 1.0);
  const ScalarField S = source_S(c, phi, 0.0);
  const ScalarField eff = effective_source(phi, S);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double expect = -(1.0 - phi(i, j) * phi(i, j)) * 0.45;
      CHECK_THAT(eff(i, j), WithinAbs(expect, 1e-14));
    }
}

TEST_CASE("source bound: 3|gamma0| always, 2|gamma0| for |phi| <= 1") {
  Grid g{8, 8, 1.0, 1.0};
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> wide(-2.2, 2.2);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (auto preset : {GammaPreset::Constant, GammaPreset::SpaceBump,
                      GammaPreset::TimeRamp, GammaPreset::SignedLogistic}) {
    GammaSpec s;
    s.preset = preset;
    s.amplitude = -0.8;
    ScalarField phi(g, BcKind::NeumannZero);
    for (double& v : phi.data) v = wide(rng);
    CHECK(linfnorm(source_S(s, phi, 0.7)) <= 3.0 * std::abs(s.amplitude));
    for (double& v : phi.data) v = unit(rng);
    CHECK(linfnorm(source_S(s, phi, 0.7)) <= 2.0 * std::abs(s.amplitude));
  }
}

TEST_CASE("source is Lipschitz in phi") {
  Grid g{4, 4, 1.0, 1.0};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (auto preset : {GammaPreset::Constant, GammaPreset::SpaceBump,
                      GammaPreset::TimeRamp, GammaPreset::SignedLogistic}) {
    GammaSpec s;
    s.preset = preset;
    s.amplitude = 0.6;
    const double L = 10.0 * std::abs(s.amplitude);
    for (int k = 0; k < 500; ++k) {
      ScalarField a(g, BcKind::NeumannZero), b(g, BcKind::NeumannZero);
      for (int n = 0; n < int(a.data.size()); ++n) {
        a.data[n] = dist(rng);
        b.data[n] = dist(rng);
      }
      const ScalarField Sa = source_S(s, a, 0.4), Sb = source_S(s, b, 0.4);
      for (int n = 0; n < int(a.data.size()); ++n)
        CHECK(std::abs(Sa.data[n] - Sb.data[n]) <=
              L * std::abs(a.data[n] - b.data[n]) + 1e-14);
    }
  }
}

TEST_CASE("effective source vanishes outside the physical range") {
  Grid g{4, 4, 1.0, 1.0};
  GammaSpec c{GammaPreset::Constant, 1.0};
  ScalarField phi(g, BcKind::NeumannZero, 1.3);
  const ScalarField eff = effective_source(phi, source_S(c, phi, 0.0));
  for (double v : eff.data) CHECK(v == 0.0);  // (1 - phi)^+ = 0
  ScalarField lo(g, BcKind::NeumannZero, -1.2);
  const ScalarField eff2 = effective_source(lo, source_S(c, lo, 0.0));
  for (double v : eff2.data) CHECK(v == 0.0);  // (1 + phi)^+ = 0
}
