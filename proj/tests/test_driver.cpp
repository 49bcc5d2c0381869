#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "chd/driver.hpp"
#include "chd/oracles.hpp"

using namespace chd;

TEST_CASE("run covers [0, t_end] with a trimmed final step") {
  SimConfig c;
  c.grid = Grid{16, 16, 1.0, 1.0};
  c.initial.kind = InitialKind::Constant;
  c.initial.m0 = 0.2;
  c.gamma.amplitude = 0.0;
  c.time.dt = 1e-3;
  const PotentialSpec pot =
      make_potential(c.potential.family, c.potential.lambda, c.potential.eps);

  std::vector<DiagnosticsRecord> records;
  const RunResult out =
      run(initial_state(c), 0.0105, pot, c.gamma, make_stepper(c),
          [&](const DiagnosticsRecord& r, const SimState&) {
            records.push_back(r);
          });
  REQUIRE(out.steps == 11);
  REQUIRE(out.rejected == 0);
  REQUIRE(out.state.t == Catch::Approx(0.0105).margin(1e-12));
  REQUIRE(records.size() == 11);
  REQUIRE(records.back().dt_used == Catch::Approx(5e-4).margin(1e-12));
  for (std::size_t k = 0; k + 1 < records.size(); ++k)
    REQUIRE(records[k].dt_used == 1e-3);
}

TEST_CASE("run halves the step under a transport cap and recovers") {
  SimConfig c;
  c.grid = Grid{16, 16, 1.0, 1.0};
  c.initial.kind = InitialKind::Constant;
  c.initial.m0 = 0.2;
  c.gamma.amplitude = 0.0;
  c.time.dt = 1e-3;
  const PotentialSpec pot =
      make_potential(c.potential.family, c.potential.lambda, c.potential.eps);

  SimState s = initial_state(c);
  s.u = VectorField(s.phi.grid, 1000.0);  // transient spike, gone next step

  double max_dt_seen = 0.0;
  const RunResult out =
      run(std::move(s), 5e-3, pot, c.gamma, make_stepper(c),
          [&](const DiagnosticsRecord& r, const SimState&) {
            max_dt_seen = std::max(max_dt_seen, r.dt_used);
          });
  REQUIRE(out.rejected >= 4);
  REQUIRE(out.state.t == Catch::Approx(5e-3).margin(1e-12));
  // ten clean steps re-double the size toward the configured value
  REQUIRE(max_dt_seen > 1e-3 / 32.0);
}

TEST_CASE("run rethrows when halving would undercut dt_min") {
  SimConfig c;
  c.grid = Grid{16, 16, 1.0, 1.0};
  c.initial.kind = InitialKind::Constant;
  c.initial.m0 = 0.2;
  c.gamma.amplitude = 0.0;
  c.solver.dt_min = c.time.dt;  // no room to retreat
  const PotentialSpec pot =
      make_potential(c.potential.family, c.potential.lambda, c.potential.eps);

  SimState s = initial_state(c);
  s.u = VectorField(s.phi.grid, 1000.0);
  REQUIRE_THROWS_AS(run(std::move(s), 5e-3, pot, c.gamma, make_stepper(c)),
                    CflViolation);
}

TEST_CASE("seeded interface mode grows at the predicted rate") {
  // Linearize around phi = 0: a cosine mode with wavenumber kappa grows
  // like exp(sigma t) with sigma = -kappa^4 + (lambda - 2) kappa^2.  The
  // lowest mode on a 5x5 box is unstable for lambda = 3 and the measured
  // rate must match the oracle to a few percent (spatial and temporal
  // discretization each contribute under one percent here).
  SimConfig c;
  c.grid = Grid{32, 32, 5.0, 5.0};
  c.initial.kind = InitialKind::Constant;
  c.initial.m0 = 0.0;
  c.gamma.amplitude = 0.0;
  c.solver.couple_flow = false;
  c.time.dt = 1e-3;
  const PotentialSpec pot =
      make_potential(c.potential.family, c.potential.lambda, c.potential.eps);
  const StepperConfig cfg = make_stepper(c);

  SimState s = initial_state(c);
  const Grid& g = s.phi.grid;
  const double kappa = M_PI / g.lx;
  const double a0 = 1e-4;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      s.phi(i, j) = a0 * std::cos(kappa * g.x(i));
  finalize_state(s, pot, c.gamma, cfg.couple_flow, cfg.cg_tol);

  const auto amplitude = [&](const ScalarField& f) {
    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        acc += f(i, j) * std::cos(kappa * g.x(i));
    return acc * 2.0 * g.cell_area() / g.area();
  };

  const double t_end = 0.2;
  const RunResult out = run(std::move(s), t_end, pot, c.gamma, cfg);
  const double rate =
      std::log(amplitude(out.state.phi) / a0) / out.state.t;
  REQUIRE(rate == Catch::Approx(dispersion_rate(kappa, 3.0)).epsilon(0.05));
}

TEST_CASE("perturbation growth stays bounded and linear in its size") {
  SimConfig c;
  c.grid = Grid{16, 16, 1.0, 1.0};
  c.initial.kind = InitialKind::Random;
  c.initial.amplitude = 0.05;
  c.initial.seed = 9;
  c.gamma.preset = GammaPreset::Constant;
  c.gamma.amplitude = 0.2;
  c.time.dt = 1e-3;
  c.time.t_end = 0.05;

  const GrowthTable t1 = continuous_dependence_experiment(c, 1e-3);
  REQUIRE(t1.rows.size() == 51);
  REQUIRE(t1.rows.front().t == 0.0);
  REQUIRE(t1.rows.front().ratio == Catch::Approx(1.0).epsilon(1e-10));
  REQUIRE(t1.rows.back().t == Catch::Approx(0.05));
  REQUIRE(std::isfinite(t1.lambda_fit));
  REQUIRE(t1.lambda_fit < 20.0);

  // halving the perturbation leaves the normalized growth curve in place
  const GrowthTable t2 = continuous_dependence_experiment(c, 5e-4);
  for (std::size_t k = 0; k < t1.rows.size(); k += 10) {
    REQUIRE(t2.rows[k].ratio ==
            Catch::Approx(t1.rows[k].ratio).epsilon(0.02).margin(1e-6));
  }
}
