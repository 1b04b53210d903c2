#include <gtest/gtest.h>

#include <numbers>

#include "chemofv/config.hpp"
#include "chemofv/driver.hpp"

using namespace chemofv;

namespace {

PhysicalParams lateral_params() { return PhysicalParams{1.0, 2.0, 0.0, 50.0, 1.0, 1.0, 1.0, 1.0}; }

RunConfig equilibrium_config() {
  RunConfig c;
  c.params = lateral_params();
  c.n_cells = 100;
  c.initial.kind = InitialKind::discrete_equilibrium;
  c.initial.mass = 1.0 + 1.0 / std::numbers::pi;
  return c;
}

}  // namespace

TEST(CflDt, Values) {
  EXPECT_EQ(cfl_dt(0.0, 0.01, 0.9, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(cfl_dt(std::sqrt(2.0), 0.01, 0.9, 1.0), 0.009 / std::sqrt(2.0));
  StateField vac(10);
  EXPECT_EQ(cfl_dt(vac, Solver::suliciu, PhysicalParams{}, 0.9, 0.25), 0.25);
}

TEST(CflDt, NeverExceedsStabilityLimit) {
  const PhysicalParams p = lateral_params();
  StateField f(50);
  for (std::size_t i = 0; i < 50; ++i) {
    f.rho[i] = 1.0 + std::sin(0.3 * static_cast<double>(i));
    f.q[i] = 0.5 * f.rho[i];
  }
  for (Solver s : {Solver::hll, Solver::suliciu})
    EXPECT_LE(cfl_dt(f, s, p, 0.9, 1.0) * max_speed(f, s, p), 0.02 * (1.0 + 1e-15));
}

TEST(Step, DiscreteEquilibriumUnchanged) {
  const RunConfig c = equilibrium_config();
  const StateField f0 = initial_data(c.initial, c.grid(), c.params);
  StateField f = f0;
  for (int n = 0; n < 100; ++n) f = step(f, c).field;
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_NEAR(f.rho[i], f0.rho[i], 1e-12);
    EXPECT_NEAR(f.q[i], 0.0, 1e-12);
    EXPECT_NEAR(f.phi[i], f0.phi[i], 1e-12);
  }
}

TEST(Step, DecoupledWhenNoChemotaxis) {
  RunConfig c;
  c.params.chi = 0.0;
  c.params.a = 0.0;
  c.n_cells = 40;
  StateField f(40);
  for (std::size_t i = 0; i < 40; ++i) f.rho[i] = 1.0 + 0.5 * std::cos(0.2 * static_cast<double>(i));
  const double m0 = f.mass(c.grid().dx);
  for (int n = 0; n < 50; ++n) f = step(f, c).field;
  for (double v : f.phi) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(f.mass(c.grid().dx), m0, 1e-13 * m0);
}

TEST(Residues, Values) {
  StateField a(5), b(5);
  EXPECT_EQ(residues(a, a, 0.1), std::make_pair(0.0, 0.0));
  b.rho[2] = 0.3;
  b.q[1] = -0.2;
  const auto [rr, rq] = residues(a, b, 0.1);
  EXPECT_DOUBLE_EQ(rr, 3.0);
  EXPECT_DOUBLE_EQ(rq, 2.0);
  EXPECT_THROW(residues(a, b, 0.0), DomainError);
}

TEST(ErrorNorms, Values) {
  StateField a(4), b(4);
  EXPECT_EQ(error_norms(a, a, 0.25).l2, 0.0);
  for (double& r : b.rho) r = 0.5;
  const ErrorNorms e = error_norms(b, a, 0.5);  // L = 2
  EXPECT_DOUBLE_EQ(e.linf, 0.5);
  EXPECT_DOUBLE_EQ(e.l2, 0.5 * std::sqrt(2.0));
  EXPECT_THROW(error_norms(a, StateField(3), 0.1), DomainError);
}

TEST(CountBumps, Rules) {
  const std::vector<double> constant(20, 1.0), vac(20, 0.0);
  EXPECT_EQ(count_bumps(constant), 1u);
  EXPECT_EQ(count_bumps(vac), 0u);
  std::vector<double> two(20, 0.0);
  for (int i : {1, 2, 3, 10, 11, 12, 13}) two[static_cast<std::size_t>(i)] = 1.0;
  two[17] = 1.0;  // too short to count
  EXPECT_EQ(count_bumps(two), 2u);
  const auto sup = bump_supports(two);
  ASSERT_EQ(sup.size(), 2u);
  EXPECT_EQ(sup[0], std::make_pair(std::size_t{1}, std::size_t{3}));
  EXPECT_EQ(sup[1], std::make_pair(std::size_t{10}, std::size_t{13}));

  const Grid g(100, 1.0);
  EXPECT_EQ(count_bumps(sample_profile(lateral_bump(lateral_params(), 1.3), g).rho), 1u);
  PhysicalParams p2 = lateral_params();
  p2.L = 2.0;
  EXPECT_EQ(count_bumps(sample_profile(centered_bump(p2, 1.3), Grid(200, 2.0)).rho), 1u);
}

TEST(Run, ZeroLengthRun) {
  RunConfig c = equilibrium_config();
  c.t_final = 0.0;
  const RunResult r = run(c);
  EXPECT_EQ(r.steps, 0u);
  EXPECT_EQ(r.stop, StopReason::time_reached);
  ASSERT_EQ(r.snapshots.size(), 1u);
  EXPECT_EQ(r.snapshots.front().field, r.final_field);
  EXPECT_EQ(r.final_field, initial_data(c.initial, c.grid(), c.params));
}

TEST(Run, SteadyStateDetectedFromEquilibrium) {
  RunConfig c = equilibrium_config();
  c.t_final = 100.0;
  const RunResult r = run(c);
  EXPECT_EQ(r.stop, StopReason::steady_state);
  EXPECT_LE(r.t, (c.steady_checks + 1) * c.output_dt + 1e-9);
}

TEST(Run, DiagnosticsMonotoneAndMassConserved) {
  const RunConfig c = find_preset("fig5").config;
  const RunResult r = run(c);
  ASSERT_FALSE(r.diagnostics.empty());
  const double m0 = r.snapshots.front().field.mass(c.grid().dx);
  for (std::size_t k = 1; k < r.diagnostics.size(); ++k) EXPECT_GT(r.diagnostics[k].t, r.diagnostics[k - 1].t);
  for (const DiagnosticRecord& d : r.diagnostics) EXPECT_NEAR(d.mass, m0, 1e-12 * m0);
  EXPECT_LT(r.diagnostics.back().res_q, 1e-8);
  EXPECT_LT(r.diagnostics.back().linf_err, 2.0 * c.grid().dx);
}

TEST(Run, DeterministicReplay) {
  RunConfig c = find_preset("fig10").config;
  c.t_final = 2.0;
  const RunResult a = run(c), b = run(c);
  EXPECT_EQ(a.final_field, b.final_field);
  ASSERT_EQ(a.diagnostics.size(), b.diagnostics.size());
  for (std::size_t k = 0; k < a.diagnostics.size(); ++k) {
    EXPECT_EQ(a.diagnostics[k].res_rho, b.diagnostics[k].res_rho);
    EXPECT_EQ(a.diagnostics[k].mass, b.diagnostics[k].mass);
  }
}

TEST(Run, ParabolicFirstCouplingRuns) {
  RunConfig c = equilibrium_config();
  c.coupling = Coupling::parabolic_first;
  c.t_final = 1.0;
  const RunResult r = run(c);
  EXPECT_NE(r.stop, StopReason::step_rejected);
  EXPECT_NEAR(r.final_field.mass(c.grid().dx), c.initial.mass, 1e-12);
}
