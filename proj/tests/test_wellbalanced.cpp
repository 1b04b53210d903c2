#include <gtest/gtest.h>

#include <random>

#include "chemofv/driver.hpp"
#include "chemofv/steady.hpp"
#include "chemofv/wellbalanced.hpp"

using namespace chemofv;

namespace {

PhysicalParams lateral_params() { return PhysicalParams{1.0, 2.0, 0.0, 50.0, 1.0, 1.0, 1.0, 1.0}; }

StateField uniform(std::size_t n, double rho, double phi) {
  StateField f(n);
  std::fill(f.rho.begin(), f.rho.end(), rho);
  std::fill(f.phi.begin(), f.phi.end(), phi);
  return f;
}

double max_diff(const StateField& a, const StateField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max({d, std::abs(a.rho[i] - b.rho[i]), std::abs(a.q[i] - b.q[i])});
  return d;
}

StateField random_field(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  StateField f(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.rho[i] = U(rng) < 0.25 ? 0.0 : 3.0 * U(rng);
    f.q[i] = f.rho[i] * 2.0 * (U(rng) - 0.5);
    f.phi[i] = 2.0 * U(rng);
  }
  return f;
}

}  // namespace

TEST(Reconstruct, FlatStateIsItself) {
  const PhysicalParams p = lateral_params();
  const InterfacePair r = reconstruct({1.0, 0.0}, {1.0, 0.0}, 0.3, 0.3, 0.01, p);
  EXPECT_DOUBLE_EQ(r.minus.rho, 1.0);
  EXPECT_DOUBLE_EQ(r.plus.rho, 1.0);
  EXPECT_EQ(r.minus.q, 0.0);
  EXPECT_EQ(r.plus.q, 0.0);
}

TEST(Reconstruct, VacuumStaysVacuum) {
  const InterfacePair r = reconstruct({0.0, 0.0}, {2.0, 1.0}, 5.0, 0.0, 0.01, lateral_params());
  EXPECT_EQ(r.minus.rho, 0.0);
  EXPECT_EQ(r.minus.q, 0.0);
}

TEST(Reconstruct, HandEvaluatedDrop) {
  // Psi(rho-) = [2 + 1 * (0 - 1)]_+ = 1, so rho- = 1/2.
  const PhysicalParams p{1.0, 2.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const InterfacePair r = reconstruct({1.0, 0.0}, {1.0, 0.0}, 1.0, 0.0, 0.1, p);
  EXPECT_DOUBLE_EQ(r.minus.rho, 0.5);
  EXPECT_DOUBLE_EQ(r.plus.rho, 1.0);
}

TEST(Reconstruct, ContractionRandom) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 5000; ++k) {
    PhysicalParams p{0.1 + U(rng), 1.1 + 3.0 * U(rng), 2.0 * U(rng), 50.0 * U(rng), 1.0, 1.0, 1.0, 1.0};
    const double ri = U(rng) < 0.2 ? 0.0 : 5.0 * U(rng), rj = U(rng) < 0.2 ? 0.0 : 5.0 * U(rng);
    const ConsState a{ri, ri * (U(rng) - 0.5)}, b{rj, rj * (U(rng) - 0.5)};
    const InterfacePair r = reconstruct(a, b, U(rng), U(rng), 0.01, p, {});
    ASSERT_LE(r.minus.rho, ri);
    ASSERT_LE(r.plus.rho, rj);
    ASSERT_GE(r.minus.rho, 0.0);
    ASSERT_GE(r.plus.rho, 0.0);
    ASSERT_DOUBLE_EQ(r.minus.velocity(), r.minus.is_vacuum() ? 0.0 : a.velocity());
  }
}

TEST(SourcePair, Values) {
  const PhysicalParams p = lateral_params();
  InterfacePair left, right;
  left.plus = {1.0, 0.0};
  right.minus = {0.5, 0.0};
  const SourcePair s = source_pair(1.0, left, right, p);
  EXPECT_DOUBLE_EQ(s.momentum(), -0.75);
  right.minus = {1.0, 0.0};
  EXPECT_EQ(source_pair(1.0, left, right, p).momentum(), 0.0);
  EXPECT_EQ(source_pair(0.0, InterfacePair{}, InterfacePair{}, p).momentum(), 0.0);
}

TEST(HyperbolicStep, UniformRestUnchanged) {
  const PhysicalParams p = lateral_params();
  const StateField f = uniform(20, 1.3, 0.7);
  for (Scheme s : {Scheme::well_balanced, Scheme::centered_fv, Scheme::finite_difference}) {
    const StepResult r = scheme_step(s, f, 1e-3, Solver::suliciu, p);
    EXPECT_LE(max_diff(r.field, f), 1e-14) << to_string(s);
  }
}

TEST(HyperbolicStep, DiscreteEquilibriumIsFixedPoint) {
  const PhysicalParams p = lateral_params();
  const Grid g(100, 1.0);
  const BumpProfile b = lateral_bump(p, 1.0 + 1.0 / std::numbers::pi);
  const StateField eq = discrete_equilibrium(b, g).field;
  for (Solver s : {Solver::hll, Solver::suliciu, Solver::roe}) {
    const double dt = 0.9 * g.dx / max_speed(eq, s, p);
    const StepResult r = hyperbolic_step(eq, dt, s, p);
    EXPECT_LE(max_diff(r.field, eq), 1e-12) << to_string(s);
  }
  // The reconstruction is flat at every face.
  for (const InterfacePair& face : reconstruct_all(eq, p)) {
    EXPECT_NEAR(face.minus.rho, face.plus.rho, 1e-12);
  }
}

TEST(HyperbolicStep, CenteredFvIsNotWellBalanced) {
  const PhysicalParams p = lateral_params();
  const Grid g(100, 1.0);
  const StateField eq = discrete_equilibrium(lateral_bump(p, 1.0 + 1.0 / std::numbers::pi), g).field;
  const StepResult r = hyperbolic_step_centered_fv(eq, 1e-4, Solver::suliciu, p);
  EXPECT_GT(max_diff(r.field, eq), 1e-8);
}

TEST(HyperbolicStep, CenteredMatchesWellBalancedWithoutSources) {
  PhysicalParams p = lateral_params();
  p.chi = 0.0;
  StateField f = uniform(30, 1.0, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.rho[i] = 1.0 + 0.3 * std::sin(0.4 * static_cast<double>(i));
    f.q[i] = 0.1 * std::cos(0.3 * static_cast<double>(i));
  }
  const StepResult a = hyperbolic_step(f, 1e-3, Solver::hll, p);
  const StepResult b = hyperbolic_step_centered_fv(f, 1e-3, Solver::hll, p);
  EXPECT_LE(max_diff(a.field, b.field), 1e-14);
}

// Independent scalar evaluation of the homogeneous update (chi = alpha = 0)
// on 5 cells with wall ghosts.
TEST(HyperbolicStep, SpikeMatchesHandRolledUpdate) {
  PhysicalParams p = lateral_params();
  p.chi = 0.0;
  p.L = 0.5;
  StateField f = uniform(5, 0.0, 0.0);
  f.rho[2] = 1.0;
  const double dx = 0.1, dt = 0.9 * dx / max_speed(f, Solver::hll, p);
  const StepResult r = hyperbolic_step(f, dt, Solver::hll, p);

  std::vector<double> F(6, 0.0), G(6, 0.0);
  for (int k = 1; k < 5; ++k) {
    const FluxResult fl = hll_flux({f.rho[k - 1], f.q[k - 1]}, {f.rho[k], f.q[k]}, p);
    F[k] = fl.f_rho;
    G[k] = fl.f_q;
  }
  G[0] = hll_flux({f.rho[0], -f.q[0]}, {f.rho[0], f.q[0]}, p).f_q;
  G[5] = hll_flux({f.rho[4], f.q[4]}, {f.rho[4], -f.q[4]}, p).f_q;
  double mass = 0.0, peak = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double rho = f.rho[i] - dt / dx * (F[i + 1] - F[i]);
    const double q = f.q[i] - dt / dx * (G[i + 1] - G[i]);
    EXPECT_NEAR(r.field.rho[i], rho, 1e-15);
    EXPECT_NEAR(r.field.q[i], q, 1e-14);
    mass += r.field.rho[i];
    peak = std::max(peak, r.field.rho[i]);
  }
  EXPECT_NEAR(mass, 1.0, 1e-15);
  EXPECT_LE(peak, 1.0);
}

TEST(HyperbolicStep, PositivityAndConservationRandom) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 1000; ++trial) {
    PhysicalParams p = lateral_params();
    p.alpha = trial % 2;
    StateField f = random_field(rng, 40);
    const double m0 = f.mass(1.0 / 40.0);
    const Solver s = trial % 4 < 2 ? Solver::hll : Solver::suliciu;
    for (int n = 0; n < 100; ++n) {
      const double dt = cfl_dt(f, s, p, 0.9, 1e-2);
      StepResult r = hyperbolic_step(f, dt, s, p);
      ASSERT_GE(r.stats.min_rho, 0.0) << "trial " << trial << " step " << n;
      f = std::move(r.field);
    }
    ASSERT_NEAR(f.mass(1.0 / 40.0), m0, 1e-13 * m0);
  }
}

TEST(HyperbolicStep, MassConservedOverLongRun) {
  const PhysicalParams p = lateral_params();
  std::mt19937_64 rng(44);
  StateField f = random_field(rng, 50);
  const double m0 = f.mass(0.02);
  for (int n = 0; n < 10000; ++n) f = hyperbolic_step(f, cfl_dt(f, Solver::suliciu, p, 0.9, 1e-2), Solver::suliciu, p).field;
  EXPECT_NEAR(f.mass(0.02), m0, 1e-13 * m0);
}

TEST(HyperbolicStep, RoeIsNotRejected) {
  // Roe negatives are clamped and counted rather than rejected.
  StateField f(3);
  f.rho = {1.0, 1.0, 1.0};
  StepStats s;
  f.rho[1] = -1e-6;
  detail::finalize(f, s, false);
  EXPECT_FALSE(s.rejected);
  EXPECT_EQ(s.negative_cells, 1u);
  EXPECT_EQ(f.rho[1], 0.0);
  EXPECT_EQ(s.min_rho, -1e-6);
}

TEST(FiniteDifference, NonZeroMomentumAtEquilibrium) {
  const PhysicalParams p = lateral_params();
  const Grid g(100, 1.0);
  const StateField eq = discrete_equilibrium(lateral_bump(p, 1.0 + 1.0 / std::numbers::pi), g).field;
  const StepResult r = finite_difference_step(eq, 1e-4, p);
  EXPECT_GT(max_diff(r.field, eq), 1e-8);
}

TEST(MaxSpeed, Values) {
  const PhysicalParams p = lateral_params();
  const StateField rest = uniform(10, 1.0, 0.0);
  for (Solver s : {Solver::hll, Solver::suliciu})
    EXPECT_DOUBLE_EQ(max_speed(rest, s, p), numerical_flux(s, {1.0, 0.0}, {1.0, 0.0}, p).sigma);
  EXPECT_EQ(max_speed(uniform(10, 0.0, 0.0), Solver::suliciu, p), 0.0);
  StateField spike = uniform(10, 0.0, 0.0);
  spike.rho[5] = 1.0;
  spike.q[5] = 2.0;
  for (Solver s : {Solver::hll, Solver::suliciu}) EXPECT_GE(max_speed(spike, s, p), 2.0);
}
