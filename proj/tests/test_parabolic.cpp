#include <gtest/gtest.h>

#include <numbers>

#include "chemofv/parabolic.hpp"

using namespace chemofv;

namespace {

PhysicalParams chem(double D, double a, double b, double L = 1.0) {
  PhysicalParams p;
  p.D = D;
  p.a = a;
  p.b = b;
  p.L = L;
  return p;
}

}  // namespace

TEST(Tridiagonal, Identity) {
  TridiagonalSystem s;
  s.lower = {0, 0, 0};
  s.diag = {1, 1, 1};
  s.upper = {0, 0, 0};
  s.rhs = {3, -2, 5};
  EXPECT_EQ(solve_tridiagonal(s), s.rhs);
}

TEST(Tridiagonal, ThreeByThree) {
  // 2x - y = 1, -x + 2y - z = 0, -y + 2z = 1 has x = y = z = 1.
  TridiagonalSystem s;
  s.lower = {0, -1, -1};
  s.diag = {2, 2, 2};
  s.upper = {-1, -1, 0};
  s.rhs = {1, 0, 1};
  const auto x = solve_tridiagonal(s);
  for (double v : x) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Tridiagonal, NeumannLaplacianPlusIdentityConstant) {
  const std::size_t n = 50;
  TridiagonalSystem s;
  s.lower.assign(n, -1.0);
  s.upper.assign(n, -1.0);
  s.diag.assign(n, 3.0);
  s.diag.front() = s.diag.back() = 2.0;
  s.lower.front() = s.upper.back() = 0.0;
  s.rhs.assign(n, 4.0);
  for (double v : solve_tridiagonal(s)) EXPECT_NEAR(v, 4.0, 1e-13);
}

TEST(Tridiagonal, ResidualSmall) {
  const std::size_t n = 200;
  TridiagonalSystem s;
  s.lower.assign(n, -0.7);
  s.upper.assign(n, -0.6);
  s.diag.assign(n, 2.5);
  s.rhs.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.rhs[i] = std::sin(0.1 * static_cast<double>(i));
  const auto x = solve_tridiagonal(s);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = s.diag[i] * x[i];
    if (i > 0) ax += s.lower[i] * x[i - 1];
    if (i + 1 < n) ax += s.upper[i] * x[i + 1];
    worst = std::max(worst, std::abs(ax - s.rhs[i]));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(ParabolicStep, ConstantDecay) {
  const PhysicalParams p = chem(1.0, 1.0, 2.0);
  const double dt = 0.1, c = 3.0;
  const std::vector<double> phi(10, c), rho(10, 0.0);
  const double want = c * (1.0 - p.b * dt / 2.0) / (1.0 + p.b * dt / 2.0);
  for (double v : parabolic_step(phi, rho, dt, 0.1, p)) EXPECT_NEAR(v, want, 1e-14);
}

TEST(ParabolicStep, ZeroStaysZero) {
  const std::vector<double> z(10, 0.0);
  for (double v : parabolic_step(z, z, 0.1, 0.1, chem(1, 1, 1))) EXPECT_EQ(v, 0.0);
}

TEST(ParabolicStep, ConstantProduction) {
  const PhysicalParams p = chem(1.0, 3.0, 1.0);
  const double dt = 0.05, r = 2.0;
  const std::vector<double> phi(10, 0.0), rho(10, r);
  for (double v : parabolic_step(phi, rho, dt, 0.1, p)) EXPECT_NEAR(v, dt * p.a * r / (1.0 + p.b * dt / 2.0), 1e-14);
}

TEST(ParabolicStep, SteadyConsistency) {
  const PhysicalParams p = chem(0.3, 2.0, 4.0);
  const std::vector<double> phi(25, 1.5), rho(25, 3.0);  // a rho = b phi
  for (double v : parabolic_step(phi, rho, 0.7, 0.04, p)) EXPECT_NEAR(v, 1.5, 1e-14);
}

TEST(ParabolicStep, PreservesIntegralWithoutReaction) {
  const PhysicalParams p = chem(1.0, 0.0, 0.0);
  std::vector<double> phi(40), rho(40, 0.0);
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = static_cast<double>(i % 7);
  double before = 0.0, after = 0.0;
  for (double v : phi) before += v;
  for (double v : parabolic_step(phi, rho, 0.3, 0.025, p)) after += v;
  EXPECT_NEAR(after, before, 1e-12 * before);
}

TEST(ParabolicStep, SecondOrderConvergence) {
  const PhysicalParams p = chem(0.5, 0.0, 1.0, 2.0);
  const double pi = std::numbers::pi, T = 0.2;
  const double decay = p.b + p.D * pi * pi / (p.L * p.L);
  double prev = 0.0;
  for (std::size_t n : {50u, 100u, 200u, 400u}) {
    const double dx = p.L / static_cast<double>(n);
    const auto steps = static_cast<std::size_t>(std::llround(T / dx));
    const double dt = T / static_cast<double>(steps);
    std::vector<double> phi(n), rho(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) phi[i] = std::cos(pi * (static_cast<double>(i) + 0.5) * dx / p.L);
    for (std::size_t s = 0; s < steps; ++s) phi = parabolic_step(phi, rho, dt, dx, p);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      e += std::abs(phi[i] - std::exp(-decay * T) * std::cos(pi * (static_cast<double>(i) + 0.5) * dx / p.L)) * dx;
    if (prev > 0.0) {
      EXPECT_GE(std::log2(prev / e), 1.9) << "n=" << n;
    }
    prev = e;
  }
}

TEST(ParabolicStep, RejectsBadInput) {
  const std::vector<double> a(5, 0.0), b(4, 0.0);
  EXPECT_THROW(parabolic_step(a, b, 0.1, 0.1, chem(1, 1, 1)), DomainError);
  EXPECT_THROW(parabolic_step(a, a, 0.0, 0.1, chem(1, 1, 1)), DomainError);
}
