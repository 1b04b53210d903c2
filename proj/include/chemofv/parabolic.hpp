#pragma once

// Crank-Nicolson step for  phi_t = D phi_xx + a rho - b phi  with homogeneous
// Neumann walls (mirrored ghosts phi_0 = phi_1, phi_{N+1} = phi_N).

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "chemofv/model.hpp"

namespace chemofv {

/// Row i reads  lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i];
/// lower[0] and upper[n-1] are ignored.
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;

  explicit TridiagonalSystem(std::size_t n = 0) : lower(n), diag(n), upper(n), rhs(n) {}
  std::size_t size() const { return diag.size(); }
};

/// Thomas algorithm. Requires a non-singular (e.g. diagonally dominant) system.
inline std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
  const std::size_t n = sys.size();
  if (sys.lower.size() != n || sys.upper.size() != n || sys.rhs.size() != n)
    throw DomainError("solve_tridiagonal: inconsistent sizes");
  if (n == 0) return {};

  std::vector<double> c(n), d(n), x(n);
  double pivot = sys.diag[0];
  if (pivot == 0.0) throw Error("solve_tridiagonal: zero pivot");
  c[0] = n > 1 ? sys.upper[0] / pivot : 0.0;
  d[0] = sys.rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = sys.diag[i] - sys.lower[i] * c[i - 1];
    if (pivot == 0.0) throw Error("solve_tridiagonal: zero pivot");
    c[i] = i + 1 < n ? sys.upper[i] / pivot : 0.0;
    d[i] = (sys.rhs[i] - sys.lower[i] * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

/// Discrete operator  D (phi_{i-1} - 2 phi_i + phi_{i+1})/dx^2  with mirrored ghosts.
inline std::vector<double> neumann_laplacian(std::span<const double> phi, double dx, double D) {
  const std::size_t n = phi.size();
  std::vector<double> out(n);
  const double k = D / (dx * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = i == 0 ? phi[0] : phi[i - 1];
    const double e = i + 1 == n ? phi[n - 1] : phi[i + 1];
    out[i] = k * (w - 2.0 * phi[i] + e);
  }
  return out;
}

/// (I - dt/2 A) phi^{n+1} = (I + dt/2 A) phi^n + dt a rho,  A = D d_xx - b.
inline std::vector<double> parabolic_step(std::span<const double> phi, std::span<const double> rho,
                                          double dt, double dx, const PhysicalParams& p) {
  const std::size_t n = phi.size();
  if (rho.size() != n) throw DomainError("parabolic_step: size mismatch");
  if (n < 3) throw DomainError("parabolic_step: need at least 3 cells");
  if (!(dt > 0.0)) throw DomainError("parabolic_step: dt must be positive");

  const double lam = p.D * dt / (dx * dx);
  const double half_b = 0.5 * p.b * dt;
  const std::vector<double> lap = neumann_laplacian(phi, dx, p.D);

  TridiagonalSystem sys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool wall = i == 0 || i + 1 == n;
    sys.lower[i] = i == 0 ? 0.0 : -0.5 * lam;
    sys.upper[i] = i + 1 == n ? 0.0 : -0.5 * lam;
    sys.diag[i] = 1.0 + (wall ? 0.5 : 1.0) * lam + half_b;
    sys.rhs[i] = phi[i] + 0.5 * dt * lap[i] - half_b * phi[i] + dt * p.a * rho[i];
  }
  return solve_tridiagonal(sys);
}

}  // namespace chemofv
