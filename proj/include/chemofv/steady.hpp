#pragma once

// Closed-form single-bump stationary states for the quadratic pressure
// P = eps rho^2, and a Newton solver for their fully discrete counterparts.
//
// On the support the density is rho = chi phi/(2 eps) + K, elsewhere rho = 0;
// phi is trigonometric on the support and hyperbolic on the vacuum part. The
// free boundary solves a transcendental equation which is bracketed and
// bisected.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "chemofv/model.hpp"
#include "chemofv/parabolic.hpp"

namespace chemofv {

class NoBumpSolution : public Error {
 public:
  using Error::Error;
};

enum class BumpKind { lateral, centered };

/// Quadrature used when projecting a profile onto cells.
enum class SampleMode { center, gauss3 };

/// (a chi/(2 eps) - b)/D; only defined for gamma = 2.
inline double compute_tau(const PhysicalParams& p) {
  if (p.gamma != 2.0) throw DomainError("closed-form equilibria require gamma = 2");
  return (p.a * p.chi / (2.0 * p.epsilon) - p.b) / p.D;
}

struct BumpProfile {
  BumpKind kind = BumpKind::lateral;
  double xbar = 0.0;
  double ybar = 0.0;  // right end of the support
  double K = 0.0;
  double mass = 0.0;
  PhysicalParams params;

  enum class Piece { vacuum_left, support, vacuum_right };

  double sqrt_tau() const { return std::sqrt(compute_tau(params)); }
  double kappa() const { return std::sqrt(params.b / params.D); }

  /// Which closed-form piece covers x.
  Piece piece_at(double x) const {
    if (kind == BumpKind::lateral) return x <= xbar ? Piece::support : Piece::vacuum_right;
    if (x < xbar) return Piece::vacuum_left;
    if (x <= ybar) return Piece::support;
    return Piece::vacuum_right;
  }

  /// deriv-th derivative (0..2) of the given phi piece, evaluated anywhere.
  double phi_piece(Piece piece, double x, int deriv = 0) const {
    const PhysicalParams& p = params;
    const double s = sqrt_tau();
    const double tau = s * s;
    const double k = kappa();
    const double shift = kind == BumpKind::lateral ? 0.0 : 0.5 * p.L;

    if (piece == Piece::support) {
      const double amp = 2.0 * p.epsilon * p.b * K / (tau * p.chi * p.D) / std::cos(s * (xbar - shift));
      const double arg = s * (x - shift);
      switch (deriv) {
        case 0: return amp * std::cos(arg) - p.a * K / (tau * p.D);
        case 1: return -amp * s * std::sin(arg);
        default: return -amp * tau * std::cos(arg);
      }
    }
    // Lateral: cosh(k (xbar - L)) normalises; centred: cosh(k xbar) for both sides.
    const double norm = kind == BumpKind::lateral ? std::cosh(k * (xbar - p.L)) : std::cosh(k * xbar);
    const double amp = -2.0 * p.epsilon * K / p.chi / norm;
    const double arg = piece == Piece::vacuum_left ? k * x : k * (x - p.L);
    switch (deriv) {
      case 0: return amp * std::cosh(arg);
      case 1: return amp * k * std::sinh(arg);
      default: return amp * k * k * std::cosh(arg);
    }
  }

  double phi(double x) const { return phi_piece(piece_at(x), x, 0); }
  double dphi(double x) const { return phi_piece(piece_at(x), x, 1); }
  double d2phi(double x) const { return phi_piece(piece_at(x), x, 2); }

  double rho(double x) const {
    if (piece_at(x) != Piece::support) return 0.0;
    return std::max(0.0, params.chi / (2.0 * params.epsilon) * phi(x) + K);
  }

  /// Closed-form integral of rho over [x1, x2], both inside the support.
  double rho_integral(double x1, double x2) const {
    const double chi2e = params.chi / (2.0 * params.epsilon);
    const auto prim = [&](double x) {
      // antiderivative of chi/(2eps) * phi_support(x) + K
      const double s = sqrt_tau();
      const double tau = s * s;
      const double shift = kind == BumpKind::lateral ? 0.0 : 0.5 * params.L;
      const double amp = 2.0 * params.epsilon * params.b * K / (tau * params.chi * params.D) /
                         std::cos(s * (xbar - shift));
      return chi2e * (amp * std::sin(s * (x - shift)) / s - params.a * K / (tau * params.D) * x) + K * x;
    };
    return prim(x2) - prim(x1);
  }
};

namespace detail {

inline void check_bump_params(const PhysicalParams& p, double M) {
  p.validate();
  if (!(M > 0.0)) throw DomainError("bump mass must be positive");
  if (!(p.b > 0.0)) throw DomainError("closed-form equilibria require b > 0");
}

/// Bisection on [lo, hi] where f changes sign; returns the midpoint once the
/// bracket collapses to adjacent doubles or after max_iter halvings.
template <class F>
double bisect(F&& f, double lo, double hi, int max_iter = 200) {
  double flo = f(lo);
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double fl = std::abs(f(lo));
  const double fh = std::abs(f(hi));
  return fl <= fh ? lo : hi;
}

}  // namespace detail

/// Left-hand minus right-hand side of the lateral free-boundary equation.
inline double lateral_interface_function(const PhysicalParams& p, double x) {
  const double tau = compute_tau(p);
  const double s = std::sqrt(tau);
  const double k = std::sqrt(p.b / p.D);
  return std::sqrt(p.b / (tau * p.D)) * std::tan(s * x) - std::tanh(k * (x - p.L));
}

inline double centered_interface_function(const PhysicalParams& p, double x) {
  const double tau = compute_tau(p);
  const double s = std::sqrt(tau);
  const double k = std::sqrt(p.b / p.D);
  return std::tanh(k * x) - std::sqrt(p.b / (tau * p.D)) * std::tan(s * (x - 0.5 * p.L));
}

/// K fixing the mass of a lateral bump with free boundary `xbar`.
inline double lateral_bump_constant(const PhysicalParams& p, double M, double xbar) {
  const double tau = compute_tau(p);
  const double s = std::sqrt(tau);
  return p.D / p.b * M * tau * s / (std::tan(s * xbar) - s * xbar);
}

/// Lateral bump with a prescribed free boundary; K still fixes the mass M.
/// Used directly for interface-shift perturbations.
inline BumpProfile lateral_bump_at(const PhysicalParams& p, double M, double xbar) {
  detail::check_bump_params(p, M);
  const double tau = compute_tau(p);
  if (!(tau > 0.0)) throw NoBumpSolution("tau <= 0: no one-bump solution");
  const double s = std::sqrt(tau);
  if (!(xbar > 0.0 && xbar < p.L))
    throw DomainError("free boundary must lie inside (0, L)");
  if (xbar >= std::numbers::pi / s)
    throw DomainError("free boundary beyond pi/sqrt(tau): density would become negative");
  if (std::abs(s * xbar - 0.5 * std::numbers::pi) < 1e-9)
    throw DomainError("free boundary at the tan singularity");

  BumpProfile b;
  b.kind = BumpKind::lateral;
  b.xbar = xbar;
  b.ybar = xbar;
  b.K = lateral_bump_constant(p, M, xbar);
  b.mass = M;
  b.params = p;
  return b;
}

inline BumpProfile lateral_bump(const PhysicalParams& p, double M) {
  detail::check_bump_params(p, M);
  const double tau = compute_tau(p);
  if (!(tau > 0.0)) throw NoBumpSolution("tau <= 0: no one-bump solution");
  const double s = std::sqrt(tau);
  const double lo = std::numbers::pi / (2.0 * s);
  const double hi = std::numbers::pi / s;
  if (!(p.L > hi)) throw NoBumpSolution("L <= pi/sqrt(tau): no one-bump solution");

  const double margin = 1e-9 * hi;
  const double xbar = detail::bisect(
      [&p](double x) { return lateral_interface_function(p, x); }, lo + margin, hi - margin);
  return lateral_bump_at(p, M, xbar);
}

inline BumpProfile centered_bump(const PhysicalParams& p, double M) {
  detail::check_bump_params(p, M);
  const double tau = compute_tau(p);
  if (!(tau > 0.0)) throw NoBumpSolution("tau <= 0: no centred bump");
  const double s = std::sqrt(tau);
  if (!(p.L > 2.0 * std::numbers::pi / s))
    throw NoBumpSolution("L <= 2 pi/sqrt(tau): no centred bump");

  const double lo = 0.5 * p.L - std::numbers::pi / s;
  const double hi = 0.5 * p.L - std::numbers::pi / (2.0 * s);
  const double margin = 1e-9 * std::numbers::pi / s;
  const double xbar = detail::bisect(
      [&p](double x) { return centered_interface_function(p, x); }, lo + margin, hi - margin);

  const double k = std::sqrt(p.b / p.D);
  BumpProfile b;
  b.kind = BumpKind::centered;
  b.xbar = xbar;
  b.ybar = p.L - xbar;
  b.K = M * tau / ((2.0 * xbar - p.L) * p.b / p.D - 2.0 * k * std::tanh(k * xbar));
  b.mass = M;
  b.params = p;
  return b;
}

/// Residual of the free-boundary equation at the profile's xbar.
inline double interface_residual(const BumpProfile& b) {
  return b.kind == BumpKind::lateral ? lateral_interface_function(b.params, b.xbar)
                                     : centered_interface_function(b.params, b.xbar);
}

/// Cell values of rho and phi (q = 0), at centres or as 3-point Gauss averages.
inline StateField sample_profile(const BumpProfile& b, const Grid& g,
                                 SampleMode mode = SampleMode::center) {
  StateField f(g.n_cells);
  static const double gx = std::sqrt(3.0 / 5.0);
  for (std::size_t i = 0; i < g.n_cells; ++i) {
    const double xc = g.center(i);
    if (mode == SampleMode::center) {
      f.rho[i] = b.rho(xc);
      f.phi[i] = b.phi(xc);
    } else {
      const double h = 0.5 * g.dx;
      const double xs[3] = {xc - gx * h, xc, xc + gx * h};
      const double ws[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      for (int k = 0; k < 3; ++k) {
        f.rho[i] += ws[k] * b.rho(xs[k]);
        f.phi[i] += ws[k] * b.phi(xs[k]);
      }
    }
  }
  return f;
}

struct DiscreteEquilibriumResult {
  StateField field;
  double psi_constant = 0.0;  // Psi(rho_i) - chi phi_i on the support
  int iterations = 0;
  double residual = 0.0;
};

/// Solves for a fully discrete equilibrium of the coupled scheme:
///   rho_i = Psi^-1([chi phi_i + C]_+),   D L_h phi - b phi + a rho = 0,
///   sum rho_i dx = M,
/// by semi-smooth Newton on (phi, C) starting from `guess`. Any gamma > 1.
inline DiscreteEquilibriumResult discrete_equilibrium(const StateField& guess, double C_guess,
                                                      double M, const PhysicalParams& p,
                                                      int max_iter = 100, double tol = 1e-13) {
  const std::size_t n = guess.size();
  const double dx = p.L / static_cast<double>(n);
  std::vector<double> phi = guess.phi;
  double C = C_guess;

  const auto dens = [&p](double y) { return y > 0.0 ? psi_inv(y, p) : 0.0; };
  const auto ddens = [&p](double y) {
    if (y <= 0.0) return 0.0;
    const double base = (p.gamma - 1.0) * y / (p.epsilon * p.gamma);
    return std::pow(base, (2.0 - p.gamma) / (p.gamma - 1.0)) / (p.epsilon * p.gamma);
  };

  DiscreteEquilibriumResult res;
  const double kd = p.D / (dx * dx);
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> rho(n), drho(n);
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = p.chi * phi[i] + C;
      rho[i] = dens(y);
      drho[i] = ddens(y);
      mass += rho[i] * dx;
    }
    const std::vector<double> lap = neumann_laplacian(phi, dx, p.D);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n + 1));
    double rnorm = std::abs(mass - M);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = lap[i] - p.b * phi[i] + p.a * rho[i];
      rhs[static_cast<Eigen::Index>(i)] = -r;
      rnorm = std::max(rnorm, std::abs(r));
    }
    rhs[static_cast<Eigen::Index>(n)] = -(mass - M);
    res.iterations = it;
    res.residual = rnorm;
    if (rnorm <= tol) break;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * n + 1);
    const auto N = static_cast<Eigen::Index>(n);
    double dmass = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const bool wall = i == 0 || i + 1 == N;
      trip.emplace_back(i, i, -(wall ? 1.0 : 2.0) * kd - p.b + p.a * p.chi * drho[ui]);
      if (i > 0) trip.emplace_back(i, i - 1, kd);
      if (i + 1 < N) trip.emplace_back(i, i + 1, kd);
      trip.emplace_back(i, N, p.a * drho[ui]);
      trip.emplace_back(N, i, p.chi * drho[ui] * dx);
      dmass += drho[ui] * dx;
    }
    trip.emplace_back(N, N, dmass);
    Eigen::SparseMatrix<double> J(N + 1, N + 1);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw Error("discrete_equilibrium: singular Jacobian");
    const Eigen::VectorXd step = lu.solve(rhs);
    for (std::size_t i = 0; i < n; ++i) phi[i] += step[static_cast<Eigen::Index>(i)];
    C += step[N];
  }

  res.field = StateField(n);
  res.field.phi = phi;
  for (std::size_t i = 0; i < n; ++i) res.field.rho[i] = dens(p.chi * phi[i] + C);
  res.psi_constant = C;
  return res;
}

/// Discrete equilibrium seeded from a closed-form bump (C = 2 eps K).
inline DiscreteEquilibriumResult discrete_equilibrium(const BumpProfile& b, const Grid& g) {
  return discrete_equilibrium(sample_profile(b, g), 2.0 * b.params.epsilon * b.K, b.mass,
                              b.params);
}

}  // namespace chemofv
