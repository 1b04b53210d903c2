#pragma once

// Model constants, grid and state containers for the 1D hyperbolic-parabolic
// chemotaxis system
//
//   rho_t + (rho u)_x = 0
//   (rho u)_t + (rho u^2 + P(rho))_x = -alpha rho u + chi rho phi_x
//   phi_t = D phi_xx + a rho - b phi
//
// with the isentropic pressure law P(rho) = eps rho^gamma.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemofv {

/// Densities below this value are treated as vacuum (u := 0).
inline constexpr double vacuum_threshold = 1e-13;

/// Smallest admissible adiabatic exponent.
inline constexpr double min_gamma = 1.0 + 1e-6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

struct PhysicalParams {
  double epsilon = 1.0;  // pressure coefficient
  double gamma = 2.0;    // adiabatic exponent
  double alpha = 1.0;    // friction
  double chi = 50.0;     // chemosensitivity
  double D = 1.0;        // chemoattractant diffusivity
  double a = 1.0;        // production rate
  double b = 1.0;        // degradation rate
  double L = 1.0;        // domain length

  bool operator==(const PhysicalParams&) const = default;

  /// Throws DomainError naming the first violated constraint.
  void validate() const {
    if (!(gamma >= min_gamma)) throw DomainError("gamma must exceed 1");
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (!(D > 0.0)) throw DomainError("D must be positive");
    if (!(L > 0.0)) throw DomainError("L must be positive");
    if (!(alpha >= 0.0)) throw DomainError("alpha must be non-negative");
    if (!(chi >= 0.0)) throw DomainError("chi must be non-negative");
    if (!(a >= 0.0)) throw DomainError("a must be non-negative");
    if (!(b >= 0.0)) throw DomainError("b must be non-negative");
  }
};

/// Uniform cell-centred grid on [0, L].
struct Grid {
  std::size_t n_cells = 0;
  double length = 0.0;
  double dx = 0.0;

  Grid() = default;
  Grid(std::size_t n, double L) : n_cells(n), length(L), dx(L / static_cast<double>(n)) {
    if (n < 3) throw DomainError("grid needs at least 3 cells");
    if (!(L > 0.0)) throw DomainError("grid length must be positive");
  }

  /// Grid with the cell width closest to `dx` that tiles [0, L].
  static Grid from_dx(double dx, double L) {
    if (!(dx > 0.0)) throw DomainError("dx must be positive");
    return Grid(static_cast<std::size_t>(std::llround(L / dx)), L);
  }

  double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx; }
  double face(std::size_t i) const { return static_cast<double>(i) * dx; }

  std::vector<double> centers() const {
    std::vector<double> x(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) x[i] = center(i);
    return x;
  }

  bool operator==(const Grid&) const = default;
};

/// Cell averages of density, momentum and chemoattractant.
struct StateField {
  std::vector<double> rho;
  std::vector<double> q;
  std::vector<double> phi;

  StateField() = default;
  explicit StateField(std::size_t n) : rho(n, 0.0), q(n, 0.0), phi(n, 0.0) {}

  std::size_t size() const { return rho.size(); }

  double velocity(std::size_t i) const {
    return rho[i] > vacuum_threshold ? q[i] / rho[i] : 0.0;
  }

  double mass(double dx) const {
    double m = 0.0;
    for (double r : rho) m += r;
    return m * dx;
  }

  bool operator==(const StateField&) const = default;
};

inline double pressure(double rho, const PhysicalParams& p) {
  if (rho < 0.0) throw DomainError("pressure: negative density");
  return p.epsilon * std::pow(rho, p.gamma);
}

/// P'(rho)^(1/2).
inline double sound_speed(double rho, const PhysicalParams& p) {
  if (rho <= 0.0) return 0.0;
  return std::sqrt(p.epsilon * p.gamma) * std::pow(rho, 0.5 * (p.gamma - 1.0));
}

/// Enthalpy-like function e(rho) + P(rho)/rho = eps gamma/(gamma-1) rho^(gamma-1).
inline double psi(double rho, const PhysicalParams& p) {
  if (rho < 0.0) throw DomainError("psi: negative density");
  return p.epsilon * p.gamma / (p.gamma - 1.0) * std::pow(rho, p.gamma - 1.0);
}

inline double psi_inv(double y, const PhysicalParams& p) {
  if (y < 0.0) throw DomainError("psi_inv: negative argument");
  return std::pow((p.gamma - 1.0) * y / (p.epsilon * p.gamma), 1.0 / (p.gamma - 1.0));
}

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }
inline double negative_part(double x) { return x < 0.0 ? x : 0.0; }

}  // namespace chemofv
