#pragma once

// Hyperbolic update for (rho, rho u) with the chemotactic and friction
// sources.
//
// The well-balanced path reconstructs interface states from the local
// equilibrium  Psi(rho) - chi phi + alpha * int u = const  and upwinds the
// source onto the faces, so that states with u = 0 and
// Psi(rho_i) - chi phi_i constant are reproduced exactly. Two non-balanced
// baselines (centred finite volume, Lax-Friedrichs finite difference) are
// kept for comparisons.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemofv/model.hpp"
#include "chemofv/riemann.hpp"

namespace chemofv {

enum class Scheme { well_balanced, centered_fv, finite_difference };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::well_balanced: return "well_balanced";
    case Scheme::centered_fv: return "centered_fv";
    case Scheme::finite_difference: return "finite_difference";
  }
  return "unknown";
}

inline Scheme scheme_from_string(std::string_view name) {
  if (name == "well_balanced" || name == "vw") return Scheme::well_balanced;
  if (name == "centered_fv" || name == "vc") return Scheme::centered_fv;
  if (name == "finite_difference" || name == "dc") return Scheme::finite_difference;
  throw DomainError("unknown scheme '" + std::string(name) + "'");
}

/// Reconstructed states U-_{i+1/2} (from cell i) and U+_{i+1/2} (from cell i+1).
struct InterfacePair {
  ConsState minus;
  ConsState plus;
};

/// Face-attached momentum sources of one cell; the mass components vanish.
struct SourcePair {
  double s_minus = 0.0;  // P(rho-_{i+1/2}) - P(rho_i)
  double s_plus = 0.0;   // P(rho_i) - P(rho+_{i-1/2})

  double momentum() const { return s_minus + s_plus; }
  static constexpr double mass() { return 0.0; }
};

struct SchemeOptions {
  // Quadrature weight of  alpha * int_{x_i}^{x_{i+1/2}} u dx ~ weight * alpha dx u.
  // 1.0 reproduces the published reconstruction; 0.5 is the midpoint-exact value.
  double friction_weight = 1.0;

  bool operator==(const SchemeOptions&) const = default;
};

/// Rounding-level negative densities above this are clamped silently.
inline constexpr double negative_rounding_tol = 1e-14;
/// A well-balanced step with a density below this is rejected.
inline constexpr double rejection_threshold = -1e-12;

struct StepStats {
  std::size_t negative_cells = 0;  // cells that went below -negative_rounding_tol
  std::size_t roe_fallbacks = 0;
  double min_rho = std::numeric_limits<double>::infinity();  // before clamping
  bool rejected = false;
};

struct StepResult {
  StateField field;
  StepStats stats;
};

inline InterfacePair reconstruct(const ConsState& ui, const ConsState& uip1, double phi_i,
                                 double phi_ip1, double dx, const PhysicalParams& p,
                                 const SchemeOptions& opt = {}) {
  const double phi_face = std::min(phi_i, phi_ip1);
  const double vel_i = ui.velocity();
  const double vel_ip1 = uip1.velocity();
  const double rho_i = std::max(ui.rho, 0.0);
  const double rho_ip1 = std::max(uip1.rho, 0.0);
  const double w = opt.friction_weight * p.alpha * dx;

  InterfacePair out;
  const double ym = psi(rho_i, p) - w * positive_part(vel_i) + p.chi * (phi_face - phi_i);
  const double yp = psi(rho_ip1, p) + w * negative_part(vel_ip1) + p.chi * (phi_face - phi_ip1);
  out.minus.rho = ym > 0.0 ? psi_inv(ym, p) : 0.0;
  out.plus.rho = yp > 0.0 ? psi_inv(yp, p) : 0.0;
  // Psi^-1(Psi(rho)) may exceed rho by an ulp; keep the contraction exact.
  out.minus.rho = std::min(out.minus.rho, rho_i);
  out.plus.rho = std::min(out.plus.rho, rho_ip1);
  out.minus.q = out.minus.rho * vel_i;
  out.plus.q = out.plus.rho * vel_ip1;
  return out;
}

inline SourcePair source_pair(double rho_i, const InterfacePair& iface_left,
                              const InterfacePair& iface_right, const PhysicalParams& p) {
  const double p_i = pressure(std::max(rho_i, 0.0), p);
  return {pressure(iface_right.minus.rho, p) - p_i, p_i - pressure(iface_left.plus.rho, p)};
}

namespace detail {

/// Cell i (0-based) with mirrored wall ghosts at i = -1 and i = N.
inline ConsState cell_state(const StateField& f, std::ptrdiff_t i) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  if (i < 0) return mirror({f.rho[0], f.q[0]});
  if (i >= n) return mirror({f.rho[n - 1], f.q[n - 1]});
  return {f.rho[static_cast<std::size_t>(i)], f.q[static_cast<std::size_t>(i)]};
}

inline double cell_phi(const StateField& f, std::ptrdiff_t i) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  return f.phi[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))];
}

inline double grid_dx(const StateField& f, const PhysicalParams& p) {
  return p.L / static_cast<double>(f.size());
}

/// Clamps negatives, zeroes vacuum momentum and fills the stats.
inline void finalize(StateField& out, StepStats& stats, bool reject_on_negative) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    double& r = out.rho[i];
    stats.min_rho = std::min(stats.min_rho, r);
    if (r < 0.0) {
      if (r < -negative_rounding_tol) ++stats.negative_cells;
      if (reject_on_negative && r < rejection_threshold) stats.rejected = true;
      r = 0.0;
    }
    if (r < vacuum_threshold) out.q[i] = 0.0;
  }
}

}  // namespace detail

/// All N+1 reconstructed face pairs; face f sits between cells f-1 and f.
inline std::vector<InterfacePair> reconstruct_all(const StateField& f, const PhysicalParams& p,
                                                  const SchemeOptions& opt = {}) {
  const double dx = detail::grid_dx(f, p);
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  std::vector<InterfacePair> faces(static_cast<std::size_t>(n + 1));
  for (std::ptrdiff_t k = 0; k <= n; ++k) {
    faces[static_cast<std::size_t>(k)] =
        reconstruct(detail::cell_state(f, k - 1), detail::cell_state(f, k),
                    detail::cell_phi(f, k - 1), detail::cell_phi(f, k), dx, p, opt);
  }
  return faces;
}

/// Largest interface speed over the reconstructed face states.
inline double max_speed(const StateField& f, Solver solver, const PhysicalParams& p,
                        const SchemeOptions& opt = {}) {
  double lambda = 0.0;
  for (const InterfacePair& face : reconstruct_all(f, p, opt))
    lambda = std::max(lambda, numerical_flux(solver, face.minus, face.plus, p).sigma);
  return lambda;
}

/// Largest interface speed over raw neighbouring cell states.
inline double max_speed_raw(const StateField& f, Solver solver, const PhysicalParams& p) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  double lambda = 0.0;
  for (std::ptrdiff_t k = 0; k <= n; ++k) {
    const FluxResult r =
        numerical_flux(solver, detail::cell_state(f, k - 1), detail::cell_state(f, k), p);
    lambda = std::max(lambda, r.sigma);
  }
  return lambda;
}

inline StepResult hyperbolic_step(const StateField& f, double dt, Solver solver,
                                  const PhysicalParams& p, const SchemeOptions& opt = {}) {
  const std::size_t n = f.size();
  const double dx = detail::grid_dx(f, p);
  const double lam = dt / dx;

  const std::vector<InterfacePair> faces = reconstruct_all(f, p, opt);
  std::vector<FluxResult> flux(n + 1);
  StepResult res;
  for (std::size_t k = 0; k <= n; ++k) {
    flux[k] = numerical_flux(solver, faces[k].minus, faces[k].plus, p);
    if (flux[k].vacuum_fallback) ++res.stats.roe_fallbacks;
  }
  flux[0].f_rho = 0.0;
  flux[n].f_rho = 0.0;

  res.field = f;
  StateField& out = res.field;
  for (std::size_t i = 0; i < n; ++i) {
    const SourcePair s = source_pair(f.rho[i], faces[i], faces[i + 1], p);
    out.rho[i] = f.rho[i] - lam * (flux[i + 1].f_rho - flux[i].f_rho);
    out.q[i] = f.q[i] - lam * (flux[i + 1].f_q - flux[i].f_q) + lam * s.momentum();
  }
  detail::finalize(out, res.stats, solver != Solver::roe);
  return res;
}

/// Raw-state fluxes with the pointwise source -alpha q_i + chi rho_i (phi_{i+1} - phi_{i-1})/(2 dx).
inline StepResult hyperbolic_step_centered_fv(const StateField& f, double dt, Solver solver,
                                              const PhysicalParams& p) {
  const std::size_t n = f.size();
  const double dx = detail::grid_dx(f, p);
  const double lam = dt / dx;
  const auto sn = static_cast<std::ptrdiff_t>(n);

  std::vector<FluxResult> flux(n + 1);
  StepResult res;
  for (std::ptrdiff_t k = 0; k <= sn; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    flux[uk] = numerical_flux(solver, detail::cell_state(f, k - 1), detail::cell_state(f, k), p);
    if (flux[uk].vacuum_fallback) ++res.stats.roe_fallbacks;
  }
  flux[0].f_rho = 0.0;
  flux[n].f_rho = 0.0;

  res.field = f;
  StateField& out = res.field;
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double dphi = (detail::cell_phi(f, i + 1) - detail::cell_phi(f, i - 1)) / (2.0 * dx);
    const double source = -p.alpha * f.q[ui] + p.chi * f.rho[ui] * dphi;
    out.rho[ui] = f.rho[ui] - lam * (flux[ui + 1].f_rho - flux[ui].f_rho);
    out.q[ui] = f.q[ui] - lam * (flux[ui + 1].f_q - flux[ui].f_q) + dt * source;
  }
  detail::finalize(out, res.stats, false);
  return res;
}

/// Lax-Friedrichs finite differences with the centred source.
inline StepResult finite_difference_step(const StateField& f, double dt,
                                         const PhysicalParams& p) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  const double dx = detail::grid_dx(f, p);
  const double lam = dt / dx;

  const auto phys = [&p](const ConsState& s) {
    const double u = s.velocity();
    const double r = std::max(s.rho, 0.0);
    return detail::physical_flux(r, u, p);
  };

  // Rusanov-type viscosity theta = lam * max(|u| + c). theta = 1 is the
  // classical Lax-Friedrichs average, whose odd-even mode is undamped.
  double speed = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const ConsState s = detail::cell_state(f, i);
    speed = std::max(speed, std::abs(s.velocity()) + sound_speed(std::max(s.rho, 0.0), p));
  }
  const double theta = std::min(1.0, lam * speed);

  StepResult res;
  res.field = f;
  StateField& out = res.field;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const ConsState w = detail::cell_state(f, i - 1);
    const ConsState e = detail::cell_state(f, i + 1);
    const FluxResult fw = phys(w);
    const FluxResult fe = phys(e);
    const double dphi = (detail::cell_phi(f, i + 1) - detail::cell_phi(f, i - 1)) / (2.0 * dx);
    const double source = -p.alpha * f.q[ui] + p.chi * f.rho[ui] * dphi;
    out.rho[ui] = f.rho[ui] - 0.5 * lam * (fe.f_rho - fw.f_rho) +
                  0.5 * theta * (w.rho - 2.0 * f.rho[ui] + e.rho);
    out.q[ui] = f.q[ui] - 0.5 * lam * (fe.f_q - fw.f_q) + 0.5 * theta * (w.q - 2.0 * f.q[ui] + e.q) +
                dt * source;
  }
  detail::finalize(out, res.stats, false);
  return res;
}

inline StepResult scheme_step(Scheme scheme, const StateField& f, double dt, Solver solver,
                              const PhysicalParams& p, const SchemeOptions& opt = {}) {
  switch (scheme) {
    case Scheme::well_balanced: return hyperbolic_step(f, dt, solver, p, opt);
    case Scheme::centered_fv: return hyperbolic_step_centered_fv(f, dt, solver, p);
    case Scheme::finite_difference: return finite_difference_step(f, dt, p);
  }
  throw std::logic_error("scheme_step: bad scheme");
}

}  // namespace chemofv
