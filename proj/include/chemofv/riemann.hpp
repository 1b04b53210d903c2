#pragma once

// Approximate Riemann solvers for the isentropic system
//   U_t + F(U)_x = 0,  U = (rho, rho u),  F = (rho u, rho u^2 + P(rho)).
// Every solver returns the numerical flux together with a speed sigma such
// that sigma dt <= dx keeps both half-cell density updates non-negative
// (Roe excepted).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chemofv/model.hpp"

namespace chemofv {

struct ConsState {
  double rho = 0.0;
  double q = 0.0;

  bool is_vacuum() const { return rho < vacuum_threshold; }
  double velocity() const { return is_vacuum() ? 0.0 : q / rho; }
};

inline ConsState mirror(const ConsState& s) { return {s.rho, -s.q}; }

struct FluxResult {
  double f_rho = 0.0;
  double f_q = 0.0;
  double sigma = 0.0;
  bool vacuum_fallback = false;  // set by roe_flux when it delegated to HLL
};

enum class Solver { roe, hll, suliciu };

inline std::string_view to_string(Solver s) {
  switch (s) {
    case Solver::roe: return "roe";
    case Solver::hll: return "hll";
    case Solver::suliciu: return "suliciu";
  }
  return "unknown";
}

inline Solver solver_from_string(std::string_view name) {
  if (name == "roe") return Solver::roe;
  if (name == "hll") return Solver::hll;
  if (name == "suliciu") return Solver::suliciu;
  throw DomainError("unknown solver '" + std::string(name) + "'");
}

namespace detail {

inline FluxResult physical_flux(double rho, double u, const PhysicalParams& p) {
  return {rho * u, rho * u * u + pressure(rho, p), 0.0};
}

/// Front speed of the rarefaction into vacuum, |u| + 2a/(gamma-1).
inline double vacuum_front_speed(double rho, double u, const PhysicalParams& p) {
  return std::abs(u) + 2.0 * sound_speed(rho, p) / (p.gamma - 1.0);
}

}  // namespace detail

inline FluxResult hll_flux(const ConsState& left, const ConsState& right,
                           const PhysicalParams& p) {
  const bool lvac = left.is_vacuum();
  const bool rvac = right.is_vacuum();
  if (lvac && rvac) return {};

  const double rl = lvac ? 0.0 : left.rho;
  const double rr = rvac ? 0.0 : right.rho;
  const double ul = left.velocity();
  const double ur = right.velocity();
  const double al = sound_speed(rl, p);
  const double ar = sound_speed(rr, p);

  double sl, sr;
  if (lvac) {
    sl = ur - 2.0 * ar / (p.gamma - 1.0);
    sr = ur + ar;
  } else if (rvac) {
    sl = ul - al;
    sr = ul + 2.0 * al / (p.gamma - 1.0);
  } else {
    sl = std::min(ul - al, ur - ar);
    sr = std::max(ul + al, ur + ar);
  }

  double sigma = std::max({std::abs(sl), std::abs(sr), std::abs(ul), std::abs(ur)});

  const FluxResult fl = detail::physical_flux(rl, ul, p);
  const FluxResult fr = detail::physical_flux(rr, ur, p);
  FluxResult out;
  if (sl >= 0.0) {
    out = fl;
  } else if (sr <= 0.0) {
    out = fr;
  } else {
    const double inv = 1.0 / (sr - sl);
    const double ql = rl * ul;
    const double qr = rr * ur;
    out.f_rho = (sr * fl.f_rho - sl * fr.f_rho + sl * sr * (rr - rl)) * inv;
    out.f_q = (sr * fl.f_q - sl * fr.f_q + sl * sr * (qr - ql)) * inv;
  }
  out.sigma = sigma;
  return out;
}

/// Suliciu relaxation solver with the two-speed choice
///   c_l/rho_l = a_l + k ((p_r - p_l)/c_r + u_l - u_r)_+,
///   c_r/rho_r = a_r + k ((p_l - p_r)/c_l + u_l - u_r)_+,    k = (gamma+1)/2,
/// evaluated starting from the side with the lower pressure so the solver is
/// mirror symmetric. A vacuum side gets c = 0.
inline FluxResult suliciu_flux(const ConsState& left, const ConsState& right,
                               const PhysicalParams& p) {
  const bool lvac = left.is_vacuum();
  const bool rvac = right.is_vacuum();
  if (lvac && rvac) return {};

  const double rl = lvac ? 0.0 : left.rho;
  const double rr = rvac ? 0.0 : right.rho;
  const double ul = left.velocity();
  const double ur = right.velocity();
  const double pl = pressure(rl, p);
  const double pr = pressure(rr, p);
  const double al = sound_speed(rl, p);
  const double ar = sound_speed(rr, p);
  const double k = 0.5 * (p.gamma + 1.0);

  double cl = 0.0;
  double cr = 0.0;
  if (lvac) {
    cr = rr * ar;
  } else if (rvac) {
    cl = rl * al;
  } else if (pr >= pl) {
    cl = rl * (al + k * positive_part((pr - pl) / (rr * ar) + ul - ur));
    cr = rr * (ar + k * positive_part((pl - pr) / cl + ul - ur));
  } else {
    cr = rr * (ar + k * positive_part((pl - pr) / (rl * al) + ul - ur));
    cl = rl * (al + k * positive_part((pr - pl) / cr + ul - ur));
  }

  const double csum = cl + cr;
  const double ustar = (cl * ul + cr * ur + pl - pr) / csum;
  const double pistar = (cr * pl + cl * pr - cl * cr * (ur - ul)) / csum;

  FluxResult out;
  double sigma = std::max(std::abs(ul), std::abs(ur));

  if (lvac) {
    const double sr = ur + ar;
    const double rstar = 1.0 / (1.0 / rr + (ur - ustar) / cr);
    if (ustar >= 0.0) {
      out = {};
    } else if (sr > 0.0) {
      out.f_rho = rstar * ustar;
      out.f_q = rstar * ustar * ustar + pistar;
    } else {
      out = detail::physical_flux(rr, ur, p);
    }
    sigma = std::max({sigma, std::abs(sr), std::abs(ustar),
                      detail::vacuum_front_speed(rr, ur, p)});
  } else if (rvac) {
    const double sl = ul - al;
    const double lstar = 1.0 / (1.0 / rl + (ustar - ul) / cl);
    if (sl >= 0.0) {
      out = detail::physical_flux(rl, ul, p);
    } else if (ustar > 0.0) {
      out.f_rho = lstar * ustar;
      out.f_q = lstar * ustar * ustar + pistar;
    } else {
      out = {};
    }
    sigma = std::max({sigma, std::abs(sl), std::abs(ustar),
                      detail::vacuum_front_speed(rl, ul, p)});
  } else {
    const double sl = ul - cl / rl;
    const double sr = ur + cr / rr;
    if (sl >= 0.0) {
      out = detail::physical_flux(rl, ul, p);
    } else if (ustar >= 0.0) {
      const double lstar = 1.0 / (1.0 / rl + (ustar - ul) / cl);
      out.f_rho = lstar * ustar;
      out.f_q = lstar * ustar * ustar + pistar;
    } else if (sr > 0.0) {
      const double rstar = 1.0 / (1.0 / rr + (ur - ustar) / cr);
      out.f_rho = rstar * ustar;
      out.f_q = rstar * ustar * ustar + pistar;
    } else {
      out = detail::physical_flux(rr, ur, p);
    }
    sigma = std::max({sigma, std::abs(sl), std::abs(sr)});
  }
  out.sigma = sigma;
  return out;
}

/// Roe linearisation with sqrt(rho)-weighted velocity, sound speed from the
/// arithmetic-mean density and a Harten entropy fix. Not positivity
/// preserving; falls back to HLL when either side is vacuum.
inline FluxResult roe_flux(const ConsState& left, const ConsState& right,
                           const PhysicalParams& p) {
  if (left.is_vacuum() || right.is_vacuum()) {
    FluxResult out = hll_flux(left, right, p);
    out.vacuum_fallback = true;
    return out;
  }
  const double rl = left.rho;
  const double rr = right.rho;
  const double ul = left.q / rl;
  const double ur = right.q / rr;
  const double sl = std::sqrt(rl);
  const double sr = std::sqrt(rr);
  const double uhat = (sl * ul + sr * ur) / (sl + sr);
  const double ahat = std::sqrt(p.epsilon * p.gamma) * std::pow(0.5 * (rl + rr), 0.5 * (p.gamma - 1.0));

  const double drho = rr - rl;
  const double dq = right.q - left.q;
  const double w1 = ((uhat + ahat) * drho - dq) / (2.0 * ahat);
  const double w2 = (dq - (uhat - ahat) * drho) / (2.0 * ahat);

  const double delta = 0.05 * ahat;
  const auto fixed = [delta](double lambda) {
    const double m = std::abs(lambda);
    return m < delta ? (lambda * lambda + delta * delta) / (2.0 * delta) : m;
  };
  const double l1 = fixed(uhat - ahat);
  const double l2 = fixed(uhat + ahat);

  const FluxResult fl = detail::physical_flux(rl, ul, p);
  const FluxResult fr = detail::physical_flux(rr, ur, p);
  FluxResult out;
  out.f_rho = 0.5 * (fl.f_rho + fr.f_rho) - 0.5 * (l1 * w1 + l2 * w2);
  out.f_q = 0.5 * (fl.f_q + fr.f_q) -
            0.5 * (l1 * w1 * (uhat - ahat) + l2 * w2 * (uhat + ahat));
  out.sigma = std::max({std::abs(uhat) + ahat, std::abs(ul) + sound_speed(rl, p),
                        std::abs(ur) + sound_speed(rr, p)});
  return out;
}

/// sqrt(rho)-weighted Roe velocity; exposed for tests.
inline double roe_average_velocity(const ConsState& left, const ConsState& right) {
  const double sl = std::sqrt(left.rho);
  const double sr = std::sqrt(right.rho);
  return (sl * left.velocity() + sr * right.velocity()) / (sl + sr);
}

inline FluxResult numerical_flux(Solver s, const ConsState& left, const ConsState& right,
                                 const PhysicalParams& p) {
  switch (s) {
    case Solver::roe: return roe_flux(left, right, p);
    case Solver::hll: return hll_flux(left, right, p);
    case Solver::suliciu: return suliciu_flux(left, right, p);
  }
  throw std::logic_error("numerical_flux: bad solver");
}

}  // namespace chemofv
