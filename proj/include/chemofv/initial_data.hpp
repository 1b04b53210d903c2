#pragma once

// Library of initial conditions: sine-modulated densities, closed-form bumps
// and the two zero-mass perturbations of a lateral bump.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "chemofv/model.hpp"
#include "chemofv/steady.hpp"

namespace chemofv {

enum class InitialKind {
  sine,             // xi (1 + sin(4 pi |x - L/4|))
  sine_offset,      // xi (offset + sin(4 pi |x - L/4|))
  lateral_bump,     // closed-form lateral bump of mass `mass`
  centered_bump,    // closed-form centred bump of mass `mass`
  lateral_shift,    // lateral bump with free boundary moved by `delta`
  lateral_plateau,  // plateau perturbation on [x1_frac, x2_frac] * xbar
  discrete_equilibrium,  // Newton-refined discrete equilibrium seeded by the lateral bump
  explicit_field,
};

inline std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::sine: return "sine";
    case InitialKind::sine_offset: return "sine_offset";
    case InitialKind::lateral_bump: return "lateral_bump";
    case InitialKind::centered_bump: return "centered_bump";
    case InitialKind::lateral_shift: return "lateral_shift";
    case InitialKind::lateral_plateau: return "lateral_plateau";
    case InitialKind::discrete_equilibrium: return "discrete_equilibrium";
    case InitialKind::explicit_field: return "explicit";
  }
  return "unknown";
}

inline InitialKind initial_kind_from_string(std::string_view s) {
  for (auto k : {InitialKind::sine, InitialKind::sine_offset, InitialKind::lateral_bump,
                 InitialKind::centered_bump, InitialKind::lateral_shift,
                 InitialKind::lateral_plateau, InitialKind::discrete_equilibrium,
                 InitialKind::explicit_field})
    if (s == to_string(k)) return k;
  throw DomainError("unknown initial preset '" + std::string(s) + "'");
}

struct InitialSpec {
  InitialKind kind = InitialKind::sine;
  double xi = 1.0;
  double offset = 1.5;
  std::optional<double> target_mass;  // rescales xi so that sum rho_i dx = target
  double mass = 1.0 + 1.0 / std::numbers::pi;  // closed-form bump kinds
  double delta = 0.1;
  double x1_frac = 0.6;
  double x2_frac = 0.8;
  SampleMode sampling = SampleMode::center;
  StateField field;  // explicit_field only

  bool operator==(const InitialSpec&) const = default;
};

/// Jump location x* in (x1, x2) that keeps the plateau perturbation mass-neutral.
inline double plateau_jump(const BumpProfile& b, double x1, double x2) {
  const double r1 = b.rho(x1);
  const double r2 = b.rho(x2);
  const double integral = b.rho_integral(x1, x2);
  return (integral - r2 * x2 + r1 * x1) / (r1 - r2);
}

inline StateField initial_data(const InitialSpec& spec, const Grid& g, const PhysicalParams& p) {
  const double L = p.L;
  switch (spec.kind) {
    case InitialKind::sine:
    case InitialKind::sine_offset: {
      const double base = spec.kind == InitialKind::sine ? 1.0 : spec.offset;
      StateField f(g.n_cells);
      for (std::size_t i = 0; i < g.n_cells; ++i)
        f.rho[i] = base + std::sin(4.0 * std::numbers::pi * std::abs(g.center(i) - 0.25 * L));
      double xi = spec.xi;
      if (spec.target_mass) {
        const double m = f.mass(g.dx);
        if (!(m > 0.0)) throw DomainError("cannot rescale a zero-mass profile");
        xi = *spec.target_mass / m;
      }
      for (double& r : f.rho) {
        r *= xi;
        if (r < 0.0) throw DomainError("sine initial datum is negative; raise offset");
      }
      return f;
    }
    case InitialKind::lateral_bump:
      return sample_profile(lateral_bump(p, spec.mass), g, spec.sampling);
    case InitialKind::centered_bump:
      return sample_profile(centered_bump(p, spec.mass), g, spec.sampling);
    case InitialKind::lateral_shift: {
      const BumpProfile exact = lateral_bump(p, spec.mass);
      return sample_profile(lateral_bump_at(p, spec.mass, exact.xbar + spec.delta), g,
                            spec.sampling);
    }
    case InitialKind::lateral_plateau: {
      const BumpProfile exact = lateral_bump(p, spec.mass);
      if (!(0.0 < spec.x1_frac && spec.x1_frac < spec.x2_frac && spec.x2_frac < 1.0))
        throw DomainError("plateau needs 0 < x1 < x2 < xbar");
      const double x1 = spec.x1_frac * exact.xbar;
      const double x2 = spec.x2_frac * exact.xbar;
      const double xs = plateau_jump(exact, x1, x2);
      const double r1 = exact.rho(x1);
      const double r2 = exact.rho(x2);
      StateField f = sample_profile(exact, g, SampleMode::center);
      for (std::size_t i = 0; i < g.n_cells; ++i) {
        const double x = g.center(i);
        if (x > x1 && x <= xs) f.rho[i] = r1;
        else if (x > xs && x <= x2) f.rho[i] = r2;
      }
      return f;
    }
    case InitialKind::discrete_equilibrium:
      return discrete_equilibrium(lateral_bump(p, spec.mass), g).field;
    case InitialKind::explicit_field:
      if (spec.field.size() != g.n_cells) throw DomainError("explicit field has wrong size");
      return spec.field;
  }
  throw DomainError("unhandled initial preset");
}

}  // namespace chemofv
