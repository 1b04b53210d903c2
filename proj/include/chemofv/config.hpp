#pragma once

// Flat key = value configuration with dotted namespaces, plus the catalogue of
// figure presets. Every key is documented in `config_keys()`; unknown keys are
// rejected. `serialize_config` writes a document that reparses to the same
// RunConfig.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "chemofv/driver.hpp"

namespace chemofv {

/// Parse or validation failure. `line` is 0 when not tied to a document line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, std::size_t line = 0, std::string key = {})
      : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line), key_(std::move(key)) {}
  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw DomainError("expected a finite number, got '" + std::string(v) + "'");
  return x;
}

inline std::size_t parse_count(std::string_view v) {
  unsigned long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw DomainError("expected a non-negative integer, got '" + std::string(v) + "'");
  return static_cast<std::size_t>(x);
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline Coupling coupling_from_string(std::string_view s) {
  for (auto c : {Coupling::hyperbolic_first, Coupling::parabolic_first})
    if (s == to_string(c)) return c;
  throw DomainError("unknown coupling '" + std::string(s) + "'");
}

inline PhiSource phi_source_from_string(std::string_view s) {
  for (auto c : {PhiSource::explicit_rho, PhiSource::average_rho})
    if (s == to_string(c)) return c;
  throw DomainError("unknown phi source '" + std::string(s) + "'");
}

inline ReferenceKind reference_from_string(std::string_view s) {
  for (auto c : {ReferenceKind::none, ReferenceKind::lateral_bump, ReferenceKind::centered_bump})
    if (s == to_string(c)) return c;
  throw DomainError("unknown reference '" + std::string(s) + "'");
}

inline SampleMode sampling_from_string(std::string_view s) {
  if (s == "center") return SampleMode::center;
  if (s == "gauss3") return SampleMode::gauss3;
  throw DomainError("unknown sampling '" + std::string(s) + "'");
}

inline std::string_view to_string(SampleMode m) { return m == SampleMode::center ? "center" : "gauss3"; }

}  // namespace detail

struct ConfigKey {
  std::string name;
  std::string doc;  // includes the default
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

inline const std::vector<ConfigKey>& config_keys() {
  using detail::format_double;
  using detail::parse_count;
  using detail::parse_double;
#define CHEMOFV_NUM(key, doc, member)                                                   \
  ConfigKey {                                                                           \
    key, doc, [](RunConfig& c, std::string_view v) { c.member = parse_double(v); },     \
        [](const RunConfig& c) { return format_double(c.member); }                      \
  }
  static const std::vector<ConfigKey> keys = {
      CHEMOFV_NUM("model.epsilon", "pressure coefficient, P = epsilon rho^gamma (1)", params.epsilon),
      CHEMOFV_NUM("model.gamma", "adiabatic exponent > 1 (2)", params.gamma),
      CHEMOFV_NUM("model.alpha", "friction coefficient >= 0 (1)", params.alpha),
      CHEMOFV_NUM("model.chi", "chemosensitivity >= 0 (50)", params.chi),
      CHEMOFV_NUM("model.D", "chemoattractant diffusivity > 0 (1)", params.D),
      CHEMOFV_NUM("model.a", "production rate >= 0 (1)", params.a),
      CHEMOFV_NUM("model.b", "degradation rate >= 0 (1)", params.b),
      CHEMOFV_NUM("model.L", "domain length > 0 (1)", params.L),
      ConfigKey{"grid.n", "number of cells >= 3 (100)",
                [](RunConfig& c, std::string_view v) { c.n_cells = parse_count(v); },
                [](const RunConfig& c) { return std::to_string(c.n_cells); }},
      ConfigKey{"grid.dx", "cell width; sets grid.n = round(L/dx) once all keys are read",
                nullptr, nullptr},
      ConfigKey{"scheme.solver", "roe | hll | suliciu (suliciu)",
                [](RunConfig& c, std::string_view v) { c.solver = solver_from_string(v); },
                [](const RunConfig& c) { return std::string(to_string(c.solver)); }},
      ConfigKey{"scheme.kind", "well_balanced | centered_fv | finite_difference (well_balanced)",
                [](RunConfig& c, std::string_view v) { c.scheme = scheme_from_string(v); },
                [](const RunConfig& c) { return std::string(to_string(c.scheme)); }},
      CHEMOFV_NUM("scheme.friction_weight", "weight of alpha dx (u)+ in the reconstruction (1)",
                  options.friction_weight),
      ConfigKey{"scheme.coupling", "hyperbolic_first | parabolic_first (hyperbolic_first)",
                [](RunConfig& c, std::string_view v) { c.coupling = detail::coupling_from_string(v); },
                [](const RunConfig& c) { return std::string(to_string(c.coupling)); }},
      ConfigKey{"scheme.phi_source", "explicit | average: density fed to the parabolic step (explicit)",
                [](RunConfig& c, std::string_view v) { c.phi_source = detail::phi_source_from_string(v); },
                [](const RunConfig& c) { return std::string(to_string(c.phi_source)); }},
      CHEMOFV_NUM("run.t_final", "final time (1)", t_final),
      CHEMOFV_NUM("run.cfl", "CFL factor in (0, 1] (0.9)", cfl),
      CHEMOFV_NUM("run.dt_max", "upper bound on the time step (0.01)", dt_max),
      CHEMOFV_NUM("run.residue_tol", "steady-state threshold on the density residue (1e-10)", residue_tol),
      ConfigKey{"run.steady_checks", "consecutive quiet outputs that end a run (10)",
                [](RunConfig& c, std::string_view v) { c.steady_checks = parse_count(v); },
                [](const RunConfig& c) { return std::to_string(c.steady_checks); }},
      ConfigKey{"run.reference", "none | lateral_bump | centered_bump: analytic profile for error columns (none)",
                [](RunConfig& c, std::string_view v) { c.reference_kind = detail::reference_from_string(v); },
                [](const RunConfig& c) { return std::string(to_string(c.reference_kind)); }},
      ConfigKey{"initial.kind",
                "sine | sine_offset | lateral_bump | centered_bump | lateral_shift | lateral_plateau | "
                "discrete_equilibrium (sine)",
                [](RunConfig& c, std::string_view v) {
                  c.initial.kind = initial_kind_from_string(v);
                  if (c.initial.kind == InitialKind::explicit_field)
                    throw DomainError("explicit fields cannot be given in a config document");
                },
                [](const RunConfig& c) { return std::string(to_string(c.initial.kind)); }},
      CHEMOFV_NUM("initial.xi", "amplitude of the sine data (1)", initial.xi),
      CHEMOFV_NUM("initial.offset", "constant of sine_offset data (1.5)", initial.offset),
      ConfigKey{"initial.target_mass", "rescale sine data to this discrete mass (unset)",
                [](RunConfig& c, std::string_view v) {
                  if (v == "none") c.initial.target_mass.reset();
                  else c.initial.target_mass = parse_double(v);
                },
                [](const RunConfig& c) {
                  return c.initial.target_mass ? format_double(*c.initial.target_mass) : std::string("none");
                }},
      CHEMOFV_NUM("initial.mass", "mass of closed-form bump data (1 + 1/pi)", initial.mass),
      CHEMOFV_NUM("initial.delta", "interface shift of lateral_shift (0.1)", initial.delta),
      CHEMOFV_NUM("initial.x1_frac", "plateau start as a fraction of xbar (0.6)", initial.x1_frac),
      CHEMOFV_NUM("initial.x2_frac", "plateau end as a fraction of xbar (0.8)", initial.x2_frac),
      ConfigKey{"initial.sampling", "center | gauss3: projection of closed-form profiles (center)",
                [](RunConfig& c, std::string_view v) { c.initial.sampling = detail::sampling_from_string(v); },
                [](const RunConfig& c) { return std::string(detail::to_string(c.initial.sampling)); }},
      CHEMOFV_NUM("output.diagnostics_dt", "diagnostics cadence (1)", output_dt),
      CHEMOFV_NUM("output.snapshot_dt", "snapshot cadence; 0 keeps initial and final only (0)", snapshot_dt),
  };
#undef CHEMOFV_NUM
  return keys;
}

inline const ConfigKey* find_config_key(std::string_view name) {
  for (const ConfigKey& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

// ---------------------------------------------------------------- presets

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct ExperimentPreset {
  std::string name;
  std::string citation;
  RunConfig config;
  std::optional<SweepAxis> sweep;
};

namespace detail {

/// eps = D = a = b = L = 1, chi = 50, gamma = 2.
inline RunConfig standard_setup() {
  RunConfig c;
  c.params = PhysicalParams{1.0, 2.0, 0.0, 50.0, 1.0, 1.0, 1.0, 1.0};
  c.t_final = 100.0;
  return c;
}

/// eps = 1, D = 0.1, a = 20, b = 10, chi = 10.
inline RunConfig strong_production_setup(double gamma, double L) {
  RunConfig c;
  c.params = PhysicalParams{1.0, gamma, 0.0, 10.0, 0.1, 20.0, 10.0, L};
  c.t_final = 100.0;
  return c;
}

inline void set_dx(RunConfig& c, double dx) {
  c.n_cells = static_cast<std::size_t>(std::llround(c.params.L / dx));
}

}  // namespace detail

inline const std::vector<ExperimentPreset>& presets() {
  static const std::vector<ExperimentPreset> list = [] {
    std::vector<ExperimentPreset> v;
    {
      RunConfig c = detail::standard_setup();
      detail::set_dx(c, 0.01);
      v.push_back({"fig1", "solver comparison, eps=D=a=b=L=1, chi=50, gamma=2, rho0 = 1 + sin(4 pi |x - L/4|)",
                   c, SweepAxis{"scheme.solver", {"roe", "hll", "suliciu"}}});
    }
    {
      RunConfig c = detail::strong_production_setup(3.0, 1.0);
      c.initial.target_mass = 1.0;
      c.t_final = 5.0;
      detail::set_dx(c, 0.01);
      v.push_back({"fig2", "solver comparison at T=5, gamma=3, eps=1, D=0.1, a=20, b=10, chi=10, M=1", c,
                   SweepAxis{"scheme.solver", {"roe", "hll", "suliciu"}}});
    }
    {
      // Sine data at this resolution settle on multi-bump states, which the
      // single lateral-bump reference cannot be compared with.
      RunConfig c = detail::strong_production_setup(2.0, 1.0);
      c.initial.kind = InitialKind::lateral_shift;
      c.initial.mass = 1.0;
      c.initial.delta = 0.02;
      c.reference_kind = ReferenceKind::lateral_bump;
      detail::set_dx(c, 0.05);
      v.push_back({"fig3", "source discretizations VW/VC/DC on a lateral bump, gamma=2, M=1, L=1, D=0.1, a=20, b=10, chi=10", c,
                   SweepAxis{"scheme.kind", {"well_balanced", "centered_fv", "finite_difference"}}});
    }
    {
      RunConfig c = detail::standard_setup();
      detail::set_dx(c, 0.01);
      v.push_back({"fig4", "asymptotic momentum, finite differences vs well-balanced, eps=D=a=b=L=1, chi=50", c,
                   SweepAxis{"scheme.kind", {"finite_difference", "well_balanced"}}});
    }
    {
      RunConfig c = detail::standard_setup();
      c.initial.kind = InitialKind::lateral_shift;
      c.initial.delta = 0.1;
      c.reference_kind = ReferenceKind::lateral_bump;
      detail::set_dx(c, 0.01);
      v.push_back({"fig5", "lateral bump, interface shifted by delta=0.1, M = 1 + 1/pi, chi=50", c, std::nullopt});
    }
    {
      RunConfig c = detail::standard_setup();
      c.initial.kind = InitialKind::lateral_plateau;
      c.reference_kind = ReferenceKind::lateral_bump;
      detail::set_dx(c, 0.01);
      v.push_back({"fig6", "lateral bump, zero-mass plateau on [0.6 xbar, 0.8 xbar], M = 1 + 1/pi", c,
                   std::nullopt});
    }
    {
      RunConfig c = detail::standard_setup();
      c.params.chi = 3.0;
      c.initial.target_mass = 1.3183;
      detail::set_dx(c, 0.01);
      v.push_back({"fig7", "domain length L in {1,5,7,30}, chi=3, eps=D=a=b=1, M=1.3183", c,
                   SweepAxis{"model.L", {"1", "5", "7", "30"}}});
    }
    {
      RunConfig c = detail::standard_setup();
      c.params.L = 7.0;
      c.initial.target_mass = 1.3183;
      detail::set_dx(c, 0.01);
      v.push_back({"fig8", "chemosensitivity chi in {3,5,50,200}, L=7, eps=D=a=b=1, M=1.3183", c,
                   SweepAxis{"model.chi", {"3", "5", "50", "200"}}});
    }
    {
      RunConfig c = detail::strong_production_setup(2.0, 3.0);
      c.initial.kind = InitialKind::sine_offset;
      c.initial.offset = 1.5;
      detail::set_dx(c, 0.01);
      v.push_back({"fig9", "adiabatic exponent gamma in {2,3,4,5}, L=3, eps=1, D=0.1, a=20, b=10, chi=10,"
                           " rho0 = 1.5 + sin(4 pi |x - L/4|)",
                   c, SweepAxis{"model.gamma", {"2", "3", "4", "5"}}});
    }
    {
      RunConfig c = detail::strong_production_setup(2.0, 3.0);
      detail::set_dx(c, 0.01);
      v.push_back({"fig10", "initial mass xi in {0.1,1,5,10}, gamma=2, eps=1, D=0.1, a=20, b=10, chi=10", c,
                   SweepAxis{"initial.xi", {"0.1", "1", "5", "10"}}});
    }
    {
      RunConfig c = detail::strong_production_setup(3.0, 3.0);
      detail::set_dx(c, 0.01);
      v.push_back({"fig10_gamma3", "initial mass xi in {0.1,1,5,10}, gamma=3, eps=1, D=0.1, a=20, b=10, chi=10",
                   c, SweepAxis{"initial.xi", {"0.1", "1", "5", "10"}}});
    }
    return v;
  }();
  return list;
}

inline const ExperimentPreset& find_preset(std::string_view name) {
  for (const ExperimentPreset& p : presets())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + std::string(name) + "'", 0, "preset");
}

// ---------------------------------------------------------------- parsing

/// A parsed document: the run configuration plus the preset's sweep, if any.
struct Experiment {
  std::string preset;
  RunConfig config;
  std::optional<SweepAxis> sweep;
};

/// Set one key. `grid.dx` is resolved against the current model.L.
inline void apply_override(RunConfig& c, std::string_view key, std::string_view value) {
  if (key == "grid.dx") {
    const double dx = detail::parse_double(value);
    if (!(dx > 0.0)) throw ConfigError("grid.dx must be positive", 0, "grid.dx");
    detail::set_dx(c, dx);
    return;
  }
  const ConfigKey* k = find_config_key(key);
  if (!k) throw ConfigError("unknown key '" + std::string(key) + "'", 0, std::string(key));
  try {
    k->set(c, value);
  } catch (const DomainError& e) {
    throw ConfigError(std::string(key) + ": " + e.what(), 0, std::string(key));
  }
}

/// Split "key=value".
inline std::pair<std::string, std::string> split_assignment(std::string_view s) {
  const auto eq = s.find('=');
  if (eq == std::string_view::npos) throw ConfigError("expected key = value, got '" + std::string(s) + "'");
  const std::string key(detail::trim(s.substr(0, eq)));
  const std::string value(detail::trim(s.substr(eq + 1)));
  if (key.empty()) throw ConfigError("empty key");
  if (value.empty()) throw ConfigError("empty value for '" + key + "'", 0, key);
  return {key, value};
}

inline void validate_config(const RunConfig& c) {
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("validation: ") + e.what());
  }
}

/// `preset = name` may appear once, before any other key; later keys override it.
/// `#` starts a comment. `grid.dx` is applied after all other keys.
inline Experiment parse_experiment(std::string_view text) {
  Experiment ex;
  std::optional<std::pair<std::string, std::size_t>> dx;  // value, line
  std::vector<std::string> seen;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    std::pair<std::string, std::string> kv;
    try {
      kv = split_assignment(line);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), lineno, e.key());
    }
    const auto& [key, value] = kv;
    for (const std::string& s : seen)
      if (s == key) throw ConfigError("duplicate key '" + key + "'", lineno, key);

    if (key == "preset") {
      if (!seen.empty()) throw ConfigError("preset must precede all other keys", lineno, key);
      try {
        const ExperimentPreset& p = find_preset(value);
        ex.preset = p.name;
        ex.config = p.config;
        ex.sweep = p.sweep;
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), lineno, key);
      }
    } else if (key == "grid.dx") {
      dx = std::pair{value, lineno};
    } else {
      try {
        apply_override(ex.config, key, value);
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), lineno, key);
      }
    }
    seen.push_back(key);
  }
  if (dx) {
    try {
      apply_override(ex.config, "grid.dx", dx->first);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), dx->second, "grid.dx");
    }
  }
  validate_config(ex.config);
  return ex;
}

inline RunConfig parse_config(std::string_view text) { return parse_experiment(text).config; }

/// Every key, one per line, in registry order. Explicit fields and attached
/// reference arrays are not representable and are rejected.
inline std::string serialize_config(const RunConfig& c) {
  if (c.initial.kind == InitialKind::explicit_field)
    throw ConfigError("explicit initial fields cannot be serialized");
  if (c.reference) throw ConfigError("attached reference fields cannot be serialized");
  std::ostringstream out;
  for (const ConfigKey& k : config_keys())
    if (k.get) out << k.name << " = " << k.get(c) << '\n';
  return out.str();
}

/// Config for one sweep value.
inline RunConfig sweep_config(const RunConfig& base, const SweepAxis& axis, const std::string& value) {
  RunConfig c = base;
  const double dx = base.params.L / static_cast<double>(base.n_cells);
  apply_override(c, axis.key, value);
  // Sweeping the domain length keeps the cell width.
  if (axis.key == "model.L") detail::set_dx(c, dx);
  validate_config(c);
  return c;
}

}  // namespace chemofv
