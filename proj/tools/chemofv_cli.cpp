// chemofv: run, sweep and compare hydrodynamic chemotaxis experiments.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure (a step
// was rejected), 3 I/O error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chemofv/chemofv.hpp"

namespace fs = std::filesystem;
using namespace chemofv;

namespace {

constexpr int exit_config = 1;
constexpr int exit_numerical = 2;
constexpr int exit_io = 3;

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::vector<std::string> overrides;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
  cmd->add_option("--config", c.config, "key = value configuration file");
  cmd->add_option("--preset", c.preset, "named figure preset (see `presets`)");
  if (with_out) cmd->add_option("--out", c.out, "output directory (default $CHEMOFV_OUT or .)");
  cmd->add_option("--override", c.overrides, "key=value applied after the config; repeatable");
  cmd->add_flag("--quiet", c.quiet, "suppress progress output");
}

/// Positional target is a config path when such a file exists, a preset name otherwise.
Experiment load(const Common& c, const std::string& target) {
  std::string config = c.config, preset = c.preset;
  if (!target.empty()) {
    if (fs::exists(target)) config = target;
    else preset = target;
  }
  if (!config.empty() && !preset.empty()) throw ConfigError("give either a config file or a preset, not both");
  Experiment ex;
  if (!config.empty()) {
    ex = parse_experiment(detail::read_file(config));
  } else if (!preset.empty()) {
    const ExperimentPreset& p = find_preset(preset);
    ex.preset = p.name;
    ex.config = p.config;
    ex.sweep = p.sweep;
  }
  for (const std::string& o : c.overrides) {
    const auto [key, value] = split_assignment(o);
    apply_override(ex.config, key, value);
  }
  validate_config(ex.config);
  return ex;
}

fs::path out_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("CHEMOFV_OUT"); env && *env) return env;
  return ".";
}

/// Config file stem when one was given, preset name otherwise.
std::string stem_of(const Experiment& ex, const Common& c, const std::string& target) {
  if (!target.empty() && fs::exists(target)) return fs::path(target).stem().string();
  if (!c.config.empty()) return fs::path(c.config).stem().string();
  if (!ex.preset.empty()) return ex.preset;
  return "run";
}

int run_one(const RunConfig& cfg, const fs::path& dir, const std::string& stem, bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const WrittenFiles w = write_outputs(cfg, r, OutputSpec{dir, stem}, wall);
  if (!quiet) {
    std::printf("%s: stop=%s t=%g steps=%zu bumps=%zu", stem.c_str(), std::string(to_string(r.stop)).c_str(),
                r.t, r.steps, count_bumps(r.final_field.rho));
    if (!r.diagnostics.empty())
      std::printf(" res_rho=%.3e res_q=%.3e", r.diagnostics.back().res_rho, r.diagnostics.back().res_q);
    std::printf(" (%.2fs)\n  %s\n", wall, w.summary.string().c_str());
    if (!r.message.empty()) std::printf("  %s\n", r.message.c_str());
  }
  return r.stop == StopReason::step_rejected ? exit_numerical : 0;
}

int cmd_presets() {
  for (const ExperimentPreset& p : presets()) {
    std::printf("%-13s %s\n", p.name.c_str(), p.citation.c_str());
    if (p.sweep) {
      std::printf("%-13s sweep %s =", "", p.sweep->key.c_str());
      for (const std::string& v : p.sweep->values) std::printf(" %s", v.c_str());
      std::printf("\n");
    }
  }
  return 0;
}

int cmd_steady(const Common& c, const std::string& target, const std::string& kind, std::optional<double> mass,
               std::size_t samples) {
  const Experiment ex = load(c, target);
  const PhysicalParams& p = ex.config.params;
  const double M = mass.value_or(ex.config.initial.mass);
  const BumpProfile b = kind == "centered" ? centered_bump(p, M) : lateral_bump(p, M);
  std::printf("kind %s\ntau %.17g\nxbar %.17g\nybar %.17g\nK %.17g\nmass %.17g\nresidual %.3e\n",
              kind.c_str(), compute_tau(p), b.xbar, b.ybar, b.K, b.mass, interface_residual(b));
  if (samples > 1) {
    std::printf("x,rho,phi\n");
    for (std::size_t i = 0; i < samples; ++i) {
      const double x = p.L * static_cast<double>(i) / static_cast<double>(samples - 1);
      std::printf("%.17g,%.17g,%.17g\n", x, b.rho(x), b.phi(x));
    }
  }
  return 0;
}

int cmd_compare(const Common& c, const std::string& a, const std::string& b) {
  const LoadedSnapshot sa = read_final_snapshot(a);
  const double dx = sa.x.size() > 1 ? sa.x[1] - sa.x[0] : 2.0 * sa.x[0];
  CompareReport r;
  if (b == "lateral_bump" || b == "centered_bump") {
    const Experiment ex = load(c, "");
    PhysicalParams p = ex.config.params;
    const Grid g(sa.field.size(), p.L);
    if (std::abs(g.dx - dx) > 1e-9 * dx) throw ConfigError("snapshot grid does not match model.L");
    const double M = sa.field.mass(g.dx);
    r = compare_to_profile(sa.field, b == "lateral_bump" ? lateral_bump(p, M) : centered_bump(p, M), g);
  } else {
    const LoadedSnapshot sb = read_final_snapshot(b);
    if (sb.x != sa.x) throw ConfigError("compare: incompatible grids");
    r = compare_runs(sa.field, sb.field, dx);
  }
  std::printf("%s", format_report(r).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite volume solver for a hydrodynamic chemotaxis model"};
  app.require_subcommand(1);

  Common common;
  std::string target, target_b, kind = "lateral";
  std::optional<double> mass;
  std::size_t samples = 0;

  auto* run_cmd = app.add_subcommand("run", "run one configuration or preset");
  run_cmd->add_option("target", target, "config file or preset name");
  add_common(run_cmd, common);

  auto* sweep_cmd = app.add_subcommand("sweep", "run every value of a preset's sweep axis");
  sweep_cmd->add_option("target", target, "config file or preset name");
  add_common(sweep_cmd, common);

  auto* steady_cmd = app.add_subcommand("steady", "print the closed-form bump for the given parameters");
  steady_cmd->add_option("target", target, "config file or preset name");
  steady_cmd->add_option("--kind", kind, "lateral | centered")->check(CLI::IsMember({"lateral", "centered"}));
  steady_cmd->add_option("--mass", mass, "bump mass (default: initial.mass)");
  steady_cmd->add_option("--samples", samples, "number of profile samples to print");
  add_common(steady_cmd, common, false);

  auto* compare_cmd = app.add_subcommand("compare", "compare final snapshots, or one against a closed-form bump");
  compare_cmd->add_option("a", target, "snapshots CSV")->required();
  compare_cmd->add_option("b", target_b, "snapshots CSV, or lateral_bump | centered_bump")->required();
  add_common(compare_cmd, common, false);

  app.add_subcommand("presets", "list presets with their figure setups");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (run_cmd->parsed()) {
      const Experiment ex = load(common, target);
      return run_one(ex.config, out_dir(common), stem_of(ex, common, target), common.quiet);
    }
    if (sweep_cmd->parsed()) {
      const Experiment ex = load(common, target);
      if (!ex.sweep) throw ConfigError("'" + stem_of(ex, common, target) + "' has no sweep axis");
      int worst = 0;
      for (const std::string& v : ex.sweep->values) {
        const RunConfig cfg = sweep_config(ex.config, *ex.sweep, v);
        worst = std::max(worst, run_one(cfg, out_dir(common), sweep_stem(stem_of(ex, common, target), *ex.sweep, v),
                                        common.quiet));
      }
      return worst;
    }
    if (steady_cmd->parsed()) return cmd_steady(common, target, kind, mass, samples);
    if (compare_cmd->parsed()) return cmd_compare(common, target, target_b);
    return cmd_presets();
  } catch (const IoError& e) {
    std::fprintf(stderr, "chemofv: %s\n", e.what());
    return exit_io;
  } catch (const Error& e) {
    std::fprintf(stderr, "chemofv: %s\n", e.what());
    return exit_config;
  }
}
