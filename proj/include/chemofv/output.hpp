#pragma once

// CSV snapshots and diagnostics, JSON run summary, and run-to-run or
// run-to-profile comparison reports.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chemofv/config.hpp"
#include "chemofv/driver.hpp"
#include "chemofv/steady.hpp"

namespace chemofv {

class IoError : public Error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what)
      : Error(path.string() + ": " + what), path_(path) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

namespace detail {

inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace detail

/// Header `t,x,rho,q,u,phi`, one row per (snapshot, cell).
inline std::string snapshots_csv(const std::vector<Snapshot>& snaps, const Grid& g) {
  std::string out = "t,x,rho,q,u,phi\n";
  for (const Snapshot& s : snaps) {
    if (s.field.size() != g.n_cells) throw DomainError("snapshot does not match the grid");
    const std::string t = detail::g17(s.t);
    for (std::size_t i = 0; i < g.n_cells; ++i) {
      out += t;
      for (double v : {g.center(i), s.field.rho[i], s.field.q[i], s.field.velocity(i), s.field.phi[i]}) {
        out += ',';
        out += detail::g17(v);
      }
      out += '\n';
    }
  }
  return out;
}

inline std::string diagnostics_csv(const Diagnostics& diags) {
  std::string out = "t,mass,res_rho,res_q,min_rho,l2_err,linf_err,bumps,neg_events\n";
  for (const DiagnosticRecord& d : diags) {
    for (double v : {d.t, d.mass, d.res_rho, d.res_q, d.min_rho, d.l2_err, d.linf_err}) {
      out += detail::g17(v);
      out += ',';
    }
    out += std::to_string(d.bumps) + ',' + std::to_string(d.neg_events) + '\n';
  }
  return out;
}

inline nlohmann::ordered_json summary_json(const RunConfig& cfg, const RunResult& r, double wall_seconds) {
  nlohmann::ordered_json j;
  j["stop_reason"] = std::string(to_string(r.stop));
  j["t"] = r.t;
  j["steps"] = r.steps;
  j["bumps"] = count_bumps(r.final_field.rho);
  nlohmann::ordered_json sup = nlohmann::ordered_json::array();
  const double dx = cfg.params.L / static_cast<double>(cfg.n_cells);
  for (auto [a, b] : bump_supports(r.final_field.rho))
    sup.push_back({static_cast<double>(a) * dx, static_cast<double>(b + 1) * dx});
  j["supports"] = sup;
  if (!r.diagnostics.empty()) {
    j["res_rho"] = r.diagnostics.back().res_rho;
    j["res_q"] = r.diagnostics.back().res_q;
    j["mass"] = r.diagnostics.back().mass;
  }
  j["min_rho_seen"] = std::isfinite(r.min_rho_seen) ? nlohmann::ordered_json(r.min_rho_seen) : nullptr;
  j["neg_events"] = r.neg_events;
  j["roe_fallbacks"] = r.roe_fallbacks;
  if (!r.message.empty()) j["message"] = r.message;
  j["wall_seconds"] = wall_seconds;
  j["config"] = serialize_config(cfg);
  return j;
}

struct OutputSpec {
  std::filesystem::path dir = ".";
  std::string stem = "run";
};

/// `<stem>_<key tail>-<value>`, e.g. fig7_L-30.
inline std::string sweep_stem(const std::string& stem, const SweepAxis& axis, const std::string& value) {
  const auto dot = axis.key.rfind('.');
  return stem + "_" + (dot == std::string::npos ? axis.key : axis.key.substr(dot + 1)) + "-" + value;
}

struct WrittenFiles {
  std::filesystem::path snapshots;
  std::filesystem::path diagnostics;
  std::filesystem::path summary;
};

inline WrittenFiles write_outputs(const RunConfig& cfg, const RunResult& r, const OutputSpec& spec,
                                  double wall_seconds = 0.0) {
  std::error_code ec;
  std::filesystem::create_directories(spec.dir, ec);
  if (ec) throw IoError(spec.dir, ec.message());
  WrittenFiles w{spec.dir / (spec.stem + "_snapshots.csv"), spec.dir / (spec.stem + "_diagnostics.csv"),
                 spec.dir / (spec.stem + "_summary.json")};
  detail::write_file(w.snapshots, snapshots_csv(r.snapshots, cfg.grid()));
  detail::write_file(w.diagnostics, diagnostics_csv(r.diagnostics));
  detail::write_file(w.summary, summary_json(cfg, r, wall_seconds).dump(2) + "\n");
  return w;
}

/// Last time block of a snapshots CSV, with its cell centres.
struct LoadedSnapshot {
  double t = 0.0;
  std::vector<double> x;
  StateField field;
};

inline LoadedSnapshot read_final_snapshot(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "t,x,rho,q,u,phi")
    throw IoError(path, "not a snapshots file");
  LoadedSnapshot s;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    double v[6];
    std::size_t pos = 0;
    for (int k = 0; k < 6; ++k) {
      const auto comma = line.find(',', pos);
      const std::string_view cell =
          detail::trim(std::string_view(line).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      try {
        v[k] = detail::parse_double(cell);
      } catch (const DomainError&) {
        throw IoError(path, "line " + std::to_string(lineno) + ": bad number");
      }
      if (k < 5 && comma == std::string::npos) throw IoError(path, "line " + std::to_string(lineno) + ": short row");
      pos = comma + 1;
    }
    if (s.x.empty() || v[0] != s.t) {
      s = LoadedSnapshot{};
      s.t = v[0];
    }
    s.x.push_back(v[1]);
    s.field.rho.push_back(v[2]);
    s.field.q.push_back(v[3]);
    s.field.phi.push_back(v[5]);
  }
  if (s.x.empty()) throw IoError(path, "no snapshot rows");
  return s;
}

// ---------------------------------------------------------------- comparison

/// Right end of the leftmost support run: the face between the last cell
/// above `threshold_rel * max rho` and the first one below it.
inline double interface_location(std::span<const double> rho, double dx, double threshold_rel = 1e-6) {
  const double peak = rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end());
  const double thr = threshold_rel * peak;
  std::size_t i = 0;
  while (i < rho.size() && !(rho[i] > thr)) ++i;
  while (i < rho.size() && rho[i] > thr) ++i;
  return static_cast<double>(i) * dx;
}

struct CompareReport {
  double l2 = 0.0;
  double linf = 0.0;
  double q_linf = 0.0;
  double interface_a = 0.0;
  double interface_b = 0.0;
  double interface_error = 0.0;
};

inline CompareReport compare_runs(const StateField& a, const StateField& b, double dx) {
  if (a.size() != b.size()) throw DomainError("compare_runs: incompatible grids");
  CompareReport r;
  const ErrorNorms e = error_norms(a, b, dx);
  r.l2 = e.l2;
  r.linf = e.linf;
  for (std::size_t i = 0; i < a.size(); ++i) r.q_linf = std::max(r.q_linf, std::abs(a.q[i] - b.q[i]));
  r.interface_a = interface_location(a.rho, dx);
  r.interface_b = interface_location(b.rho, dx);
  r.interface_error = std::abs(r.interface_a - r.interface_b);
  return r;
}

/// Against a closed-form bump. The interface compared is xbar for a lateral
/// bump and the right support end ybar for a centred one.
inline CompareReport compare_to_profile(const StateField& a, const BumpProfile& b, const Grid& g,
                                        SampleMode mode = SampleMode::center) {
  if (a.size() != g.n_cells) throw DomainError("compare_to_profile: field does not match the grid");
  CompareReport r = compare_runs(a, sample_profile(b, g, mode), g.dx);
  r.interface_b = b.kind == BumpKind::lateral ? b.xbar : b.ybar;
  if (b.kind == BumpKind::centered) {
    std::size_t i = a.size();
    const double peak = *std::max_element(a.rho.begin(), a.rho.end());
    while (i > 0 && !(a.rho[i - 1] > 1e-6 * peak)) --i;
    r.interface_a = static_cast<double>(i) * g.dx;
  }
  r.interface_error = std::abs(r.interface_a - r.interface_b);
  return r;
}

inline std::string format_report(const CompareReport& r) {
  std::ostringstream s;
  s << "l2_rho      " << detail::g17(r.l2) << '\n'
    << "linf_rho    " << detail::g17(r.linf) << '\n'
    << "linf_q      " << detail::g17(r.q_linf) << '\n'
    << "interface_a " << detail::g17(r.interface_a) << '\n'
    << "interface_b " << detail::g17(r.interface_b) << '\n'
    << "interface_error " << detail::g17(r.interface_error) << '\n';
  return s.str();
}

}  // namespace chemofv
