#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "qdarp/contour.hpp"
#include "qdarp/errors.hpp"
#include "qdarp/io.hpp"
#include "qdarp/scans.hpp"
#include "qdarp/units.hpp"

namespace qdarp::cli {
namespace {

using Json = nlohmann::json;

constexpr unsigned bit(Command c) { return 1u << static_cast<unsigned>(c); }

constexpr unsigned kEvolve = bit(Command::Evolve);
constexpr unsigned kDressed = bit(Command::Dressed);
constexpr unsigned kScan = bit(Command::Scan);
constexpr unsigned kEnsemble = bit(Command::Ensemble);
constexpr unsigned kSweep = bit(Command::Sweep);
constexpr unsigned kThresholds = bit(Command::Thresholds);
constexpr unsigned kAll = kEvolve | kDressed | kScan | kEnsemble | kSweep | kThresholds;

struct KeySpec {
  const char* name;
  unsigned commands;
  const char* help;
};

// Canonical key order; also the order of the "config" block in meta files.
constexpr KeySpec kKeys[] = {
    {"tau0", kEvolve | kDressed | kScan | kSweep, "transform-limited intensity FWHM [ps]"},
    {"area", kEvolve | kDressed, "pulse area [pi]"},
    {"phi2", kEvolve | kDressed, "spectral chirp [ps^2]"},
    {"center-mev", kEvolve | kDressed | kSweep, "laser center photon energy [meV] (sweep: ensemble mean)"},
    {"detuning-mev", kEvolve | kDressed, "QD transition minus laser center [meV]"},
    {"dipole-scale", kEvolve | kDressed | kScan, "dipole moment relative to the mean"},
    {"samples", kEvolve | kDressed, "number of output time samples"},
    {"n-dots", kEnsemble | kSweep, "ensemble size"},
    {"energy-mean-mev", kEnsemble | kSweep, "mean transition energy [meV]"},
    {"fwhm-mev", kEnsemble | kSweep, "transition energy FWHM [meV]"},
    {"dipole-mean-debye", kEnsemble | kSweep, "mean dipole moment [D]"},
    {"dipole-fwhm-debye", kEnsemble | kSweep, "dipole moment FWHM [D]"},
    {"sampling", kEnsemble | kSweep, "deterministic-quantile | seeded-random"},
    {"seed", kEnsemble | kSweep, "seed for seeded-random sampling"},
    {"preset", kSweep, "grid preset: fig4 | symmetric | custom"},
    {"phi2-min", kSweep, "chirp axis start [ps^2]"},
    {"phi2-max", kSweep, "chirp axis end [ps^2]"},
    {"phi2-points", kSweep, "chirp axis points"},
    {"area-min", kScan | kSweep, "area axis start [pi]"},
    {"area-max", kScan | kSweep, "area axis end [pi]"},
    {"area-points", kScan | kSweep, "area axis points"},
    {"kind", kScan, "rabi | two-dot"},
    {"detunings", kScan, "comma-separated detunings for rabi scans [meV]"},
    {"scan-phi2", kScan, "comma-separated chirps for two-dot scans [ps^2]"},
    {"a-detuning-mev", kScan, "QD A transition minus laser center [meV]"},
    {"b-detuning-mev", kScan, "QD B transition minus laser center [meV]"},
    {"a-dipole", kScan, "QD A dipole scale"},
    {"b-dipole", kScan, "QD B dipole scale"},
    {"dt", kEvolve | kScan | kSweep, "RK4 step [ps], 0 = automatic"},
    {"t-span-factor", kEvolve | kDressed | kScan | kSweep, "half window in stretched durations"},
    {"norm-tol", kEvolve | kScan | kSweep, "allowed norm drift"},
    {"steps-per-duration", kEvolve | kScan | kSweep, "automatic step: stretched duration / this"},
    {"max-phase-step", kEvolve | kScan | kSweep, "automatic step: max phase per step [rad]"},
    {"input", kThresholds, "occupation map CSV written by sweep"},
    {"level", kThresholds, "plateau level for the threshold corner"},
    {"contour-level", kThresholds, "level of the exported contour"},
    {"workers", kScan | kSweep, "worker threads or 'auto'"},
    {"output", kAll, "output CSV path (meta goes to <output>.meta.json)"},
};

bool applies(const KeySpec& k, Command c) { return (k.commands & bit(c)) != 0; }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double as_number(const KeyValues& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return parse_number(trim(it->second));
  } catch (const DomainError&) {
    throw ConfigError("--" + key + ": expected a number, got '" + it->second + "'");
  }
}

std::uint64_t as_count(const KeyValues& kv, const std::string& key, std::uint64_t fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const std::string s = trim(it->second);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("--" + key + ": expected a non-negative integer, got '" + it->second + "'");
  }
  return v;
}

std::string as_text(const KeyValues& kv, const std::string& key, std::string fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : trim(it->second);
}

std::vector<double> as_list(const KeyValues& kv, const std::string& key, std::vector<double> fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_number(trim(item)));
    } catch (const DomainError&) {
      throw ConfigError("--" + key + ": bad list entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("--" + key + ": list is empty");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

// The ensemble tools assume the pulse duration used for the measured
// single-dot data; everything below is echoed into meta for provenance.
Json assumptions(const RunConfig& c) {
  Json a = Json::array();
  a.push_back("pulse duration tau0 = " + format_number(c.pulse.tau0_ps) +
              " ps (intensity FWHM of the transform-limited Gaussian)");
  a.push_back("pulse area labels the transform-limited pulse at the mean dipole; chirp conserves pulse energy");
  a.push_back("coherent two-level dynamics in the rotating-wave approximation, no dephasing");
  if (c.command == Command::Ensemble || c.command == Command::Sweep) {
    a.push_back("ensemble sampling: " + std::string(to_string(c.ensemble.sampling)) +
                "; energies and dipoles independent Gaussians");
  }
  if (c.command == Command::Sweep) {
    a.push_back("grid preset: " + c.preset);
    a.push_back("laser center energy = " + format_number(c.pulse.center_energy_mev) + " meV");
  }
  return a;
}

Json base_meta(const RunConfig& c) {
  Json cfg = Json::object();
  for (const auto& [k, v] : c.effective) cfg[k] = v;
  return {{"tool", "qdarp"},
          {"version", std::string(library_version())},
          {"command", std::string(to_string(c.command))},
          {"config", cfg},
          {"assumptions", assumptions(c)}};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

void write_json(const std::string& path, const Json& j) {
  auto os = open_output(path);
  os << j.dump(2) << '\n';
}

std::string meta_path(const std::string& output) { return output + ".meta.json"; }

QuantumDot single_dot(const RunConfig& c) {
  return {c.pulse.center_energy_mev + c.detuning_mev, c.dipole_scale};
}

int run_evolve(const RunConfig& c, std::ostream& out) {
  const auto traj = evolve_trajectory(c.pulse, single_dot(c), c.integrator, c.samples);
  {
    auto os = open_output(c.output);
    os << "t_ps,re_c0,im_c0,re_c1,im_c1,occupation\n";
    for (const auto& p : traj) {
      os << format_number(p.t_ps) << ',' << format_number(p.state.c0.real()) << ','
         << format_number(p.state.c0.imag()) << ',' << format_number(p.state.c1.real()) << ','
         << format_number(p.state.c1.imag()) << ',' << format_number(std::min(p.state.occupation(), 1.0)) << '\n';
    }
  }
  const auto& last = traj.back().state;
  const auto plan = plan_steps(c.pulse, std::vector<QuantumDot>{single_dot(c)}, c.integrator);
  Json meta = base_meta(c);
  meta["results"] = {{"final_occupation", std::min(last.occupation(), 1.0)},
                     {"norm_drift", std::abs(last.norm() - 1.0)},
                     {"steps", plan.steps},
                     {"dt_ps", plan.dt}};
  write_json(meta_path(c.output), meta);
  out << "final occupation " << format_number(std::min(last.occupation(), 1.0)) << '\n';
  return kExitOk;
}

int run_dressed(const RunConfig& c, std::ostream& out) {
  const auto qd = single_dot(c);
  const auto track = dressed_state_track(c.pulse, qd, c.samples, c.integrator.t_span_factor);
  std::size_t imin = 0;
  {
    auto os = open_output(c.output);
    os << "t_ps,E_minus_meV,E_plus_meV\n";
    for (std::size_t i = 0; i < track.size(); ++i) {
      const auto& s = track[i];
      os << format_number(s.t_ps) << ',' << format_number(s.energies.minus_mev) << ','
         << format_number(s.energies.plus_mev) << '\n';
      if (s.energies.gap_mev() < track[imin].energies.gap_mev()) imin = i;
    }
  }
  Json meta = base_meta(c);
  meta["results"] = {{"min_gap_meV", track[imin].energies.gap_mev()}, {"min_gap_t_ps", track[imin].t_ps}};
  try {
    meta["results"]["adiabaticity_r_max"] =
        adiabaticity_parameter(c.pulse, qd, c.samples, c.integrator.t_span_factor);
  } catch (const UndefinedParameterError&) {
    meta["results"]["adiabaticity_r_max"] = nullptr;
  }
  write_json(meta_path(c.output), meta);
  out << "minimum gap " << format_number(track[imin].energies.gap_mev()) << " meV at t = "
      << format_number(track[imin].t_ps) << " ps\n";
  return kExitOk;
}

int run_scan(const RunConfig& c, std::ostream& out) {
  ScanResult scan;
  if (c.scan_kind == "rabi") {
    scan = rabi_detuning_scan(c.detunings_mev, c.grid.area_axis, c.pulse.tau0_ps, c.integrator, c.dipole_scale,
                              c.workers);
  } else {
    const double center = c.pulse.center_energy_mev;
    const QuantumDot a{center + as_number(c.effective, "a-detuning-mev", 4.0), as_number(c.effective, "a-dipole", 1.0)};
    const QuantumDot b{center + as_number(c.effective, "b-detuning-mev", -4.0),
                       as_number(c.effective, "b-dipole", 1.25)};
    scan = two_dot_comparison(a, b, c.pulse, c.grid.area_axis, c.scan_phi2, c.integrator, c.workers);
  }
  {
    auto os = open_output(c.output);
    write_scan_csv(os, scan);
  }
  Json meta = base_meta(c);
  meta["results"] = scan_meta(scan);
  write_json(meta_path(c.output), meta);
  out << "wrote " << scan.curves.size() << " curves x " << scan.area_axis.size() << " areas\n";
  return kExitOk;
}

int run_ensemble(const RunConfig& c, std::ostream& out) {
  const auto ens = sample_ensemble(c.ensemble);
  {
    auto os = open_output(c.output);
    write_ensemble_csv(os, ens);
  }
  double mean_e = 0.0, mean_s = 0.0;
  for (const auto& d : ens.dots) {
    mean_e += d.transition_energy_mev;
    mean_s += d.dipole_scale;
  }
  const double n = static_cast<double>(ens.dots.size());
  mean_e /= n;
  mean_s /= n;
  double var_e = 0.0;
  for (const auto& d : ens.dots) var_e += (d.transition_energy_mev - mean_e) * (d.transition_energy_mev - mean_e);
  Json meta = base_meta(c);
  meta["ensemble"] = to_json(c.ensemble);
  meta["results"] = {{"mean_energy_meV", mean_e},
                     {"empirical_energy_fwhm_meV", std::sqrt(var_e / n) * kFwhmPerSigma},
                     {"mean_dipole_scale", mean_s}};
  if (c.ensemble.sampling == Sampling::DeterministicQuantile) {
    const auto [ne, nd] = quantile_layout(c.ensemble.n_dots);
    meta["results"]["quantile_layout"] = {ne, nd};
  }
  write_json(meta_path(c.output), meta);
  out << "wrote " << ens.dots.size() << " dots\n";
  return kExitOk;
}

int run_sweep(const RunConfig& c, std::ostream& out) {
  PulseSpec base = c.pulse;
  base.area_pi = 0.0;
  base.phi2_ps2 = 0.0;
  const auto map = occupation_map(c.grid, c.ensemble, base, c.integrator, c.workers);
  {
    auto os = open_output(c.output);
    write_map_csv(os, map);
  }
  Json meta = base_meta(c);
  meta.update(map_meta(map));
  write_json(meta_path(c.output), meta);
  out << "wrote " << map.rows() << " x " << map.cols() << " map\n";
  return kExitOk;
}

int run_thresholds(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::ifstream csv(c.input, std::ios::binary);
  if (!csv) throw ConfigError("cannot read input map '" + c.input + "'");
  Json map_json = nullptr;
  if (std::ifstream mj(meta_path(c.input)); mj) map_json = Json::parse(mj);
  const auto map = read_map(csv, map_json);

  const auto contour = level_set(map, c.contour_level);
  {
    auto os = open_output(c.output + ".contour.csv");
    write_polylines_csv(os, contour);
  }
  const auto th = threshold_finder(map, c.level);
  Json meta = base_meta(c);
  meta["results"] = {{"contour_polylines", contour.size()}};
  if (!th) {
    meta["results"]["threshold"] = nullptr;
    write_json(meta_path(c.output), meta);
    err << "occupation " << format_number(c.level) << " is not reached on the map plateau\n";
    return kExitNotFound;
  }
  {
    auto os = open_output(c.output);
    os << "level,area_pi,phi2_ps2\n"
       << format_number(c.level) << ',' << format_number(th->area_pi) << ',' << format_number(th->phi2_ps2) << '\n';
  }
  meta["results"]["threshold"] = {{"area_pi", th->area_pi}, {"phi2_ps2", th->phi2_ps2}};
  write_json(meta_path(c.output), meta);
  out << "threshold at level " << format_number(c.level) << ": area " << format_number(th->area_pi) << " pi, phi2 "
      << format_number(th->phi2_ps2) << " ps^2\n";
  return kExitOk;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Evolve:
      return "evolve";
    case Command::Dressed:
      return "dressed";
    case Command::Scan:
      return "scan";
    case Command::Ensemble:
      return "ensemble";
    case Command::Sweep:
      return "sweep";
    case Command::Thresholds:
      return "thresholds";
  }
  return "unknown";
}

Command command_from_string(std::string_view s) {
  for (auto c : {Command::Evolve, Command::Dressed, Command::Scan, Command::Ensemble, Command::Sweep,
                 Command::Thresholds}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown command '" + std::string(s) + "'");
}

std::vector<std::string> keys_for(Command command) {
  std::vector<std::string> out;
  for (const auto& k : kKeys) {
    if (applies(k, command)) out.emplace_back(k.name);
  }
  return out;
}

KeyValues parse_config_text(std::string_view text) {
  KeyValues kv;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    Json j;
    try {
      j = Json::parse(body);
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("config JSON: ") + e.what());
    }
    if (j.contains("config") && j.at("config").is_object()) {
      if (j.contains("command")) kv["command"] = j.at("command").get<std::string>();
      j = j.at("config");
    }
    for (const auto& [k, v] : j.items()) {
      if (v.is_string()) {
        kv[k] = v.get<std::string>();
      } else if (v.is_number_integer() || v.is_number_unsigned()) {
        kv[k] = v.dump();
      } else if (v.is_number()) {
        kv[k] = format_number(v.get<double>());
      } else {
        throw ConfigError("config key '" + k + "' must be a string or number");
      }
    }
    return kv;
  }

  std::istringstream ss{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

RunConfig build_config(Command command, const KeyValues& values) {
  const auto allowed = keys_for(command);
  for (const auto& [k, v] : values) {
    if (k == "command") {
      if (trim(v) != to_string(command)) {
        throw ConfigError("config is for command '" + v + "', not '" + std::string(to_string(command)) + "'");
      }
      continue;
    }
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError("unknown key '" + k + "' for command '" + std::string(to_string(command)) + "'");
    }
  }

  RunConfig c;
  c.command = command;
  const auto& kv = values;

  c.pulse.tau0_ps = as_number(kv, "tau0", 0.12);
  c.pulse.area_pi = as_number(kv, "area", 1.0);
  c.pulse.phi2_ps2 = as_number(kv, "phi2", 0.0);
  c.detuning_mev = as_number(kv, "detuning-mev", 0.0);
  c.dipole_scale = as_number(kv, "dipole-scale", 1.0);
  c.samples = as_count(kv, "samples", 401);

  c.ensemble.n_dots = as_count(kv, "n-dots", 468);
  c.ensemble.energy_mean_mev = as_number(kv, "energy-mean-mev", 1063.0);
  c.ensemble.energy_fwhm_mev = as_number(kv, "fwhm-mev", 10.0);
  c.ensemble.dipole_mean_debye = as_number(kv, "dipole-mean-debye", 25.0);
  c.ensemble.dipole_fwhm_debye = as_number(kv, "dipole-fwhm-debye", 4.0);
  c.ensemble.seed = as_count(kv, "seed", 0);
  try {
    c.ensemble.sampling = sampling_from_string(as_text(kv, "sampling", "deterministic-quantile"));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  const double default_center = command == Command::Sweep ? c.ensemble.energy_mean_mev : 1063.0;
  c.pulse.center_energy_mev = as_number(kv, "center-mev", default_center);

  c.integrator.dt_ps = as_number(kv, "dt", 0.0);
  c.integrator.t_span_factor = as_number(kv, "t-span-factor", 4.0);
  c.integrator.norm_tol = as_number(kv, "norm-tol", 1e-9);
  c.integrator.steps_per_duration = as_number(kv, "steps-per-duration", 2000.0);
  c.integrator.max_phase_step = as_number(kv, "max-phase-step", 0.05);

  c.preset = as_text(kv, "preset", "fig4");
  SweepGrid preset_grid;
  if (c.preset == "fig4" || c.preset == "custom") {
    preset_grid = fig4_grid();
  } else if (c.preset == "symmetric") {
    preset_grid = symmetric_grid();
  } else {
    throw ConfigError("unknown preset '" + c.preset + "' (fig4 | symmetric | custom)");
  }
  if (command == Command::Scan) preset_grid.area_axis = SweepGrid::linspace(0.0, 4.0, 81);
  const auto& px = preset_grid.phi2_axis;
  const auto& py = preset_grid.area_axis;
  const double phi2_min = as_number(kv, "phi2-min", px.front());
  const double phi2_max = as_number(kv, "phi2-max", px.back());
  const auto phi2_points = as_count(kv, "phi2-points", px.size());
  const double area_min = as_number(kv, "area-min", py.front());
  const double area_max = as_number(kv, "area-max", py.back());
  const auto area_points = as_count(kv, "area-points", py.size());

  c.scan_kind = as_text(kv, "kind", "rabi");
  if (c.scan_kind != "rabi" && c.scan_kind != "two-dot") throw ConfigError("--kind must be rabi or two-dot");
  c.detunings_mev = as_list(kv, "detunings", {0.0, 2.0, 4.0, -2.0, -4.0});
  c.scan_phi2 = as_list(kv, "scan-phi2", {0.0, 0.3});

  c.input = as_text(kv, "input", "");
  c.level = as_number(kv, "level", 0.99);
  c.contour_level = as_number(kv, "contour-level", 0.95);

  c.output = as_text(kv, "output", "qdarp_" + std::string(to_string(command)) + ".csv");
  const std::string workers = as_text(kv, "workers", "auto");
  if (workers != "auto") {
    const auto w = as_count(kv, "workers", 0);
    if (w == 0) throw ConfigError("--workers must be positive or 'auto'");
    c.workers = static_cast<unsigned>(w);
  }

  try {
    c.pulse.validate();
    c.integrator.validate();
    if (command == Command::Ensemble || command == Command::Sweep) c.ensemble.validate();
    if (command == Command::Evolve || command == Command::Dressed) QuantumDot{0.0, c.dipole_scale}.validate();
    if (command == Command::Sweep || command == Command::Scan) {
      if (phi2_points < 2 || area_points < 2) throw DomainError("grid axes need at least 2 points");
      c.grid.phi2_axis = SweepGrid::linspace(phi2_min, phi2_max, phi2_points);
      c.grid.area_axis = SweepGrid::linspace(area_min, area_max, area_points);
      if (command == Command::Sweep) c.grid.validate();
      if (command == Command::Scan) {
        SweepGrid{{0.0, 1.0}, c.grid.area_axis}.validate();
        if (c.dipole_scale <= 0.0) throw DomainError("dipole scale must be positive");
      }
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if ((command == Command::Evolve || command == Command::Dressed) && c.samples < 2) {
    throw ConfigError("--samples must be at least 2");
  }
  if (command == Command::Thresholds) {
    if (c.input.empty()) throw ConfigError("thresholds needs --input <map.csv>");
    if (!(c.level > 0.0 && c.level < 1.0) || !(c.contour_level > 0.0 && c.contour_level < 1.0)) {
      throw ConfigError("levels must lie strictly between 0 and 1");
    }
  }
  if (c.output.empty()) throw ConfigError("--output must not be empty");

  // Canonical echo of every key this command understands.
  KeyValues& e = c.effective;
  auto put = [&](const char* key, std::string value) {
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) e[key] = std::move(value);
  };
  put("tau0", format_number(c.pulse.tau0_ps));
  put("area", format_number(c.pulse.area_pi));
  put("phi2", format_number(c.pulse.phi2_ps2));
  put("center-mev", format_number(c.pulse.center_energy_mev));
  put("detuning-mev", format_number(c.detuning_mev));
  put("dipole-scale", format_number(c.dipole_scale));
  put("samples", std::to_string(c.samples));
  put("n-dots", std::to_string(c.ensemble.n_dots));
  put("energy-mean-mev", format_number(c.ensemble.energy_mean_mev));
  put("fwhm-mev", format_number(c.ensemble.energy_fwhm_mev));
  put("dipole-mean-debye", format_number(c.ensemble.dipole_mean_debye));
  put("dipole-fwhm-debye", format_number(c.ensemble.dipole_fwhm_debye));
  put("sampling", std::string(to_string(c.ensemble.sampling)));
  put("seed", std::to_string(c.ensemble.seed));
  put("preset", c.preset);
  put("phi2-min", format_number(phi2_min));
  put("phi2-max", format_number(phi2_max));
  put("phi2-points", std::to_string(phi2_points));
  put("area-min", format_number(area_min));
  put("area-max", format_number(area_max));
  put("area-points", std::to_string(area_points));
  put("kind", c.scan_kind);
  put("detunings", join(c.detunings_mev));
  put("scan-phi2", join(c.scan_phi2));
  put("a-detuning-mev", format_number(as_number(kv, "a-detuning-mev", 4.0)));
  put("b-detuning-mev", format_number(as_number(kv, "b-detuning-mev", -4.0)));
  put("a-dipole", format_number(as_number(kv, "a-dipole", 1.0)));
  put("b-dipole", format_number(as_number(kv, "b-dipole", 1.25)));
  put("dt", format_number(c.integrator.dt_ps));
  put("t-span-factor", format_number(c.integrator.t_span_factor));
  put("norm-tol", format_number(c.integrator.norm_tol));
  put("steps-per-duration", format_number(c.integrator.steps_per_duration));
  put("max-phase-step", format_number(c.integrator.max_phase_step));
  put("input", c.input);
  put("level", format_number(c.level));
  put("contour-level", format_number(c.contour_level));
  put("workers", workers);
  put("output", c.output);
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::Evolve:
        return run_evolve(config, out);
      case Command::Dressed:
        return run_dressed(config, out);
      case Command::Scan:
        return run_scan(config, out);
      case Command::Ensemble:
        return run_ensemble(config, out);
      case Command::Sweep:
        return run_sweep(config, out);
      case Command::Thresholds:
        return run_thresholds(config, out, err);
    }
  } catch (const IntegrationError& e) {
    err << "integration failure: " << e.what() << '\n';
    return kExitIntegration;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qdarp: chirped-pulse control of quantum-dot excitons"};
  app.require_subcommand(1);

  constexpr Command kCommands[] = {Command::Evolve, Command::Dressed, Command::Scan,
                                   Command::Ensemble, Command::Sweep, Command::Thresholds};
  constexpr const char* kDescriptions[] = {
      "evolve one dot under one pulse and write the state trajectory",
      "write the dressed-state energies across the pulse",
      "Rabi-rotation detuning scan or QD A/B comparison versus pulse area",
      "sample an inhomogeneous ensemble and write it as CSV",
      "ensemble-mean occupation over a chirp x pulse-area grid",
      "threshold corner and contour of a sweep map",
  };

  std::map<Command, KeyValues> storage;
  std::map<Command, std::string> config_paths;
  std::map<Command, CLI::App*> subs;
  std::map<Command, std::map<std::string, CLI::Option*>> options;
  for (std::size_t i = 0; i < std::size(kCommands); ++i) {
    const Command cmd = kCommands[i];
    auto* sub = app.add_subcommand(std::string(to_string(cmd)), kDescriptions[i]);
    subs[cmd] = sub;
    sub->add_option("--config", config_paths[cmd], "key = value file or a previous run's .meta.json");
    for (const auto& k : kKeys) {
      if (!applies(k, cmd)) continue;
      auto& slot = storage[cmd][k.name];
      options[cmd][k.name] = sub->add_option(std::string("--") + k.name, slot, k.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  for (const Command cmd : kCommands) {
    if (!subs[cmd]->parsed()) continue;
    try {
      KeyValues merged;
      if (!config_paths[cmd].empty()) {
        std::ifstream is(config_paths[cmd], std::ios::binary);
        if (!is) throw ConfigError("cannot read config '" + config_paths[cmd] + "'");
        std::stringstream buf;
        buf << is.rdbuf();
        merged = parse_config_text(buf.str());
      }
      for (const auto& [name, opt] : options[cmd]) {
        if (opt->count() > 0) merged[name] = storage[cmd][name];
      }
      return run(build_config(cmd, merged), out, err);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  return kExitConfig;
}

}  // namespace qdarp::cli
