#include "qdarp/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "qdarp/errors.hpp"

namespace qdarp {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool next_data_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

void expect_header(std::istream& is, std::string_view header) {
  std::string line;
  if (!next_data_line(is, line) || line != header) {
    throw DomainError("expected CSV header '" + std::string(header) + "'");
  }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != last) {
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

nlohmann::json to_json(const PulseSpec& p) {
  return {{"tau0_ps", p.tau0_ps}, {"area_pi", p.area_pi}, {"center_energy_meV", p.center_energy_mev},
          {"phi2_ps2", p.phi2_ps2}};
}

nlohmann::json to_json(const EnsembleSpec& e) {
  return {{"n_dots", e.n_dots},
          {"energy_mean_meV", e.energy_mean_mev},
          {"energy_fwhm_meV", e.energy_fwhm_mev},
          {"dipole_mean_debye", e.dipole_mean_debye},
          {"dipole_fwhm_debye", e.dipole_fwhm_debye},
          {"sampling", std::string(to_string(e.sampling))},
          {"seed", e.seed}};
}

nlohmann::json to_json(const IntegratorParams& p) {
  return {{"dt_ps", p.dt_ps},
          {"t_span_factor", p.t_span_factor},
          {"norm_tol", p.norm_tol},
          {"steps_per_duration", p.steps_per_duration},
          {"max_phase_step", p.max_phase_step}};
}

nlohmann::json to_json(const SweepGrid& g) { return {{"phi2_axis", g.phi2_axis}, {"area_axis", g.area_axis}}; }

PulseSpec pulse_from_json(const nlohmann::json& j) {
  PulseSpec p;
  p.tau0_ps = get_or(j, "tau0_ps", p.tau0_ps);
  p.area_pi = get_or(j, "area_pi", p.area_pi);
  p.center_energy_mev = get_or(j, "center_energy_meV", p.center_energy_mev);
  p.phi2_ps2 = get_or(j, "phi2_ps2", p.phi2_ps2);
  return p;
}

EnsembleSpec ensemble_from_json(const nlohmann::json& j) {
  EnsembleSpec e;
  e.n_dots = get_or(j, "n_dots", e.n_dots);
  e.energy_mean_mev = get_or(j, "energy_mean_meV", e.energy_mean_mev);
  e.energy_fwhm_mev = get_or(j, "energy_fwhm_meV", e.energy_fwhm_mev);
  e.dipole_mean_debye = get_or(j, "dipole_mean_debye", e.dipole_mean_debye);
  e.dipole_fwhm_debye = get_or(j, "dipole_fwhm_debye", e.dipole_fwhm_debye);
  if (j.contains("sampling")) e.sampling = sampling_from_string(j.at("sampling").get<std::string>());
  e.seed = get_or(j, "seed", e.seed);
  return e;
}

IntegratorParams integrator_from_json(const nlohmann::json& j) {
  IntegratorParams p;
  p.dt_ps = get_or(j, "dt_ps", p.dt_ps);
  p.t_span_factor = get_or(j, "t_span_factor", p.t_span_factor);
  p.norm_tol = get_or(j, "norm_tol", p.norm_tol);
  p.steps_per_duration = get_or(j, "steps_per_duration", p.steps_per_duration);
  p.max_phase_step = get_or(j, "max_phase_step", p.max_phase_step);
  return p;
}

SweepGrid grid_from_json(const nlohmann::json& j) {
  return {j.at("phi2_axis").get<std::vector<double>>(), j.at("area_axis").get<std::vector<double>>()};
}

void write_ensemble_csv(std::ostream& os, const Ensemble& ensemble) {
  os << "index,transition_energy_meV,dipole_scale\n";
  for (std::size_t i = 0; i < ensemble.dots.size(); ++i) {
    const auto& qd = ensemble.dots[i];
    os << i << ',' << format_number(qd.transition_energy_mev) << ',' << format_number(qd.dipole_scale) << '\n';
  }
}

std::vector<QuantumDot> read_ensemble_csv(std::istream& is) {
  expect_header(is, "index,transition_energy_meV,dipole_scale");
  std::vector<QuantumDot> dots;
  std::string line;
  while (next_data_line(is, line)) {
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw DomainError("ensemble CSV row needs 3 fields: " + line);
    if (parse_number(f[0]) != static_cast<double>(dots.size())) throw DomainError("ensemble CSV index out of order");
    QuantumDot qd{parse_number(f[1]), parse_number(f[2])};
    qd.validate();
    dots.push_back(qd);
  }
  return dots;
}

void write_map_csv(std::ostream& os, const OccupationMap& map) {
  os << "phi2_ps2,area_pi,occupation\n";
  for (std::size_t i = 0; i < map.rows(); ++i) {
    for (std::size_t j = 0; j < map.cols(); ++j) {
      os << format_number(map.grid.phi2_axis[i]) << ',' << format_number(map.grid.area_axis[j]) << ','
         << format_number(map.at(i, j)) << '\n';
    }
  }
}

nlohmann::json map_meta(const OccupationMap& map) {
  return {{"grid", to_json(map.grid)},
          {"ensemble", to_json(map.ensemble)},
          {"base_pulse", to_json(map.base)},
          {"integrator", to_json(map.integrator)},
          {"version", map.version}};
}

OccupationMap read_map(std::istream& csv, const nlohmann::json& meta) {
  expect_header(csv, "phi2_ps2,area_pi,occupation");
  std::vector<double> phi2, area, occ;
  std::string line;
  while (next_data_line(csv, line)) {
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw DomainError("map CSV row needs 3 fields: " + line);
    phi2.push_back(parse_number(f[0]));
    area.push_back(parse_number(f[1]));
    occ.push_back(parse_number(f[2]));
  }
  if (phi2.empty()) throw DomainError("map CSV has no rows");

  OccupationMap map;
  std::size_t cols = 1;
  while (cols < phi2.size() && phi2[cols] == phi2[0]) ++cols;
  if (phi2.size() % cols != 0) throw DomainError("map CSV is not a complete grid");
  const std::size_t rows = phi2.size() / cols;
  for (std::size_t i = 0; i < rows; ++i) {
    map.grid.phi2_axis.push_back(phi2[i * cols]);
    for (std::size_t j = 0; j < cols; ++j) {
      if (phi2[i * cols + j] != phi2[i * cols] || area[i * cols + j] != area[j]) {
        throw DomainError("map CSV rows are not in row-major grid order");
      }
    }
  }
  map.grid.area_axis.assign(area.begin(), area.begin() + static_cast<std::ptrdiff_t>(cols));
  map.values = std::move(occ);

  if (meta.is_object()) {
    if (meta.contains("ensemble")) map.ensemble = ensemble_from_json(meta.at("ensemble"));
    if (meta.contains("base_pulse")) map.base = pulse_from_json(meta.at("base_pulse"));
    if (meta.contains("integrator")) map.integrator = integrator_from_json(meta.at("integrator"));
    map.version = get_or<std::string>(meta, "version", "");
  }
  map.validate();
  return map;
}

void write_polylines_csv(std::ostream& os, const std::vector<Polyline>& lines) {
  os << "polyline,phi2_ps2,area_pi\n";
  for (std::size_t k = 0; k < lines.size(); ++k) {
    for (const auto& p : lines[k]) os << k << ',' << format_number(p.phi2_ps2) << ',' << format_number(p.area_pi) << '\n';
  }
}

void write_scan_csv(std::ostream& os, const ScanResult& scan) {
  os << "area_pi";
  for (const auto& c : scan.curves) os << ',' << c.name;
  os << '\n';
  for (std::size_t j = 0; j < scan.area_axis.size(); ++j) {
    os << format_number(scan.area_axis[j]);
    for (const auto& c : scan.curves) os << ',' << format_number(c.occupation[j]);
    os << '\n';
  }
}

nlohmann::json scan_meta(const ScanResult& scan) {
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : scan.curves) {
    nlohmann::json entry{{"name", c.name},
                         {"detuning_meV", c.detuning_mev},
                         {"phi2_ps2", c.phi2_ps2},
                         {"dipole_scale", c.dipole_scale}};
    if (const auto fm = first_maximum(scan.area_axis, c.occupation)) {
      entry["first_maximum"] = {{"area_pi", fm->area_pi}, {"occupation", fm->occupation}};
    }
    curves.push_back(std::move(entry));
  }
  return {{"tau0_ps", scan.tau0_ps}, {"center_energy_meV", scan.center_energy_mev}, {"curves", curves}};
}

}  // namespace qdarp
