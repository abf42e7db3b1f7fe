#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "qdarp/contour.hpp"
#include "qdarp/dynamics.hpp"
#include "qdarp/ensemble.hpp"
#include "qdarp/pulse.hpp"
#include "qdarp/scans.hpp"
#include "qdarp/sweep.hpp"

namespace qdarp {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

/// Strict decimal parse of the whole string; throws DomainError otherwise.
double parse_number(std::string_view text);

// JSON views of the value types (all numeric fields round-trip exactly).
nlohmann::json to_json(const PulseSpec& p);
nlohmann::json to_json(const EnsembleSpec& e);
nlohmann::json to_json(const IntegratorParams& p);
nlohmann::json to_json(const SweepGrid& g);
PulseSpec pulse_from_json(const nlohmann::json& j);
EnsembleSpec ensemble_from_json(const nlohmann::json& j);
IntegratorParams integrator_from_json(const nlohmann::json& j);
SweepGrid grid_from_json(const nlohmann::json& j);

/// CSV header: index,transition_energy_meV,dipole_scale
void write_ensemble_csv(std::ostream& os, const Ensemble& ensemble);
std::vector<QuantumDot> read_ensemble_csv(std::istream& is);

/// Long form, one row per cell in row-major order. Header: phi2_ps2,area_pi,occupation
void write_map_csv(std::ostream& os, const OccupationMap& map);
/// Sidecar with grid, ensemble, base pulse, integrator and version.
nlohmann::json map_meta(const OccupationMap& map);
/// Rebuilds a map from its CSV; meta fields are restored from `meta` when it
/// is an object holding the map_meta() keys.
OccupationMap read_map(std::istream& csv, const nlohmann::json& meta = nullptr);

/// Header: polyline,phi2_ps2,area_pi
void write_polylines_csv(std::ostream& os, const std::vector<Polyline>& lines);

/// Wide form. Header: area_pi,<curve name>...
void write_scan_csv(std::ostream& os, const ScanResult& scan);
nlohmann::json scan_meta(const ScanResult& scan);

}  // namespace qdarp
