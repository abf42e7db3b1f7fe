#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdarp/dynamics.hpp"
#include "qdarp/pulse.hpp"

namespace qdarp {

struct ScanCurve {
  std::string name;
  double detuning_mev = 0.0;  ///< E_qd - laser center
  double phi2_ps2 = 0.0;
  double dipole_scale = 1.0;
  std::vector<double> occupation;  ///< one value per area_axis entry
};

/// Single-dot occupation versus pulse area (the simulated stand-in for
/// PL versus square root of excitation power).
struct ScanResult {
  std::vector<double> area_axis;  ///< units of pi, strictly increasing
  std::vector<ScanCurve> curves;
  double tau0_ps = 0.12;
  double center_energy_mev = 1063.0;

  void validate() const;
};

struct FirstMaximum {
  std::size_t index = 0;
  double area_pi = 0.0;
  double occupation = 0.0;
};

/// First interior sample that is >= its left neighbour and > its right
/// neighbour. nullopt for curves without an interior maximum (e.g. an ARP
/// plateau that keeps rising).
std::optional<FirstMaximum> first_maximum(std::span<const double> area_axis, std::span<const double> occupation);

/// Unchirped Rabi rotations, one curve per detuning (meV) of the dot from
/// the laser center.
ScanResult rabi_detuning_scan(std::span<const double> detunings_mev, std::span<const double> area_axis,
                              double tau0_ps = 0.12, const IntegratorParams& params = {}, double dipole_scale = 1.0,
                              unsigned workers = 0);

/// The QD A / QD B geometry: transitions 8 meV apart with the laser at the
/// midpoint, and QD B coupling 25% more strongly than QD A.
struct TwoDotScenario {
  QuantumDot a{1067.0, 1.0};
  QuantumDot b{1059.0, 1.25};
  PulseSpec laser{0.12, 1.0, 1063.0, 0.0};
};

/// Area scans of both dots for each chirp in `phi2_values`. Curves are
/// ordered A then B, each over phi2_values in the given order.
ScanResult two_dot_comparison(const QuantumDot& qd_a, const QuantumDot& qd_b, const PulseSpec& laser,
                              std::span<const double> area_axis, std::span<const double> phi2_values,
                              const IntegratorParams& params = {}, unsigned workers = 0);

}  // namespace qdarp
