#include "qdarp/scans.hpp"

#include <cmath>

#include "qdarp/errors.hpp"
#include "qdarp/io.hpp"
#include "qdarp/parallel.hpp"

namespace qdarp {
namespace {

void require_area_axis(std::span<const double> axis) {
  if (axis.empty()) throw DomainError("area axis must not be empty");
  for (std::size_t k = 0; k < axis.size(); ++k) {
    if (!(axis[k] >= 0.0) || !std::isfinite(axis[k])) throw DomainError("area axis values must be >= 0");
    if (k > 0 && !(axis[k] > axis[k - 1])) throw DomainError("area axis must be strictly increasing");
  }
}

// Fills curve.occupation for every (curve, area) pair, one task per pair.
void run_curves(ScanResult& result, const IntegratorParams& params, unsigned workers) {
  const std::size_t n_area = result.area_axis.size();
  for (auto& c : result.curves) c.occupation.assign(n_area, 0.0);
  parallel_for(result.curves.size() * n_area, resolve_workers(workers), [&](std::size_t task) {
    auto& curve = result.curves[task / n_area];
    const std::size_t j = task % n_area;
    const PulseSpec pulse{result.tau0_ps, result.area_axis[j], result.center_energy_mev, curve.phi2_ps2};
    const QuantumDot qd{result.center_energy_mev + curve.detuning_mev, curve.dipole_scale};
    curve.occupation[j] = evolve(pulse, qd, params).occupation;
  });
}

}  // namespace

void ScanResult::validate() const {
  require_area_axis(area_axis);
  for (const auto& c : curves) {
    if (c.occupation.size() != area_axis.size()) throw DomainError("scan curve length does not match its axis");
    for (double v : c.occupation) {
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("scan occupation outside [0, 1]");
    }
  }
}

std::optional<FirstMaximum> first_maximum(std::span<const double> area_axis, std::span<const double> occupation) {
  if (area_axis.size() != occupation.size()) throw DomainError("axis and curve lengths differ");
  for (std::size_t k = 1; k + 1 < occupation.size(); ++k) {
    if (occupation[k] >= occupation[k - 1] && occupation[k] > occupation[k + 1]) {
      return FirstMaximum{k, area_axis[k], occupation[k]};
    }
  }
  return std::nullopt;
}

ScanResult rabi_detuning_scan(std::span<const double> detunings_mev, std::span<const double> area_axis,
                              double tau0_ps, const IntegratorParams& params, double dipole_scale, unsigned workers) {
  require_area_axis(area_axis);
  ScanResult result;
  result.area_axis.assign(area_axis.begin(), area_axis.end());
  result.tau0_ps = tau0_ps;
  for (double det : detunings_mev) {
    result.curves.push_back({"detuning_" + format_number(det) + "meV", det, 0.0, dipole_scale, {}});
  }
  run_curves(result, params, workers);
  return result;
}

ScanResult two_dot_comparison(const QuantumDot& qd_a, const QuantumDot& qd_b, const PulseSpec& laser,
                              std::span<const double> area_axis, std::span<const double> phi2_values,
                              const IntegratorParams& params, unsigned workers) {
  require_area_axis(area_axis);
  laser.validate();
  qd_a.validate();
  qd_b.validate();
  ScanResult result;
  result.area_axis.assign(area_axis.begin(), area_axis.end());
  result.tau0_ps = laser.tau0_ps;
  result.center_energy_mev = laser.center_energy_mev;
  for (const auto& [label, qd] : {std::pair{"A", qd_a}, std::pair{"B", qd_b}}) {
    for (double phi2 : phi2_values) {
      result.curves.push_back({std::string(label) + "_phi2_" + format_number(phi2),
                               qd.transition_energy_mev - laser.center_energy_mev, phi2, qd.dipole_scale, {}});
    }
  }
  run_curves(result, params, workers);
  return result;
}

}  // namespace qdarp
