#include "qdarp/sweep.hpp"

#include <cmath>
#include <string>

#include "qdarp/errors.hpp"
#include "qdarp/parallel.hpp"

#ifndef QDARP_VERSION_STRING
#define QDARP_VERSION_STRING "unknown"
#endif

namespace qdarp {
namespace {

void require_axis(const std::vector<double>& axis, const char* name) {
  if (axis.size() < 2) throw DomainError(std::string(name) + " axis needs at least 2 points");
  for (std::size_t k = 0; k < axis.size(); ++k) {
    if (!std::isfinite(axis[k])) throw DomainError(std::string(name) + " axis has a non-finite value");
    if (k > 0 && !(axis[k] > axis[k - 1])) {
      throw DomainError(std::string(name) + " axis must be strictly increasing");
    }
  }
}

}  // namespace

std::string_view library_version() { return QDARP_VERSION_STRING; }

void SweepGrid::validate() const {
  require_axis(phi2_axis, "phi2");
  require_axis(area_axis, "area");
  if (area_axis.front() < 0.0) throw DomainError("area axis must be non-negative");
}

std::vector<double> SweepGrid::linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw DomainError("linspace needs at least 2 points");
  std::vector<double> v(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) v[k] = lo + step * static_cast<double>(k);
  v.back() = hi;
  return v;
}

SweepGrid SweepGrid::uniform(double phi2_lo, double phi2_hi, std::size_t n_phi2, double area_lo, double area_hi,
                             std::size_t n_area) {
  SweepGrid g{linspace(phi2_lo, phi2_hi, n_phi2), linspace(area_lo, area_hi, n_area)};
  g.validate();
  return g;
}

SweepGrid fig4_grid() { return SweepGrid::uniform(0.0, 0.06, 61, 0.0, 5.0, 51); }

SweepGrid symmetric_grid() { return SweepGrid::uniform(-0.1, 0.1, 41, 0.0, 5.0, 51); }

void OccupationMap::validate() const {
  grid.validate();
  if (values.size() != rows() * cols()) throw DomainError("occupation map shape does not match its axes");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("occupation map value outside [0, 1]");
  }
}

OccupationMap occupation_map(const SweepGrid& grid, const EnsembleSpec& spec, const PulseSpec& base,
                             const IntegratorParams& params, unsigned workers) {
  grid.validate();
  base.validate();
  params.validate();
  const Ensemble ensemble = sample_ensemble(spec);

  OccupationMap map;
  map.grid = grid;
  map.ensemble = spec;
  map.base = base;
  map.integrator = params;
  map.version = std::string(library_version());
  map.values.assign(grid.phi2_axis.size() * grid.area_axis.size(), 0.0);

  const std::size_t cols = grid.area_axis.size();
  parallel_for(map.values.size(), resolve_workers(workers), [&](std::size_t cell) {
    const std::size_t i = cell / cols;
    const std::size_t j = cell % cols;
    PulseSpec pulse = base;
    pulse.phi2_ps2 = grid.phi2_axis[i];
    pulse.area_pi = grid.area_axis[j];
    try {
      map.values[cell] = mean_occupation(ensemble, pulse, params);
    } catch (IntegrationError& e) {
      IntegrationError located(std::string(e.what()) + " at cell (phi2=" + std::to_string(pulse.phi2_ps2) +
                                   " ps^2, area=" + std::to_string(pulse.area_pi) + " pi)",
                               e.norm_drift());
      located.dot_index = e.dot_index;
      located.phi2_index = i;
      located.area_index = j;
      throw located;
    }
  });
  return map;
}

}  // namespace qdarp
