#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qdarp/dynamics.hpp"
#include "qdarp/ensemble.hpp"
#include "qdarp/pulse.hpp"

namespace qdarp {

std::string_view library_version();

/// Chirp x pulse-area grid. Both axes strictly increasing, >= 2 points.
struct SweepGrid {
  std::vector<double> phi2_axis;  ///< ps^2
  std::vector<double> area_axis;  ///< units of pi

  void validate() const;

  /// n evenly spaced points from lo to hi, endpoints exact.
  static std::vector<double> linspace(double lo, double hi, std::size_t n);
  static SweepGrid uniform(double phi2_lo, double phi2_hi, std::size_t n_phi2, double area_lo, double area_hi,
                           std::size_t n_area);
};

/// phi2 in [0, 0.06] ps^2 (61 points) x area in [0, 5] pi (51 points).
SweepGrid fig4_grid();
/// phi2 in [-0.1, 0.1] ps^2 (41 points) x area in [0, 5] pi (51 points).
SweepGrid symmetric_grid();

/// Ensemble-mean occupation on a grid. values are row-major with one row
/// per phi2 value: values[i * area_axis.size() + j].
struct OccupationMap {
  SweepGrid grid;
  std::vector<double> values;
  EnsembleSpec ensemble;
  PulseSpec base;
  IntegratorParams integrator;
  std::string version;

  std::size_t rows() const { return grid.phi2_axis.size(); }
  std::size_t cols() const { return grid.area_axis.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }

  /// Checks axis invariants, matrix shape and that values lie in [0, 1].
  void validate() const;
};

/// Cell (i, j) is mean_occupation with phi2 = phi2_axis[i] and
/// area = area_axis[j], every other pulse field taken from `base`. Cells run
/// on `workers` threads (0 = resolve_workers()); the result is identical
/// for any worker count. Integration failures are rethrown with the cell
/// indices attached.
OccupationMap occupation_map(const SweepGrid& grid, const EnsembleSpec& spec, const PulseSpec& base,
                             const IntegratorParams& params = {}, unsigned workers = 0);

}  // namespace qdarp
