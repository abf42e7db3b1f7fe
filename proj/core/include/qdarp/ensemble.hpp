#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "qdarp/dynamics.hpp"
#include "qdarp/pulse.hpp"

namespace qdarp {

enum class Sampling {
  /// Inverse-CDF midpoints of equal-probability bins on an energy x dipole
  /// product grid. Reproducible bit for bit.
  DeterministicQuantile,
  /// Independent normal draws from a seeded mt19937_64.
  SeededRandom,
};

std::string_view to_string(Sampling s);
Sampling sampling_from_string(std::string_view s);

/// Gaussian distributions of transition energy and dipole moment.
struct EnsembleSpec {
  std::size_t n_dots = 468;
  double energy_mean_mev = 1063.0;
  double energy_fwhm_mev = 10.0;
  double dipole_mean_debye = 25.0;
  double dipole_fwhm_debye = 4.0;
  Sampling sampling = Sampling::DeterministicQuantile;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Ensemble {
  std::vector<QuantumDot> dots;
  EnsembleSpec spec;
};

/// (energy bins, dipole bins) used by quantile sampling: the dipole count is
/// the largest divisor of n_dots not above 13, so 468 dots give 36 x 13.
std::pair<std::size_t, std::size_t> quantile_layout(std::size_t n_dots);

/// Draws the ensemble. Dipoles are stored as mu / dipole_mean. Quantile
/// samples are ordered energy-major: dot (i, j) sits at i * n_dipole + j.
Ensemble sample_ensemble(const EnsembleSpec& spec);

/// Unweighted mean of the final occupations of all dots, evolved on one
/// shared time grid and reduced in index order.
double mean_occupation(const Ensemble& ensemble, const PulseSpec& pulse, const IntegratorParams& params = {});

}  // namespace qdarp
