#include "qdarp/ensemble.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <random>
#include <string>

#include "qdarp/errors.hpp"
#include "qdarp/units.hpp"

namespace qdarp {
namespace {

constexpr std::size_t kMaxDipoleBins = 13;

double standard_normal_quantile(double p) {
  static const boost::math::normal_distribution<double> unit;
  return boost::math::quantile(unit, p);
}

std::vector<double> quantile_midpoints(std::size_t bins) {
  std::vector<double> z(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    z[i] = standard_normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(bins));
  }
  return z;
}

}  // namespace

std::string_view to_string(Sampling s) {
  switch (s) {
    case Sampling::DeterministicQuantile:
      return "deterministic-quantile";
    case Sampling::SeededRandom:
      return "seeded-random";
  }
  return "unknown";
}

Sampling sampling_from_string(std::string_view s) {
  if (s == "deterministic-quantile" || s == "quantile") return Sampling::DeterministicQuantile;
  if (s == "seeded-random" || s == "random") return Sampling::SeededRandom;
  throw DomainError("unknown sampling mode '" + std::string(s) + "'");
}

void EnsembleSpec::validate() const {
  if (n_dots == 0) throw DomainError("ensemble needs at least one dot");
  if (!(energy_fwhm_mev >= 0.0) || !std::isfinite(energy_fwhm_mev)) throw DomainError("energy FWHM must be >= 0");
  if (!(dipole_fwhm_debye >= 0.0) || !std::isfinite(dipole_fwhm_debye)) throw DomainError("dipole FWHM must be >= 0");
  if (!(dipole_mean_debye > 0.0) || !std::isfinite(dipole_mean_debye)) throw DomainError("dipole mean must be > 0");
  if (!std::isfinite(energy_mean_mev)) throw DomainError("energy mean must be finite");
}

std::pair<std::size_t, std::size_t> quantile_layout(std::size_t n_dots) {
  if (n_dots == 0) throw DomainError("ensemble needs at least one dot");
  std::size_t dipole_bins = 1;
  for (std::size_t d = std::min(kMaxDipoleBins, n_dots); d >= 1; --d) {
    if (n_dots % d == 0) {
      dipole_bins = d;
      break;
    }
  }
  return {n_dots / dipole_bins, dipole_bins};
}

Ensemble sample_ensemble(const EnsembleSpec& spec) {
  spec.validate();
  const double energy_sigma = spec.energy_fwhm_mev / kFwhmPerSigma;
  const double scale_sigma = spec.dipole_fwhm_debye / kFwhmPerSigma / spec.dipole_mean_debye;

  Ensemble out;
  out.spec = spec;
  out.dots.reserve(spec.n_dots);

  if (spec.sampling == Sampling::DeterministicQuantile) {
    const auto [n_energy, n_dipole] = quantile_layout(spec.n_dots);
    const auto ze = quantile_midpoints(n_energy);
    const auto zd = quantile_midpoints(n_dipole);
    for (std::size_t i = 0; i < n_energy; ++i) {
      for (std::size_t j = 0; j < n_dipole; ++j) {
        QuantumDot qd{spec.energy_mean_mev + energy_sigma * ze[i], 1.0 + scale_sigma * zd[j]};
        qd.validate();
        out.dots.push_back(qd);
      }
    }
    return out;
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t n = 0; n < spec.n_dots; ++n) {
    const double energy = spec.energy_mean_mev + energy_sigma * normal(rng);
    double scale = 1.0 + scale_sigma * normal(rng);
    // Non-physical dipoles are redrawn (truncates a tail far beyond any
    // realistic spread).
    while (!(scale > 0.0)) scale = 1.0 + scale_sigma * normal(rng);
    out.dots.push_back({energy, scale});
  }
  return out;
}

double mean_occupation(const Ensemble& ensemble, const PulseSpec& pulse, const IntegratorParams& params) {
  if (ensemble.dots.empty()) throw DomainError("mean_occupation needs a non-empty ensemble");
  const auto results = evolve_batch(pulse, ensemble.dots, params);
  // Running mean: exact for identical samples and fixed in index order.
  double mean = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    mean += (results[i].occupation - mean) / static_cast<double>(i + 1);
  }
  return std::clamp(mean, 0.0, 1.0);
}

}  // namespace qdarp
