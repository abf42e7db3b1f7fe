#include "qdarp/pulse.hpp"

#include <cmath>
#include <string>

#include "qdarp/errors.hpp"
#include "qdarp/units.hpp"

namespace qdarp {
namespace {

void require_positive_duration(double tau0_ps) {
  if (!(tau0_ps > 0.0) || !std::isfinite(tau0_ps)) {
    throw DomainError("pulse duration must be positive and finite, got " + std::to_string(tau0_ps));
  }
}

// Integral of exp(-2 ln 2 t^2 / tau^2) over t, divided by tau.
const double kEnvelopeIntegralPerTau = std::sqrt(kPi / (2.0 * kLn2));

}  // namespace

void PulseSpec::validate() const {
  require_positive_duration(tau0_ps);
  if (!(area_pi >= 0.0) || !std::isfinite(area_pi)) {
    throw DomainError("pulse area must be non-negative and finite");
  }
  if (!std::isfinite(center_energy_mev)) throw DomainError("center energy must be finite");
  if (!std::isfinite(phi2_ps2)) throw DomainError("spectral chirp must be finite");
}

double chirp_rate(double phi2_ps2, double tau0_ps) {
  require_positive_duration(tau0_ps);
  const double t2 = tau0_ps * tau0_ps;
  const double denom = t2 * t2 / ((2.0 * kLn2) * (2.0 * kLn2)) + (2.0 * phi2_ps2) * (2.0 * phi2_ps2);
  return 2.0 * phi2_ps2 / denom;
}

double stretched_duration(double phi2_ps2, double tau0_ps) {
  require_positive_duration(tau0_ps);
  const double x = 4.0 * kLn2 * phi2_ps2 / (tau0_ps * tau0_ps);
  return tau0_ps * std::sqrt(1.0 + x * x);
}

double transform_limited_peak_rabi(const PulseSpec& pulse, double dipole_scale) {
  return pulse.area_pi * kPi * dipole_scale / (pulse.tau0_ps * kEnvelopeIntegralPerTau);
}

ChirpedPulseParams chirped_params(const PulseSpec& pulse, double dipole_scale) {
  pulse.validate();
  ChirpedPulseParams out;
  out.alpha = chirp_rate(pulse.phi2_ps2, pulse.tau0_ps);
  out.tau_chirped = stretched_duration(pulse.phi2_ps2, pulse.tau0_ps);
  // Equal pulse energy: peak^2 * tau stays at its transform-limited value.
  out.peak_rabi = transform_limited_peak_rabi(pulse, dipole_scale) * std::sqrt(pulse.tau0_ps / out.tau_chirped);
  return out;
}

double rabi_envelope(const PulseSpec& pulse, double dipole_scale, double t_ps) {
  const auto p = chirped_params(pulse, dipole_scale);
  return p.peak_rabi * std::exp(-2.0 * kLn2 * t_ps * t_ps / (p.tau_chirped * p.tau_chirped));
}

double static_detuning(const PulseSpec& pulse, double qd_energy_mev) {
  return mev_to_rad_per_ps(qd_energy_mev - pulse.center_energy_mev);
}

double instantaneous_detuning(const PulseSpec& pulse, double qd_energy_mev, double t_ps) {
  const double alpha = chirp_rate(pulse.phi2_ps2, pulse.tau0_ps);
  return static_detuning(pulse, qd_energy_mev) - 2.0 * alpha * t_ps;
}

}  // namespace qdarp
