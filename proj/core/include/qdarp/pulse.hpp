#pragma once

namespace qdarp {

/// A Gaussian laser pulse described by its transform-limited parameters and
/// the quadratic spectral phase applied on top of them.
///
/// `tau0_ps` is the intensity FWHM of the transform-limited pulse. `area_pi`
/// is the pulse area of that transform-limited pulse, in units of pi, for a
/// dot at the mean dipole moment. Chirping keeps the pulse energy fixed and
/// so keeps the same `area_pi` label while the envelope stretches.
struct PulseSpec {
  double tau0_ps = 0.12;
  double area_pi = 1.0;
  double center_energy_mev = 1063.0;
  double phi2_ps2 = 0.0;

  /// Throws DomainError unless tau0 > 0, area >= 0 and all fields finite.
  void validate() const;
};

/// Time-domain description of a (possibly) chirped pulse.
struct ChirpedPulseParams {
  double alpha = 0.0;        ///< temporal chirp rate, rad/ps^2
  double tau_chirped = 0.0;  ///< stretched intensity FWHM, ps
  double peak_rabi = 0.0;    ///< peak Rabi frequency, rad/ps
};

/// Temporal chirp rate alpha = 2 phi2 / (tau0^4 / (2 ln 2)^2 + (2 phi2)^2).
double chirp_rate(double phi2_ps2, double tau0_ps);

/// Intensity FWHM after applying phi2: tau0 sqrt(1 + (4 ln 2 phi2 / tau0^2)^2).
double stretched_duration(double phi2_ps2, double tau0_ps);

/// Peak Rabi frequency of the transform-limited envelope, chosen so that
/// the envelope integrates to area * pi * dipole_scale.
double transform_limited_peak_rabi(const PulseSpec& pulse, double dipole_scale);

ChirpedPulseParams chirped_params(const PulseSpec& pulse, double dipole_scale);

/// Omega(t) = peak exp(-2 ln 2 t^2 / tau^2), with tau the stretched duration.
double rabi_envelope(const PulseSpec& pulse, double dipole_scale, double t_ps);

/// Static detuning (E_qd - hbar omega_l) / hbar in rad/ps.
double static_detuning(const PulseSpec& pulse, double qd_energy_mev);

/// Delta(t) = Delta0 - 2 alpha t.
double instantaneous_detuning(const PulseSpec& pulse, double qd_energy_mev, double t_ps);

}  // namespace qdarp
