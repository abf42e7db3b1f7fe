#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qdarp/pulse.hpp"

namespace qdarp {

/// Pure state of the two-level exciton in the frame co-rotating with the
/// instantaneous laser phase.
struct TwoLevelState {
  std::complex<double> c0{1.0, 0.0};
  std::complex<double> c1{0.0, 0.0};

  double occupation() const { return std::norm(c1); }
  double norm() const { return std::norm(c0) + std::norm(c1); }
};

struct QuantumDot {
  double transition_energy_mev = 1063.0;
  double dipole_scale = 1.0;  ///< mu / mean mu

  void validate() const;
};

/// Fixed-step RK4 settings.
///
/// With `dt_ps == 0` the step is chosen automatically as the smaller of
/// tau_chirped / steps_per_duration and max_phase_step / max(|Delta|, Omega_pk),
/// the maxima taken over the integration window and every dot in the batch.
/// The window is [-t_span_factor, +t_span_factor] * tau_chirped.
struct IntegratorParams {
  double dt_ps = 0.0;
  double t_span_factor = 4.0;
  double norm_tol = 1e-9;
  double steps_per_duration = 2000.0;
  double max_phase_step = 0.05;

  void validate() const;
};

/// Resolved time grid: `steps` equal steps of `dt` starting at `t_start`.
struct StepPlan {
  double t_start = 0.0;
  double dt = 0.0;
  std::int64_t steps = 0;

  double t_end() const { return t_start + static_cast<double>(steps) * dt; }
};

StepPlan plan_steps(const PulseSpec& pulse, std::span<const QuantumDot> dots, const IntegratorParams& params);

struct EvolveResult {
  TwoLevelState state;
  double occupation = 0.0;
  double norm_drift = 0.0;  ///< | |c0|^2 + |c1|^2 - 1 | at the end of the window
};

/// Integrates i dc/dt = (1/2) [[-Delta, Omega], [Omega, Delta]] c from |0>
/// across the pulse window. Throws IntegrationError when the norm drifts by
/// more than params.norm_tol.
EvolveResult evolve(const PulseSpec& pulse, const QuantumDot& qd, const IntegratorParams& params = {});

/// Evolves every dot on one shared time grid (see plan_steps). Element i of
/// the result belongs to dots[i]; results do not depend on the batch order
/// beyond the shared step size. IntegrationError carries the offending dot.
std::vector<EvolveResult> evolve_batch(const PulseSpec& pulse, std::span<const QuantumDot> dots,
                                       const IntegratorParams& params = {});

struct TrajectoryPoint {
  double t_ps = 0.0;
  TwoLevelState state;
};

/// Same integration as evolve(), sampled at most `max_points` times
/// (always including both window ends).
std::vector<TrajectoryPoint> evolve_trajectory(const PulseSpec& pulse, const QuantumDot& qd,
                                               const IntegratorParams& params, std::size_t max_points);

struct DressedEnergies {
  double minus_mev = 0.0;
  double plus_mev = 0.0;

  double gap_mev() const { return plus_mev - minus_mev; }
};

/// E+- = +-(hbar / 2) sqrt(Omega^2 + Delta^2).
DressedEnergies dressed_energies(double omega_rad_ps, double delta_rad_ps);

struct DressedSample {
  double t_ps = 0.0;
  double rabi = 0.0;
  double detuning = 0.0;
  DressedEnergies energies;
};

/// Dressed-state energies at `n_samples` evenly spaced times across the
/// integration window. Requires n_samples >= 2.
std::vector<DressedSample> dressed_state_track(const PulseSpec& pulse, const QuantumDot& qd, std::size_t n_samples,
                                               double t_span_factor = 4.0);

/// max_t |Delta dOmega/dt - Omega dDelta/dt| / (Omega^2 + Delta^2)^(3/2),
/// sampled on the integration window. Small values mean adiabatic following.
/// Throws UndefinedParameterError when Omega and Delta vanish identically.
double adiabaticity_parameter(const PulseSpec& pulse, const QuantumDot& qd, std::size_t n_samples,
                              double t_span_factor = 4.0);

}  // namespace qdarp
