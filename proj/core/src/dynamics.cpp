#include "qdarp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qdarp/errors.hpp"
#include "qdarp/units.hpp"

namespace qdarp {
namespace {

// Integration runs in the interaction picture of the detuning term,
//   c0 = b0 exp(+i Phi / 2),  c1 = b1 exp(-i Phi / 2),  Phi(t) = Delta0 t - alpha t^2,
// which leaves  db0/dt = -i conj(g) b1,  db1/dt = -i g b0  with g = (Omega / 2) exp(i Phi).
// The occupation |c1|^2 = |b1|^2 is unchanged and far from the pulse g ~ 0,
// so the long detuned wings cost no norm.

// Per-dot phasor exp(i Delta0 t) is advanced by complex multiplication and
// recomputed exactly every kResyncSteps steps.
constexpr std::int64_t kResyncSteps = 256;

struct Drive {
  double half_peak;  // Omega_pk / 2 at unit dipole scale
  double inv_tau2;   // 2 ln 2 / tau^2
  double alpha;

  void at(double t, double& re, double& im) const {
    const double amp = half_peak * std::exp(-inv_tau2 * t * t);
    const double phase = -alpha * t * t;
    re = amp * std::cos(phase);
    im = amp * std::sin(phase);
  }
};

struct BatchState {
  std::vector<double> scale, delta0;
  std::vector<double> b0r, b0i, b1r, b1i;
  std::vector<double> pr, pi, qr, qi;  // phasor and its half-step increment

  explicit BatchState(std::size_t n)
      : scale(n), delta0(n), b0r(n), b0i(n), b1r(n), b1i(n), pr(n), pi(n), qr(n), qi(n) {}
};

TwoLevelState to_rotating_frame(double b0r, double b0i, double b1r, double b1i, double delta0, double alpha,
                                double t) {
  const double half_phi = 0.5 * (delta0 * t - alpha * t * t);
  const std::complex<double> rot(std::cos(half_phi), std::sin(half_phi));
  return {std::complex<double>(b0r, b0i) * rot, std::complex<double>(b1r, b1i) * std::conj(rot)};
}

struct NoObserver {
  static constexpr bool active = false;
  void operator()(std::int64_t, const BatchState&) {}
};

template <typename F>
struct StepObserver {
  static constexpr bool active = true;
  F fn;
  void operator()(std::int64_t k, const BatchState& s) { fn(k, s); }
};

template <typename Observer>
void integrate(const Drive& drive, const StepPlan& plan, BatchState& s, Observer&& observe) {
  const std::size_t n = s.scale.size();
  const double h = plan.dt;
  const double h2 = 0.5 * h;
  const double h6 = h / 6.0;

  for (std::size_t d = 0; d < n; ++d) {
    s.qr[d] = std::cos(s.delta0[d] * h2);
    s.qi[d] = std::sin(s.delta0[d] * h2);
  }

  double w0r, w0i;
  drive.at(plan.t_start, w0r, w0i);

  for (std::int64_t k = 0; k < plan.steps; ++k) {
    const double t = plan.t_start + static_cast<double>(k) * h;
    const double tm = plan.t_start + (static_cast<double>(k) + 0.5) * h;
    const double te = plan.t_start + static_cast<double>(k + 1) * h;
    double wmr, wmi, wer, wei;
    drive.at(tm, wmr, wmi);
    drive.at(te, wer, wei);

    if (k % kResyncSteps == 0) {
      for (std::size_t d = 0; d < n; ++d) {
        s.pr[d] = std::cos(s.delta0[d] * t);
        s.pi[d] = std::sin(s.delta0[d] * t);
      }
    }

    for (std::size_t d = 0; d < n; ++d) {
      const double sc = s.scale[d];
      const double p0r = s.pr[d], p0i = s.pi[d];
      const double pmr = p0r * s.qr[d] - p0i * s.qi[d];
      const double pmi = p0r * s.qi[d] + p0i * s.qr[d];
      const double per = pmr * s.qr[d] - pmi * s.qi[d];
      const double pei = pmr * s.qi[d] + pmi * s.qr[d];

      const double g0r = sc * (w0r * p0r - w0i * p0i), g0i = sc * (w0r * p0i + w0i * p0r);
      const double gmr = sc * (wmr * pmr - wmi * pmi), gmi = sc * (wmr * pmi + wmi * pmr);
      const double ger = sc * (wer * per - wei * pei), gei = sc * (wer * pei + wei * per);

      const double a0r = s.b0r[d], a0i = s.b0i[d], a1r = s.b1r[d], a1i = s.b1i[d];

      // db0 = -i conj(g) b1, db1 = -i g b0, with -i (x + i y) = y - i x.
      auto deriv = [](double gr, double gi, double x0r, double x0i, double x1r, double x1i, double& d0r,
                      double& d0i, double& d1r, double& d1i) {
        const double u0r = gr * x1r + gi * x1i;  // conj(g) * b1
        const double u0i = gr * x1i - gi * x1r;
        const double u1r = gr * x0r - gi * x0i;  // g * b0
        const double u1i = gr * x0i + gi * x0r;
        d0r = u0i;
        d0i = -u0r;
        d1r = u1i;
        d1i = -u1r;
      };

      double k10r, k10i, k11r, k11i;
      deriv(g0r, g0i, a0r, a0i, a1r, a1i, k10r, k10i, k11r, k11i);
      double k20r, k20i, k21r, k21i;
      deriv(gmr, gmi, a0r + h2 * k10r, a0i + h2 * k10i, a1r + h2 * k11r, a1i + h2 * k11i, k20r, k20i, k21r, k21i);
      double k30r, k30i, k31r, k31i;
      deriv(gmr, gmi, a0r + h2 * k20r, a0i + h2 * k20i, a1r + h2 * k21r, a1i + h2 * k21i, k30r, k30i, k31r, k31i);
      double k40r, k40i, k41r, k41i;
      deriv(ger, gei, a0r + h * k30r, a0i + h * k30i, a1r + h * k31r, a1i + h * k31i, k40r, k40i, k41r, k41i);

      s.b0r[d] = a0r + h6 * (k10r + 2.0 * k20r + 2.0 * k30r + k40r);
      s.b0i[d] = a0i + h6 * (k10i + 2.0 * k20i + 2.0 * k30i + k40i);
      s.b1r[d] = a1r + h6 * (k11r + 2.0 * k21r + 2.0 * k31r + k41r);
      s.b1i[d] = a1i + h6 * (k11i + 2.0 * k21i + 2.0 * k31i + k41i);
      s.pr[d] = per;
      s.pi[d] = pei;
    }

    w0r = wer;
    w0i = wei;
    if constexpr (std::decay_t<Observer>::active) observe(k + 1, s);
  }
}

struct Prepared {
  Drive drive;
  StepPlan plan;
  double alpha;
};

Prepared prepare(const PulseSpec& pulse, std::span<const QuantumDot> dots, const IntegratorParams& params) {
  const auto cp = chirped_params(pulse, 1.0);
  Prepared out;
  out.alpha = cp.alpha;
  out.drive = Drive{0.5 * cp.peak_rabi, 2.0 * kLn2 / (cp.tau_chirped * cp.tau_chirped), cp.alpha};
  out.plan = plan_steps(pulse, dots, params);
  return out;
}

BatchState initial_state(const PulseSpec& pulse, std::span<const QuantumDot> dots, const Prepared& prep) {
  BatchState s(dots.size());
  const double t0 = prep.plan.t_start;
  for (std::size_t d = 0; d < dots.size(); ++d) {
    s.scale[d] = dots[d].dipole_scale;
    s.delta0[d] = static_detuning(pulse, dots[d].transition_energy_mev);
    // c = |0> at t0 means b0 = exp(-i Phi(t0) / 2).
    const double half_phi = 0.5 * (s.delta0[d] * t0 - prep.alpha * t0 * t0);
    s.b0r[d] = std::cos(half_phi);
    s.b0i[d] = -std::sin(half_phi);
    s.b1r[d] = 0.0;
    s.b1i[d] = 0.0;
  }
  return s;
}

}  // namespace

void QuantumDot::validate() const {
  if (!std::isfinite(transition_energy_mev)) throw DomainError("transition energy must be finite");
  if (!(dipole_scale > 0.0) || !std::isfinite(dipole_scale)) {
    throw DomainError("dipole scale must be positive, got " + std::to_string(dipole_scale));
  }
}

void IntegratorParams::validate() const {
  if (!(dt_ps >= 0.0) || !std::isfinite(dt_ps)) throw DomainError("dt must be positive (or 0 for automatic)");
  if (!(t_span_factor >= 3.0) || !std::isfinite(t_span_factor)) throw DomainError("t_span_factor must be >= 3");
  if (!(norm_tol > 0.0) || !(norm_tol <= 1e-6)) throw DomainError("norm_tol must lie in (0, 1e-6]");
  if (!(steps_per_duration >= 1.0) || !std::isfinite(steps_per_duration)) {
    throw DomainError("steps_per_duration must be >= 1");
  }
  if (!(max_phase_step > 0.0) || !std::isfinite(max_phase_step)) throw DomainError("max_phase_step must be positive");
}

StepPlan plan_steps(const PulseSpec& pulse, std::span<const QuantumDot> dots, const IntegratorParams& params) {
  params.validate();
  const auto cp = chirped_params(pulse, 1.0);
  const double half_window = params.t_span_factor * cp.tau_chirped;
  const double span = 2.0 * half_window;

  double raw_dt = params.dt_ps;
  if (raw_dt == 0.0) {
    double max_scale = 0.0;
    double max_detuning = 0.0;
    for (const auto& qd : dots) {
      max_scale = std::max(max_scale, qd.dipole_scale);
      max_detuning = std::max(max_detuning, std::abs(static_detuning(pulse, qd.transition_energy_mev)));
    }
    max_detuning += 2.0 * std::abs(cp.alpha) * half_window;
    const double fastest = std::max(max_detuning, cp.peak_rabi * max_scale);
    raw_dt = cp.tau_chirped / params.steps_per_duration;
    if (fastest > 0.0) raw_dt = std::min(raw_dt, params.max_phase_step / fastest);
  }
  // Snap to an integer number of steps; the small slack keeps an exact
  // halving of a resolved dt from rounding up to an extra step.
  const auto steps = static_cast<std::int64_t>(std::ceil(span / raw_dt - 1e-9));
  StepPlan plan;
  plan.steps = std::max<std::int64_t>(steps, 1);
  plan.dt = span / static_cast<double>(plan.steps);
  plan.t_start = -half_window;
  return plan;
}

std::vector<EvolveResult> evolve_batch(const PulseSpec& pulse, std::span<const QuantumDot> dots,
                                       const IntegratorParams& params) {
  pulse.validate();
  for (const auto& qd : dots) qd.validate();
  if (dots.empty()) return {};

  const auto prep = prepare(pulse, dots, params);
  auto s = initial_state(pulse, dots, prep);
  integrate(prep.drive, prep.plan, s, NoObserver{});

  const double t_end = prep.plan.t_end();
  std::vector<EvolveResult> out(dots.size());
  for (std::size_t d = 0; d < dots.size(); ++d) {
    auto& r = out[d];
    r.state = to_rotating_frame(s.b0r[d], s.b0i[d], s.b1r[d], s.b1i[d], s.delta0[d], prep.alpha, t_end);
    r.occupation = s.b1r[d] * s.b1r[d] + s.b1i[d] * s.b1i[d];
    const double norm = s.b0r[d] * s.b0r[d] + s.b0i[d] * s.b0i[d] + r.occupation;
    r.norm_drift = std::abs(norm - 1.0);
    r.occupation = std::min(r.occupation, 1.0);
    if (!(r.norm_drift <= params.norm_tol)) {
      IntegrationError err("norm drift " + std::to_string(r.norm_drift) + " exceeds tolerance " +
                               std::to_string(params.norm_tol) + " for dot " + std::to_string(d) +
                               "; reduce dt",
                           r.norm_drift);
      err.dot_index = d;
      throw err;
    }
  }
  return out;
}

EvolveResult evolve(const PulseSpec& pulse, const QuantumDot& qd, const IntegratorParams& params) {
  return evolve_batch(pulse, std::span<const QuantumDot>(&qd, 1), params).front();
}

std::vector<TrajectoryPoint> evolve_trajectory(const PulseSpec& pulse, const QuantumDot& qd,
                                               const IntegratorParams& params, std::size_t max_points) {
  pulse.validate();
  qd.validate();
  if (max_points < 2) throw DomainError("trajectory needs at least 2 points");

  const std::span<const QuantumDot> one(&qd, 1);
  const auto prep = prepare(pulse, one, params);
  auto s = initial_state(pulse, one, prep);
  const auto stride = std::max<std::int64_t>(
      1, (prep.plan.steps + static_cast<std::int64_t>(max_points) - 2) / static_cast<std::int64_t>(max_points - 1));

  std::vector<TrajectoryPoint> out;
  auto record = [&](std::int64_t k) {
    const double t = prep.plan.t_start + static_cast<double>(k) * prep.plan.dt;
    out.push_back({t, to_rotating_frame(s.b0r[0], s.b0i[0], s.b1r[0], s.b1i[0], s.delta0[0], prep.alpha, t)});
  };
  record(0);

  const std::int64_t last = prep.plan.steps;
  auto on_step = [&](std::int64_t k, const BatchState&) {
    if (k % stride == 0 || k == last) record(k);
  };
  integrate(prep.drive, prep.plan, s, StepObserver<decltype(on_step)>{on_step});

  const double drift = std::abs(out.back().state.norm() - 1.0);
  if (!(drift <= params.norm_tol)) {
    throw IntegrationError("norm drift " + std::to_string(drift) + " exceeds tolerance; reduce dt", drift);
  }
  return out;
}

DressedEnergies dressed_energies(double omega_rad_ps, double delta_rad_ps) {
  const double half = 0.5 * kHbarMeVps * std::hypot(omega_rad_ps, delta_rad_ps);
  return {-half, half};
}

std::vector<DressedSample> dressed_state_track(const PulseSpec& pulse, const QuantumDot& qd, std::size_t n_samples,
                                               double t_span_factor) {
  qd.validate();
  if (n_samples < 2) throw DomainError("dressed_state_track needs n_samples >= 2");
  const auto cp = chirped_params(pulse, qd.dipole_scale);
  const double half_window = t_span_factor * cp.tau_chirped;
  const double delta0 = static_detuning(pulse, qd.transition_energy_mev);
  const double inv_tau2 = 2.0 * kLn2 / (cp.tau_chirped * cp.tau_chirped);

  std::vector<DressedSample> out(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto& smp = out[i];
    smp.t_ps = -half_window + 2.0 * half_window * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    smp.rabi = cp.peak_rabi * std::exp(-inv_tau2 * smp.t_ps * smp.t_ps);
    smp.detuning = delta0 - 2.0 * cp.alpha * smp.t_ps;
    smp.energies = dressed_energies(smp.rabi, smp.detuning);
  }
  return out;
}

double adiabaticity_parameter(const PulseSpec& pulse, const QuantumDot& qd, std::size_t n_samples,
                              double t_span_factor) {
  const auto cp = chirped_params(pulse, qd.dipole_scale);
  const double delta0 = static_detuning(pulse, qd.transition_energy_mev);
  if (cp.peak_rabi == 0.0 && delta0 == 0.0 && cp.alpha == 0.0) {
    throw UndefinedParameterError("adiabaticity parameter undefined: Omega and Delta vanish over the whole window");
  }
  const double inv_tau2 = 2.0 * kLn2 / (cp.tau_chirped * cp.tau_chirped);
  const double d_delta = -2.0 * cp.alpha;

  double r_max = 0.0;
  for (const auto& smp : dressed_state_track(pulse, qd, n_samples, t_span_factor)) {
    const double d_rabi = -2.0 * inv_tau2 * smp.t_ps * smp.rabi;
    const double num = std::abs(smp.detuning * d_rabi - smp.rabi * d_delta);
    if (num == 0.0) continue;
    const double sq = smp.rabi * smp.rabi + smp.detuning * smp.detuning;
    const double r = sq > 0.0 ? num / (sq * std::sqrt(sq)) : std::numeric_limits<double>::infinity();
    r_max = std::max(r_max, r);
  }
  return r_max;
}

}  // namespace qdarp
