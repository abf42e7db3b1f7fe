#!/usr/bin/env python3
"""Independent reference values for the C++ test-suite.

Integrates the rotating-frame two-level equations with scipy's adaptive
DOP853 at tight tolerances (no fixed step, no interaction picture) and
evaluates closed-form pulse quantities with mpmath. Values printed here are
frozen into tests/*.cpp; rerun this script after changing any convention.
"""
import mpmath as mp
import numpy as np
from scipy.integrate import solve_ivp
from scipy.stats import norm

HBAR = 0.6582119569  # meV ps
LN2 = np.log(2.0)


def chirp_rate(phi2, tau0):
    return 2 * phi2 / (tau0**4 / (2 * LN2) ** 2 + (2 * phi2) ** 2)


def stretched(phi2, tau0):
    return tau0 * np.sqrt(1 + (4 * LN2 * phi2 / tau0**2) ** 2)


def peak(area, phi2, tau0, s):
    tl = area * np.pi * s / (tau0 * np.sqrt(np.pi / (2 * LN2)))
    return tl * np.sqrt(tau0 / stretched(phi2, tau0))


def occupation(area, phi2, detuning_mev, s=1.0, tau0=0.12, span=4.0):
    tau = stretched(phi2, tau0)
    a = chirp_rate(phi2, tau0)
    pk = peak(area, phi2, tau0, s)
    d0 = detuning_mev / HBAR

    def rhs(t, y):
        c0 = y[0] + 1j * y[1]
        c1 = y[2] + 1j * y[3]
        om = pk * np.exp(-2 * LN2 * t * t / tau**2)
        de = d0 - 2 * a * t
        d0dt = -0.5j * (-de * c0 + om * c1)
        d1dt = -0.5j * (om * c0 + de * c1)
        return [d0dt.real, d0dt.imag, d1dt.real, d1dt.imag]

    sol = solve_ivp(rhs, (-span * tau, span * tau), [1, 0, 0, 0], method="DOP853",
                    rtol=1e-12, atol=1e-13, max_step=tau / 200)
    y = sol.y[:, -1]
    return y[2] ** 2 + y[3] ** 2


def r_max(area, phi2, detuning_mev, tau0=0.12, span=4.0, n=200001):
    tau = stretched(phi2, tau0)
    a = chirp_rate(phi2, tau0)
    pk = peak(area, phi2, tau0, 1.0)
    t = np.linspace(-span * tau, span * tau, n)
    om = pk * np.exp(-2 * LN2 * t * t / tau**2)
    dom = -4 * LN2 * t / tau**2 * om
    de = detuning_mev / HBAR - 2 * a * t
    dde = -2 * a
    return np.max(np.abs(de * dom - om * dde) / (om**2 + de**2) ** 1.5)


if __name__ == "__main__":
    mp.mp.dps = 50
    phi2, tau0 = mp.mpf("0.3"), mp.mpf("0.12")
    alpha = 2 * phi2 / (tau0**4 / (2 * mp.log(2)) ** 2 + (2 * phi2) ** 2)
    print("alpha(0.3, 0.12) =", mp.nstr(alpha, 20))
    print("argmax phi2 =", mp.nstr(tau0**2 / (4 * mp.log(2)), 20))
    print("stretched(0.3, 0.12) =", mp.nstr(tau0 * mp.sqrt(1 + (4 * mp.log(2) * phi2 / tau0**2) ** 2), 20))
    print("4 meV -> rad/ps =", 4 / HBAR)
    print("hbar*sqrt2/2 =", HBAR * np.sqrt(2) / 2)

    print("ARP 3pi phi2=0.3 4meV:", repr(occupation(3.0, 0.3, 4.0)))
    print("resonant 1pi:", repr(occupation(1.0, 0.0, 0.0)))

    areas = np.round(np.arange(0.0, 4.0001, 0.05), 10)
    curve = [occupation(a, 0.0, 4.0) for a in areas]
    i = next(k for k in range(1, len(curve) - 1) if curve[k] >= curve[k - 1] and curve[k] > curve[k + 1])
    print("4 meV Rabi first max on 0.05 grid: area", areas[i], "occ", repr(curve[i]))

    print("r_max(2.45pi, 0.018, 0) =", r_max(2.45, 0.018, 0.0))
    print("r_max(0.1pi, 0.3, 0) =", r_max(0.1, 0.3, 0.0))

    z = norm.ppf((np.arange(36) + 0.5) / 36)
    e = z * 10 / (2 * np.sqrt(2 * LN2))
    print("quantile 36 energy empirical FWHM (10 meV):", np.std(e) * 2 * np.sqrt(2 * LN2))
    print("dipole scale sigma:", 4 / (2 * np.sqrt(2 * LN2)) / 25)
