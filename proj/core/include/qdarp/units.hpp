#pragma once

// Unit system: energies in meV, times in ps, angular frequencies in rad/ps.

namespace qdarp {

inline constexpr double kHbarMeVps = 0.6582119569;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2 = 0.69314718055994530942;

/// Energy offset (meV) to angular frequency (rad/ps).
constexpr double mev_to_rad_per_ps(double mev) { return mev / kHbarMeVps; }
constexpr double rad_per_ps_to_mev(double omega) { return omega * kHbarMeVps; }

/// FWHM of a Gaussian divided by its standard deviation, 2 sqrt(2 ln 2).
inline constexpr double kFwhmPerSigma = 2.35482004503094938202;

}  // namespace qdarp
