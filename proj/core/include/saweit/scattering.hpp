#pragma once

#include <complex>

#include "saweit/atom.hpp"

namespace saweit {

// Weak-probe scattering of the probe off the ladder.
//
//   r = -Gamma10 / [ 2(gamma10 - i Dp) + Omega_c^2 / (2(gamma20 - i Dp - i Dc)) ]
//   t = 1 + r
//
// The probe amplitude does not enter. With gamma20 = 0 and Dp + Dc = 0 the
// control term diverges and r is exactly zero. Throws SingularModelError if
// the outer denominator vanishes.

std::complex<double> reflection(const LadderRates& rates, double probe_detuning,
                                double control_detuning, double control_rabi);
std::complex<double> reflection(const ThreeLevelAtom& atom, const DriveCondition& drive);

std::complex<double> transmission(const LadderRates& rates, double probe_detuning,
                                  double control_detuning, double control_rabi);
std::complex<double> transmission(const ThreeLevelAtom& atom, const DriveCondition& drive);

/// Transmission when the transmon frequency is flux-tuned under fixed probe
/// and control tones, so the control detuning tracks the probe detuning:
/// Dc = Dp + residual_detuning.
std::complex<double> transmission_flux_sweep(const LadderRates& rates,
                                             double probe_detuning,
                                             double residual_detuning,
                                             double control_rabi);
std::complex<double> transmission_flux_sweep(const ThreeLevelAtom& atom,
                                             double probe_detuning,
                                             double residual_detuning,
                                             double control_rabi);

/// HWHM of the transparency dip in |r|^2 versus control detuning at Dp = 0.
double eit_linewidth(double gamma10, double gamma20, double control_rabi);

/// d arg(t) / d(probe detuning) in seconds, from the closed-form derivative.
/// Throws UndefinedPhaseError where t = 0.
double group_delay(const ThreeLevelAtom& atom, const DriveCondition& drive);

/// Same quantity by central differences of the unwrapped phase with step h.
double group_delay_finite_difference(const ThreeLevelAtom& atom,
                                     const DriveCondition& drive, double step);

}  // namespace saweit
