#pragma once

#include <array>
#include <complex>
#include <string_view>

namespace saweit {

enum class Regime { Eit, Threshold, AutlerTownes };

std::string_view to_string(Regime regime);

struct RegimeClassification {
  Regime regime = Regime::Eit;
  double threshold = 0.0;  // max(gamma10 - gamma20, 0)
};

/// Relative width of the Threshold band, in units of gamma10.
inline constexpr double kThresholdTolerance = 1e-9;

RegimeClassification classify_regime(double gamma10, double gamma20, double control_rabi);

/// Pole structure of r(Dp) at resonant control (Dc = 0).
///
/// Poles solve 4(gamma10 - i D)(gamma20 - i D) + Omega_c^2 = 0. For distinct
/// poles r(D) = residues[0]/(D - poles[0]) + residues[1]/(D - poles[1]).
/// When the discriminant is exactly zero (double_pole) the layout is
/// r(D) = residues[0]/(D - p) + residues[1]/(D - p)^2 with p = poles[0] = poles[1].
struct PoleDecomposition {
  std::array<std::complex<double>, 2> poles{};
  std::array<std::complex<double>, 2> residues{};
  Regime regime = Regime::Eit;
  double threshold = 0.0;
  bool double_pole = false;

  std::array<std::complex<double>, 2> components(double probe_detuning) const;
  std::complex<double> evaluate(double probe_detuning) const;

  /// Separation of the pole real parts, sqrt(Omega_c^2 - (gamma10 - gamma20)^2)
  /// above threshold and 0 otherwise. Tends to Omega_c for strong drive.
  double splitting() const;
};

PoleDecomposition poles_and_decomposition(double gamma10, double gamma20,
                                          double control_rabi, double decay10);

}  // namespace saweit
