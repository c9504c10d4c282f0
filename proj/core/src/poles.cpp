#include "saweit/poles.hpp"

#include <cmath>

#include "saweit/errors.hpp"

namespace saweit {

using cd = std::complex<double>;

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Eit:
      return "EIT";
    case Regime::Threshold:
      return "Threshold";
    case Regime::AutlerTownes:
      return "ATS";
  }
  return "unknown";
}

RegimeClassification classify_regime(double gamma10, double gamma20, double control_rabi) {
  if (!(gamma10 >= 0.0) || !(gamma20 >= 0.0) || !(control_rabi >= 0.0)) {
    throw DomainError("classify_regime: arguments must be non-negative");
  }
  const double threshold = std::max(gamma10 - gamma20, 0.0);
  if (control_rabi == 0.0) return {Regime::Eit, threshold};
  if (threshold == 0.0) return {Regime::AutlerTownes, threshold};
  if (std::abs(control_rabi - threshold) <= kThresholdTolerance * gamma10) {
    return {Regime::Threshold, threshold};
  }
  return {control_rabi < threshold ? Regime::Eit : Regime::AutlerTownes, threshold};
}

std::array<cd, 2> PoleDecomposition::components(double probe_detuning) const {
  const cd x = cd(probe_detuning) - poles[0];
  if (double_pole) return {residues[0] / x, residues[1] / (x * x)};
  return {residues[0] / x, residues[1] / (cd(probe_detuning) - poles[1])};
}

cd PoleDecomposition::evaluate(double probe_detuning) const {
  const auto c = components(probe_detuning);
  return c[0] + c[1];
}

double PoleDecomposition::splitting() const {
  return std::abs(poles[0].real() - poles[1].real());
}

PoleDecomposition poles_and_decomposition(double gamma10, double gamma20, double control_rabi,
                                          double decay10) {
  if (!(gamma10 >= 0.0) || !(gamma20 >= 0.0) || !(control_rabi >= 0.0) || !(decay10 >= 0.0)) {
    throw DomainError("poles_and_decomposition: arguments must be non-negative");
  }
  if (gamma10 == 0.0 && gamma20 == 0.0 && control_rabi == 0.0) {
    throw SingularModelError("poles_and_decomposition: all rates and drive are zero");
  }

  PoleDecomposition out;
  const auto cls = classify_regime(gamma10, gamma20, control_rabi);
  out.regime = cls.regime;
  out.threshold = cls.threshold;

  // With u = -i D the pole condition is u^2 + (g1 + g2) u + g1 g2 + W^2/4 = 0,
  // whose discriminant (g1 - g2)^2 - W^2 is real. Keep the two branches apart
  // so below-threshold poles have an exactly zero real part.
  const double sum = gamma10 + gamma20;
  const double diff = gamma10 - gamma20;
  const double disc = diff * diff - control_rabi * control_rabi;
  if (disc > 0.0) {
    const double root = std::sqrt(disc);
    out.poles = {cd(0.0, -(sum - root) / 2.0), cd(0.0, -(sum + root) / 2.0)};
  } else if (disc < 0.0) {
    const double root = std::sqrt(-disc);
    out.poles = {cd(root / 2.0, -sum / 2.0), cd(-root / 2.0, -sum / 2.0)};
  } else {
    out.poles = {cd(0.0, -sum / 2.0), cd(0.0, -sum / 2.0)};
    out.double_pole = true;
  }

  // r(D) = Gamma (gamma20 - i D) / (2 (D - p0)(D - p1))
  const cd i{0.0, 1.0};
  if (out.double_pole) {
    const cd p = out.poles[0];
    out.residues = {-i * decay10 / 2.0, decay10 * (gamma20 - i * p) / 2.0};
  } else {
    const cd p0 = out.poles[0];
    const cd p1 = out.poles[1];
    out.residues = {decay10 * (gamma20 - i * p0) / (2.0 * (p0 - p1)),
                    decay10 * (gamma20 - i * p1) / (2.0 * (p1 - p0))};
  }
  return out;
}

}  // namespace saweit
