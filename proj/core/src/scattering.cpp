#include "saweit/scattering.hpp"

#include <cmath>
#include <numbers>

#include "saweit/errors.hpp"

namespace saweit {
namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

void check_rates(const LadderRates& rates) {
  if (!(rates.decay10 >= 0.0) || !(rates.gamma10 >= 0.0) || !(rates.gamma20 >= 0.0)) {
    throw DomainError("rates must be non-negative");
  }
}

struct Denominator {
  cd value;
  bool transparent = false;  // control term diverged
};

// 2(gamma10 - i Dp) + Omega^2 / (2 * upper), upper = gamma20 - i * upper_detuning
Denominator response_denominator(const LadderRates& rates, double probe_detuning,
                                 double upper_detuning, double control_rabi) {
  check_rates(rates);
  if (!(control_rabi >= 0.0)) throw DomainError("control Rabi amplitude must be >= 0");
  const cd lower = 2.0 * cd(rates.gamma10, -probe_detuning);
  if (control_rabi == 0.0) {
    if (lower == 0.0) throw SingularModelError("reflection: zero rates and zero detuning");
    return {lower};
  }
  const cd upper(rates.gamma20, -upper_detuning);
  if (upper == 0.0) return {cd{}, true};
  const cd d = lower + control_rabi * control_rabi / (2.0 * upper);
  if (d == 0.0) throw SingularModelError("reflection: vanishing denominator");
  return {d};
}

cd reflection_from_denominator(const LadderRates& rates, const Denominator& d) {
  if (d.transparent) return cd{};
  return -rates.decay10 / d.value;
}

}  // namespace

cd reflection(const LadderRates& rates, double probe_detuning, double control_detuning,
              double control_rabi) {
  const auto d = response_denominator(rates, probe_detuning,
                                      probe_detuning + control_detuning, control_rabi);
  return reflection_from_denominator(rates, d);
}

cd reflection(const ThreeLevelAtom& atom, const DriveCondition& drive) {
  drive.validate();
  return reflection(atom.rates(), drive.probe_detuning, drive.control_detuning,
                    drive.control_rabi);
}

cd transmission(const LadderRates& rates, double probe_detuning, double control_detuning,
                double control_rabi) {
  return 1.0 + reflection(rates, probe_detuning, control_detuning, control_rabi);
}

cd transmission(const ThreeLevelAtom& atom, const DriveCondition& drive) {
  return 1.0 + reflection(atom, drive);
}

cd transmission_flux_sweep(const LadderRates& rates, double probe_detuning,
                           double residual_detuning, double control_rabi) {
  // gamma20 - 2i Dp - i delta
  const auto d = response_denominator(rates, probe_detuning,
                                      2.0 * probe_detuning + residual_detuning, control_rabi);
  return 1.0 + reflection_from_denominator(rates, d);
}

cd transmission_flux_sweep(const ThreeLevelAtom& atom, double probe_detuning,
                           double residual_detuning, double control_rabi) {
  return transmission_flux_sweep(atom.rates(), probe_detuning, residual_detuning,
                                 control_rabi);
}

double eit_linewidth(double gamma10, double gamma20, double control_rabi) {
  if (!(gamma10 > 0.0)) throw DomainError("eit_linewidth: gamma10 must be positive");
  if (!(gamma20 >= 0.0)) throw DomainError("eit_linewidth: gamma20 must be >= 0");
  return gamma20 + control_rabi * control_rabi / (4.0 * gamma10);
}

double group_delay(const ThreeLevelAtom& atom, const DriveCondition& drive) {
  drive.validate();
  const auto rates = atom.rates();
  const double dp = drive.probe_detuning;
  const double om2 = drive.control_rabi * drive.control_rabi;
  const cd t = transmission(rates, dp, drive.control_detuning, drive.control_rabi);
  if (std::abs(t) <= 1e-14) throw UndefinedPhaseError("group_delay: transmission vanishes");

  // r = -Gamma/D  =>  dr/dDp = Gamma D'/D^2
  cd d = 2.0 * cd(rates.gamma10, -dp);
  cd d_prime = -2.0 * I;
  if (om2 > 0.0) {
    const cd upper(rates.gamma20, -(dp + drive.control_detuning));
    d += om2 / (2.0 * upper);
    d_prime += I * om2 / (2.0 * upper * upper);
  }
  const cd r_prime = rates.decay10 * d_prime / (d * d);
  return std::imag(r_prime / t);
}

double group_delay_finite_difference(const ThreeLevelAtom& atom, const DriveCondition& drive,
                                     double step) {
  if (!(step > 0.0)) throw DomainError("group_delay: step must be positive");
  drive.validate();
  const auto rates = atom.rates();
  const auto at = [&](double dp) {
    return transmission(rates, dp, drive.control_detuning, drive.control_rabi);
  };
  if (std::abs(at(drive.probe_detuning)) <= 1e-14) {
    throw UndefinedPhaseError("group_delay: transmission vanishes");
  }
  const cd plus = at(drive.probe_detuning + step);
  const cd minus = at(drive.probe_detuning - step);
  // Phase difference taken directly, which unwraps across the branch cut.
  const double dphi = std::arg(plus / minus);
  return dphi / (2.0 * step);
}

}  // namespace saweit
