#include "saweit/idt.hpp"

#include <cmath>
#include <numbers>

#include "saweit/errors.hpp"

namespace saweit {

void IdtTransducer::validate() const {
  if (finger_pairs < 1) throw DomainError("IDT needs at least one finger pair");
  if (!(center_omega > 0.0)) throw DomainError("IDT center frequency must be positive");
  if (!(k2 > 0.0 && k2 < 1.0)) throw DomainError("K^2 must lie in (0, 1)");
  if (!(capacitance > 0.0)) throw DomainError("IDT capacitance must be positive");
  if (inductance && !(*inductance > 0.0)) throw DomainError("inductance must be positive");
}

double IdtTransducer::peak_conductance() const {
  validate();
  return k2 * finger_pairs * center_omega * capacitance;
}

double IdtTransducer::peak_decay() const {
  validate();
  return 0.5 * k2 * finger_pairs * center_omega;
}

double IdtTransducer::detuning_parameter(double omega) const {
  return finger_pairs * std::numbers::pi * (omega - center_omega) / center_omega;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double acoustic_conductance(const IdtTransducer& idt, double omega) {
  if (!(omega > 0.0)) throw DomainError("frequency must be positive");
  const double s = sinc(idt.detuning_parameter(omega));
  return idt.peak_conductance() * s * s;
}

double decay_from_conductance(double conductance, double capacitance) {
  if (!(capacitance > 0.0)) throw DomainError("capacitance must be positive");
  return conductance / (2.0 * capacitance);
}

double coupling_rate(const IdtTransducer& idt, double omega) {
  if (!(omega > 0.0)) throw DomainError("frequency must be positive");
  const double s = sinc(idt.detuning_parameter(omega));
  return idt.peak_decay() * s * s;
}

double idt_bandwidth(const IdtTransducer& idt) {
  idt.validate();
  return 0.9 * idt.center_omega / idt.finger_pairs;
}

}  // namespace saweit
