#pragma once

#include <optional>

namespace saweit {

/// Interdigitated transducer forming the atom's acoustic port.
struct IdtTransducer {
  int finger_pairs = 1;
  double center_omega = 0.0;  // rad/s
  double k2 = 0.0;            // electromechanical coupling coefficient
  double capacitance = 0.0;   // F, total qubit capacitance
  std::optional<double> inductance;  // H, unused by the final decay-rate form

  void validate() const;

  double peak_conductance() const;  // K^2 Np omega_IDT C_t
  double peak_decay() const;        // 0.5 K^2 Np omega_IDT
  double detuning_parameter(double omega) const;  // Np pi (omega - omega_IDT)/omega_IDT
};

/// sin(x)/x with the removable singularity handled by a Taylor branch.
double sinc(double x);

double acoustic_conductance(const IdtTransducer& idt, double omega);
double decay_from_conductance(double conductance, double capacitance);
double coupling_rate(const IdtTransducer& idt, double omega);

/// Approximate coupling bandwidth, 2 pi * 0.9 f_IDT / Np, in rad/s.
double idt_bandwidth(const IdtTransducer& idt);

}  // namespace saweit
