#pragma once

namespace saweit {

/// Control-line calibration: Omega_c^2 = k * P_c with P_c in watts at the
/// room-temperature input. k absorbs line attenuation and gate coupling.
struct PowerCalibration {
  double k = 0.0;  // rad^2 s^-2 W^-1

  void validate() const;

  /// Calibration that puts the given Rabi rate at the given power.
  static PowerCalibration from_anchor(double control_rabi, double power_dbm);
};

double control_rabi_from_power(const PowerCalibration& calib, double power_dbm);

/// Inverse of control_rabi_from_power.
double power_for_control_rabi(const PowerCalibration& calib, double control_rabi);

}  // namespace saweit
