#include "saweit/units.hpp"

#include <cmath>
#include <limits>

#include "saweit/calibration.hpp"
#include "saweit/errors.hpp"

namespace saweit {

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) throw DomainError("watts_to_dbm: power must be positive");
  return 10.0 * std::log10(watts / 1e-3);
}

void PowerCalibration::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DomainError("PowerCalibration: k must be positive and finite");
  }
}

PowerCalibration PowerCalibration::from_anchor(double control_rabi, double power_dbm) {
  if (!(control_rabi > 0.0)) throw DomainError("calibration anchor needs a positive Rabi rate");
  PowerCalibration calib{control_rabi * control_rabi / dbm_to_watts(power_dbm)};
  calib.validate();
  return calib;
}

double control_rabi_from_power(const PowerCalibration& calib, double power_dbm) {
  calib.validate();
  if (!std::isfinite(power_dbm)) throw DomainError("control power must be finite");
  return std::sqrt(calib.k * dbm_to_watts(power_dbm));
}

double power_for_control_rabi(const PowerCalibration& calib, double control_rabi) {
  calib.validate();
  if (!(control_rabi > 0.0)) return -std::numeric_limits<double>::infinity();
  return watts_to_dbm(control_rabi * control_rabi / calib.k);
}

}  // namespace saweit
