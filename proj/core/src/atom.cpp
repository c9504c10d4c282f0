#include "saweit/atom.hpp"

#include <cmath>

#include "saweit/errors.hpp"

namespace saweit {
namespace {

void require_rate(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be a finite non-negative rate");
  }
}

}  // namespace

CoherenceRates coherence_rates(double decay10, double decay21, double dephasing1,
                               double dephasing2) {
  require_rate(decay10, "decay10");
  require_rate(decay21, "decay21");
  require_rate(dephasing1, "dephasing1");
  require_rate(dephasing2, "dephasing2");
  return {
      .gamma10 = decay10 / 2.0 + dephasing1,
      .gamma20 = decay21 / 2.0 + dephasing2,
      .gamma21 = (decay10 + decay21) / 2.0 + dephasing1 + dephasing2,
  };
}

CoherenceRates ThreeLevelAtom::coherence() const {
  return coherence_rates(decay10, decay21, dephasing1, dephasing2);
}

LadderRates ThreeLevelAtom::rates() const {
  const auto c = coherence();
  return {.decay10 = decay10, .gamma10 = c.gamma10, .gamma20 = c.gamma20};
}

void ThreeLevelAtom::validate() const {
  if (!(omega10 > 0.0)) throw DomainError("omega10 must be positive");
  if (!(anharmonicity > 0.0)) throw DomainError("anharmonicity must be positive");
  coherence();
}

ThreeLevelAtom ThreeLevelAtom::from_coherence(double omega10, double anharmonicity,
                                              double decay10, double gamma10,
                                              double gamma20, double decay21) {
  require_rate(decay10, "decay10");
  require_rate(decay21, "decay21");
  const double dephasing1 = gamma10 - decay10 / 2.0;
  const double dephasing2 = gamma20 - decay21 / 2.0;
  // Allow the last bit of rounding so radiatively limited input round-trips.
  const double tol1 = 1e-12 * std::max(gamma10, decay10);
  const double tol2 = 1e-12 * std::max(gamma20, decay21);
  if (dephasing1 < -tol1) throw DomainError("gamma10 below the radiative limit decay10/2");
  if (dephasing2 < -tol2) throw DomainError("gamma20 below the radiative limit decay21/2");
  ThreeLevelAtom atom{omega10,
                      anharmonicity,
                      decay10,
                      decay21,
                      std::max(dephasing1, 0.0),
                      std::max(dephasing2, 0.0)};
  atom.validate();
  return atom;
}

void DriveCondition::validate() const {
  if (!(probe_rabi >= 0.0)) throw DomainError("probe Rabi amplitude must be >= 0");
  if (!(control_rabi >= 0.0)) throw DomainError("control Rabi amplitude must be >= 0");
  if (!std::isfinite(probe_detuning) || !std::isfinite(control_detuning)) {
    throw DomainError("detunings must be finite");
  }
}

}  // namespace saweit
