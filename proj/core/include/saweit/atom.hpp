#pragma once

namespace saweit {

struct CoherenceRates {
  double gamma10 = 0.0;
  double gamma20 = 0.0;
  double gamma21 = 0.0;
};

/// Off-diagonal decay rates of the ladder from radiative decay and pure
/// dephasing, for jump operators sqrt(decay10)|0><1|, sqrt(decay21)|1><2|,
/// sqrt(2 dephasing_i)|i><i|. Throws DomainError on negative input.
CoherenceRates coherence_rates(double decay10, double decay21, double dephasing1,
                               double dephasing2);

/// The three numbers the weak-probe response depends on.
struct LadderRates {
  double decay10 = 0.0;  // Gamma_10, emission into the acoustic line
  double gamma10 = 0.0;
  double gamma20 = 0.0;
};

/// Transmon ladder |0> -> |1> -> |2>. All quantities in rad/s.
struct ThreeLevelAtom {
  double omega10 = 0.0;
  double anharmonicity = 0.0;  // omega10 - omega21
  double decay10 = 0.0;
  double decay21 = 0.0;
  double dephasing1 = 0.0;
  double dephasing2 = 0.0;

  double omega21() const { return omega10 - anharmonicity; }
  CoherenceRates coherence() const;
  double gamma10() const { return coherence().gamma10; }
  double gamma20() const { return coherence().gamma20; }
  double gamma21() const { return coherence().gamma21; }
  LadderRates rates() const;

  void validate() const;

  /// Backs out the dephasing rates from measured coherence rates. Throws
  /// DomainError if gamma10 < decay10/2 or gamma20 < decay21/2.
  static ThreeLevelAtom from_coherence(double omega10, double anharmonicity,
                                       double decay10, double gamma10,
                                       double gamma20, double decay21 = 0.0);
};

struct DriveCondition {
  double probe_rabi = 0.0;
  double probe_detuning = 0.0;    // omega_p - omega10
  double control_rabi = 0.0;
  double control_detuning = 0.0;  // omega_c - omega21

  void validate() const;
};

}  // namespace saweit
