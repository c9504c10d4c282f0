#pragma once

#include <complex>
#include <string>
#include <vector>

#include "saweit/config.hpp"
#include "saweit/estimation.hpp"
#include "saweit/table_io.hpp"

namespace saweit {

struct SweepRecord {
  std::vector<double> axes;
  std::complex<double> value;
  std::string regime;
  std::string band;  // EIT / crossover / ATS, flux sweep only
};

struct SweepTable {
  std::vector<std::string> axis_names;
  std::vector<SweepRecord> records;

  /// Columns: axes..., re, im, abs, phase | regime[, band].
  DataTable to_table() const;
};

SweepTable synthesize_noise(const SweepTable& table, double sigma_rel, std::uint64_t seed,
                            NoiseMode mode = NoiseMode::Complex);

/// Curve label for flux sweeps: crossover within 10% of the EIT/ATS threshold.
inline constexpr double kCrossoverBand = 0.1;
std::string regime_band(double gamma10, double gamma20, double control_rabi);

struct ControlSweepResult {
  SweepTable table;  // axes: power_dbm, control_frequency_hz, omega_c_hz
  double threshold_power_dbm = 0.0;
};

/// Reflection over (control power, control frequency). PowerSweep restricts
/// the frequency axis to the upper-transition resonance.
ControlSweepResult run_control_sweep(const ExperimentConfig& cfg);

struct LinewidthRow {
  double power_dbm = 0.0;
  double power_watts = 0.0;
  double linewidth = 0.0;  // fitted HWHM, rad/s
  double linewidth_sigma = 0.0;
  double control_rabi = 0.0;
  double control_rabi_sigma = 0.0;
  double control_rabi_true = 0.0;
  std::string status;  // ok / one-sided / fit-failed
};

struct LinewidthPipelineResult {
  std::vector<LinewidthRow> rows;
  FitResult line_fit;   // gamma20 (rad/s), k
  double threshold = 0.0;  // gamma10 - fitted gamma20
  double threshold_power_dbm = 0.0;

  DataTable table() const;
  DataTable loglog_table() const;
};

/// Simulate a dip per control power, fit each, fit the linewidth line and
/// invert it per point. Throws RankError / DomainError from the line fit.
LinewidthPipelineResult run_linewidth_pipeline(const ExperimentConfig& cfg);

/// Transmission vs probe detuning, one curve per control Rabi rate, with the
/// configured crosstalk background. Axes: omega_c_hz, probe_detuning_hz.
SweepTable run_flux_sweep(const ExperimentConfig& cfg);

/// Samples of one flux-sweep curve in library units, ready for fit_transmission.
std::vector<SweepSample> curve_samples(const SweepTable& flux, double control_rabi);

}  // namespace saweit
