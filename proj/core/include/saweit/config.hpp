#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "saweit/atom.hpp"
#include "saweit/calibration.hpp"
#include "saweit/idt.hpp"
#include "saweit/noise.hpp"
#include "saweit/table_io.hpp"

namespace saweit {

enum class Scheme { ControlSweep, PowerSweep, FluxSweep, LinewidthPipeline };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

/// Evenly spaced axis, start and stop inclusive.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  std::vector<double> values() const;
};

struct ControlSweepSpec {
  Grid power_dbm;
  Grid frequency;  // control angular frequency, rad/s
};

struct LinewidthPipelineSpec {
  Grid power_dbm;
  double half_span = 0.0;  // rad/s either side of the dip
  int points = 0;
};

struct FluxSweepSpec {
  Grid probe_detuning;  // rad/s
  double residual_detuning = 0.0;
  std::vector<double> control_rabi;
  std::complex<double> crosstalk;
};

/// Parsed experiment description. Files carry Hz, dBm and SI units; every
/// field here is already in library units (rad/s). `source` keeps the merged
/// JSON document for provenance.
struct ExperimentConfig {
  Scheme scheme = Scheme::ControlSweep;
  ThreeLevelAtom atom;
  IdtTransducer idt;
  PowerCalibration calibration;
  double probe_frequency = 0.0;
  double probe_rabi = 0.0;
  ControlSweepSpec control_sweep;
  LinewidthPipelineSpec linewidth;
  FluxSweepSpec flux;
  double sigma_rel = 0.0;
  NoiseMode noise_mode = NoiseMode::Complex;
  std::uint64_t seed = 0;
  std::string output_path;
  Format output_format = Format::Csv;
  nlohmann::json source;

  double probe_detuning() const { return probe_frequency - atom.omega10; }
};

/// Device and sweep defaults of the reference device (`--profile paper`).
nlohmann::json paper_profile();

/// Relative complex noise for the linewidth pipeline that gives a
/// +-0.14 MHz standard error on gamma20.
inline constexpr double kPaperLinewidthNoise = 0.0088;

/// Throws ConfigError on schema or physical-invariant violations.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// paper_profile() (if requested) merge-patched with the file, then parsed.
ExperimentConfig load_config(const std::optional<std::string>& path, bool use_profile,
                             const nlohmann::json& overrides = nlohmann::json::object());

}  // namespace saweit
