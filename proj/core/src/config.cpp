#include "saweit/config.hpp"

#include <cmath>
#include <fstream>

#include "saweit/errors.hpp"
#include "saweit/units.hpp"

namespace saweit {
namespace {

using nlohmann::json;

double number(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("field '") + key + "' must be finite");
  return x;
}

const json& section(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_object()) {
    throw ConfigError(std::string("missing section '") + key + "'");
  }
  return doc.at(key);
}

Grid grid(const json& doc, const char* key, double unit = 1.0) {
  const auto& g = section(doc, key);
  Grid out{number(g, "start") * unit, number(g, "stop") * unit, 0};
  const double count = number(g, "count");
  if (count < 1 || count != std::floor(count) || count > 1e7) {
    throw ConfigError(std::string("grid '") + key + "' needs a positive integer count");
  }
  out.count = static_cast<int>(count);
  if (out.count > 1 && out.start == out.stop) {
    throw ConfigError(std::string("grid '") + key + "' is not monotone");
  }
  return out;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::ControlSweep:
      return "control-sweep";
    case Scheme::PowerSweep:
      return "power-sweep";
    case Scheme::FluxSweep:
      return "flux-sweep";
    case Scheme::LinewidthPipeline:
      return "linewidth-pipeline";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (auto s : {Scheme::ControlSweep, Scheme::PowerSweep, Scheme::FluxSweep,
                 Scheme::LinewidthPipeline}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::vector<double> Grid::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] =
        count == 1 ? start : start + (stop - start) * k / static_cast<double>(count - 1);
  }
  return out;
}

json paper_profile() {
  // gamma10/2pi = 21 MHz and gamma20/2pi = 4.94 MHz are split into radiative
  // and pure-dephasing parts; Gamma21 is the sinc^2 estimate at 2.15 GHz.
  return {
      {"schema_version", kSchemaVersion},
      {"scheme", "control-sweep"},
      {"atom",
       {{"f10_hz", 2.2684e9},
        {"anharmonicity_hz", 118.4e6},
        {"decay10_hz", 20.1e6},
        {"decay21_hz", 0.545e6},
        {"dephasing1_hz", 10.95e6},
        {"dephasing2_hz", 4.6675e6}}},
      {"idt",
       {{"finger_pairs", 25}, {"f_idt_hz", 2.26e9}, {"k2", 7.11e-4}, {"capacitance_f", 1.502e-13}}},
      {"calibration", {{"threshold_power_dbm", -45.0}}},
      {"probe", {{"frequency_hz", 2.2684e9}, {"rabi_hz", 1e4}}},
      {"control_sweep",
       {{"power_dbm", {{"start", -70.0}, {"stop", -40.0}, {"count", 31}}},
        {"frequency_hz", {{"start", 2.10e9}, {"stop", 2.20e9}, {"count", 201}}}}},
      {"linewidth_pipeline",
       {{"power_dbm", {{"start", -60.0}, {"stop", -45.0}, {"count", 10}}},
        {"half_span_hz", 40e6},
        {"points", 200}}},
      {"flux_sweep",
       {{"probe_detuning_hz", {{"start", -60e6}, {"stop", 60e6}, {"count", 241}}},
        {"residual_detuning_hz", 4e6},
        {"omega_c_hz", {6e6, 16e6, 30e6}},
        {"crosstalk", {{"re", 0.03}, {"im", 0.04}}}}},
      {"noise", {{"sigma_rel", 0.0}, {"mode", "complex"}}},
      {"seed", 20190101},
      {"output", {{"path", "saweit_out.csv"}, {"format", "csv"}}},
  };
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (doc.value("schema_version", 0) != kSchemaVersion) {
    throw ConfigError("unsupported or missing schema_version");
  }
  ExperimentConfig cfg;
  cfg.source = doc;
  try {
    cfg.scheme = parse_scheme(doc.value("scheme", "control-sweep"));

    const auto& a = section(doc, "atom");
    cfg.atom = {hz_to_angular(number(a, "f10_hz")),     hz_to_angular(number(a, "anharmonicity_hz")),
                hz_to_angular(number(a, "decay10_hz")),  hz_to_angular(number(a, "decay21_hz")),
                hz_to_angular(number(a, "dephasing1_hz")), hz_to_angular(number(a, "dephasing2_hz"))};
    cfg.atom.validate();

    if (doc.contains("idt")) {
      const auto& d = section(doc, "idt");
      const double np = number(d, "finger_pairs");
      if (np != std::floor(np)) throw ConfigError("idt.finger_pairs must be an integer");
      cfg.idt = {static_cast<int>(np), hz_to_angular(number(d, "f_idt_hz")), number(d, "k2"),
                 number(d, "capacitance_f"), std::nullopt};
      cfg.idt.validate();
    }

    const auto& c = section(doc, "calibration");
    if (c.contains("k")) {
      cfg.calibration = {number(c, "k")};
      cfg.calibration.validate();
    } else if (c.contains("threshold_power_dbm")) {
      const double threshold = cfg.atom.gamma10() - cfg.atom.gamma20();
      cfg.calibration = PowerCalibration::from_anchor(threshold, number(c, "threshold_power_dbm"));
    } else {
      throw ConfigError("calibration needs 'k' or 'threshold_power_dbm'");
    }

    const auto& p = section(doc, "probe");
    cfg.probe_frequency = hz_to_angular(number(p, "frequency_hz"));
    cfg.probe_rabi = hz_to_angular(number(p, "rabi_hz"));
    if (!(cfg.probe_frequency > 0.0) || !(cfg.probe_rabi >= 0.0)) {
      throw ConfigError("probe frequency must be > 0 and Rabi >= 0");
    }

    if (doc.contains("control_sweep")) {
      const auto& s = section(doc, "control_sweep");
      cfg.control_sweep = {grid(s, "power_dbm"), grid(s, "frequency_hz", kTwoPi)};
      if (!(cfg.control_sweep.frequency.start > 0.0) || !(cfg.control_sweep.frequency.stop > 0.0)) {
        throw ConfigError("control frequencies must be positive");
      }
    }
    if (doc.contains("linewidth_pipeline")) {
      const auto& s = section(doc, "linewidth_pipeline");
      cfg.linewidth.power_dbm = grid(s, "power_dbm");
      cfg.linewidth.half_span = hz_to_angular(number(s, "half_span_hz"));
      const double pts = number(s, "points");
      if (!(cfg.linewidth.half_span > 0.0) || pts < 5 || pts != std::floor(pts)) {
        throw ConfigError("linewidth_pipeline needs half_span_hz > 0 and an integer points >= 5");
      }
      cfg.linewidth.points = static_cast<int>(pts);
    }
    if (doc.contains("flux_sweep")) {
      const auto& s = section(doc, "flux_sweep");
      cfg.flux.probe_detuning = grid(s, "probe_detuning_hz", kTwoPi);
      cfg.flux.residual_detuning = hz_to_angular(number(s, "residual_detuning_hz"));
      if (!s.contains("omega_c_hz") || !s.at("omega_c_hz").is_array() ||
          s.at("omega_c_hz").empty()) {
        throw ConfigError("flux_sweep.omega_c_hz must be a non-empty array");
      }
      for (const auto& v : s.at("omega_c_hz")) {
        if (!v.is_number() || !(v.get<double>() >= 0.0)) {
          throw ConfigError("flux_sweep.omega_c_hz entries must be >= 0");
        }
        cfg.flux.control_rabi.push_back(hz_to_angular(v.get<double>()));
      }
      if (s.contains("crosstalk")) {
        const auto& x = section(s, "crosstalk");
        cfg.flux.crosstalk = {number(x, "re"), number(x, "im")};
      }
    }

    if (doc.contains("noise")) {
      const auto& n = section(doc, "noise");
      cfg.sigma_rel = number(n, "sigma_rel");
      if (!(cfg.sigma_rel >= 0.0)) throw ConfigError("noise.sigma_rel must be >= 0");
      const auto mode = n.value("mode", "complex");
      if (mode == "complex") {
        cfg.noise_mode = NoiseMode::Complex;
      } else if (mode == "magnitude") {
        cfg.noise_mode = NoiseMode::Magnitude;
      } else {
        throw ConfigError("noise.mode must be 'complex' or 'magnitude'");
      }
    }

    if (doc.contains("seed")) {
      const auto& s = doc.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
        throw ConfigError("seed must be a non-negative integer");
      }
      cfg.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("output")) {
      const auto& o = section(doc, "output");
      cfg.output_path = o.value("path", "");
      cfg.output_format = parse_format(o.value("format", "csv"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  switch (cfg.scheme) {
    case Scheme::ControlSweep:
    case Scheme::PowerSweep:
      if (!doc.contains("control_sweep")) throw ConfigError("control_sweep section required");
      break;
    case Scheme::FluxSweep:
      if (!doc.contains("flux_sweep")) throw ConfigError("flux_sweep section required");
      break;
    case Scheme::LinewidthPipeline:
      if (!doc.contains("linewidth_pipeline")) {
        throw ConfigError("linewidth_pipeline section required");
      }
      break;
  }
  return cfg;
}

ExperimentConfig load_config(const std::optional<std::string>& path, bool use_profile,
                             const json& overrides) {
  json doc = use_profile ? paper_profile() : json::object();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot read config file " + *path);
    json file;
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    doc.merge_patch(file);
  }
  doc.merge_patch(overrides);
  return parse_config(doc);
}

}  // namespace saweit
