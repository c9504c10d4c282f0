// saweit: command-line front end for the simulation, fitting and export
// pipelines.
//
// Exit status: 0 success, 1 runtime failure, 2 invalid configuration or
// arguments, 3 a fit did not converge.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "saweit/config.hpp"
#include "saweit/errors.hpp"
#include "saweit/experiments.hpp"
#include "saweit/idt.hpp"
#include "saweit/lindblad.hpp"
#include "saweit/poles.hpp"
#include "saweit/table_io.hpp"
#include "saweit/units.hpp"

namespace {

using namespace saweit;
using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFit = 3;

struct Globals {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> profile;
};

ExperimentConfig resolve(const Globals& g, std::optional<std::string_view> scheme,
                         bool profile_fallback = false) {
  if (g.profile && *g.profile != "paper") throw ConfigError("unknown profile '" + *g.profile + "'");
  const bool use_profile = g.profile.has_value() || (profile_fallback && !g.config);
  if (!use_profile && !g.config) {
    throw ConfigError("no configuration: pass --config <path> or --profile paper");
  }
  json overrides = json::object();
  if (scheme) overrides["scheme"] = *scheme;
  if (g.seed) overrides["seed"] = *g.seed;
  if (g.out) overrides["output"]["path"] = *g.out;
  if (g.format) overrides["output"]["format"] = *g.format;
  return load_config(g.config, use_profile, overrides);
}

std::filesystem::path output_path(const ExperimentConfig& cfg) {
  if (cfg.output_path.empty()) throw ConfigError("no output path: set output.path or pass --out");
  return cfg.output_path;
}

// foo.csv -> foo_<suffix>.csv
std::filesystem::path sibling(const std::filesystem::path& p, const std::string& suffix) {
  auto q = p;
  q.replace_filename(p.stem().string() + "_" + suffix + p.extension().string());
  return q;
}

int simulate(const Globals& g, const std::string& scheme) {
  const auto cfg = resolve(g, scheme);
  const auto path = output_path(cfg);
  if (cfg.scheme == Scheme::FluxSweep) {
    const auto table = run_flux_sweep(cfg);
    export_table(table.to_table(), cfg.output_format, path, cfg.source);
    std::cout << "flux sweep: " << table.records.size() << " rows -> " << path.string() << "\n";
  } else {
    const auto res = run_control_sweep(cfg);
    export_table(res.table.to_table(), cfg.output_format, path, cfg.source);
    std::cout << to_string(cfg.scheme) << ": " << res.table.records.size() << " rows -> "
              << path.string() << "\nthreshold power " << res.threshold_power_dbm << " dBm\n";
  }
  return 0;
}

int pipeline(const Globals& g) {
  const auto cfg = resolve(g, "linewidth-pipeline");
  const auto path = output_path(cfg);
  LinewidthPipelineResult res;
  try {
    res = run_linewidth_pipeline(cfg);
  } catch (const DomainError& e) {
    // Too few usable dips left for the line fit.
    throw FitError(e.what());
  }
  export_table(res.table(), cfg.output_format, path, cfg.source);
  export_table(res.loglog_table(), cfg.output_format, sibling(path, "loglog"), cfg.source);

  const auto& f = res.line_fit;
  std::cout.precision(6);
  std::cout << "gamma20/2pi = " << angular_to_hz(f.value("gamma20")) / 1e6 << " +- "
            << angular_to_hz(f.error("gamma20")) / 1e6 << " MHz\n"
            << "k = " << f.value("k") << " +- " << f.error("k") << " rad^2 s^-2 W^-1\n"
            << "threshold/2pi = " << angular_to_hz(res.threshold) / 1e6 << " MHz at "
            << res.threshold_power_dbm << " dBm\n";
  int failed = 0;
  for (const auto& row : res.rows) {
    if (row.status == "fit-failed") {
      std::cerr << "dip fit failed at " << row.power_dbm << " dBm\n";
      ++failed;
    }
  }
  return failed > 0 ? kExitFit : 0;
}

int classify(double gamma10_hz, double gamma20_hz, double omega_c_hz) {
  const double g10 = hz_to_angular(gamma10_hz);
  const double g20 = hz_to_angular(gamma20_hz);
  const double w = hz_to_angular(omega_c_hz);
  const auto cls = classify_regime(g10, g20, w);
  std::cout << "regime " << to_string(cls.regime) << "\n"
            << "threshold_hz " << angular_to_hz(cls.threshold) << "\n";
  // Residues need Gamma10; the pole positions do not depend on it.
  const auto d = poles_and_decomposition(g10, g20, w, g10);
  for (const auto& p : d.poles) {
    std::cout << "pole_hz " << angular_to_hz(p.real()) << " " << angular_to_hz(p.imag()) << "\n";
  }
  std::cout << "splitting_hz " << angular_to_hz(d.splitting()) << "\n";
  return 0;
}

int idt_response(const Globals& g, int np, double f_idt, double k2, double capacitance,
                 int points) {
  const IdtTransducer idt{np, hz_to_angular(f_idt), k2, capacitance, std::nullopt};
  try {
    idt.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (points < 2) throw ConfigError("--points must be at least 2");
  const double bw = idt_bandwidth(idt);
  DataTable t;
  t.numeric_columns = {"frequency_hz", "x", "sinc2", "conductance_s", "gamma_a_hz"};
  const Grid grid{idt.center_omega - 2.0 * bw, idt.center_omega + 2.0 * bw, points};
  for (double w : grid.values()) {
    const double x = idt.detuning_parameter(w);
    t.add_row({angular_to_hz(w), x, sinc(x) * sinc(x), acoustic_conductance(idt, w),
               angular_to_hz(coupling_rate(idt, w))});
  }
  std::cerr << "bandwidth_hz " << angular_to_hz(bw) << "\n"
            << "peak_gamma_a_hz " << angular_to_hz(idt.peak_decay()) << "\n";
  if (g.out) {
    const Format fmt = parse_format(g.format.value_or("csv"));
    const json echo = {{"finger_pairs", np}, {"f_idt_hz", f_idt}, {"k2", k2},
                       {"capacitance_f", capacitance}};
    export_table(t, fmt, *g.out, echo);
  } else {
    std::cout << to_csv(t);
  }
  return 0;
}

int oracle_check(const Globals& g) {
  const auto cfg = resolve(g, std::nullopt, true);
  std::vector<OracleGridPoint> grid;
  for (double rabi_mhz : {0.0, 6.1, 30.0}) {
    for (int a = 0; a < 21; ++a) {
      for (int b = 0; b < 21; ++b) {
        grid.push_back({hz_to_angular(-50e6 + 5e6 * a), hz_to_angular(-50e6 + 5e6 * b),
                        hz_to_angular(rabi_mhz * 1e6)});
      }
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  const double dev = weak_probe_deviation(cfg.atom, grid, hz_to_angular(1e4));
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  std::cout << "grid points " << grid.size() << "\n"
            << "max relative deviation " << dev << "\n"
            << "elapsed_s " << dt.count() << "\n";
  return dev <= 1e-3 ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EIT and Autler-Townes simulation and fitting for a SAW-coupled transmon"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON experiment configuration");
  app.add_option("--seed", g.seed, "RNG seed (overrides the config)");
  app.add_option("--out", g.out, "Output file (overrides the config)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--profile", g.profile, "Built-in device profile")->check(CLI::IsMember({"paper"}));

  std::string scheme;
  auto* sim = app.add_subcommand("simulate", "Forward-simulate a sweep and export it");
  sim->add_option("scheme", scheme, "control-sweep | power-sweep | flux-sweep")
      ->required()
      ->check(CLI::IsMember({"control-sweep", "power-sweep", "flux-sweep"}));

  std::string which;
  auto* pipe = app.add_subcommand("pipeline", "Simulate, fit and export an estimation pipeline");
  pipe->add_option("name", which, "linewidth")->required()->check(CLI::IsMember({"linewidth"}));

  double gamma10 = 0, gamma20 = 0, omega_c = 0;
  auto* cls = app.add_subcommand("classify", "EIT / Threshold / ATS regime of a drive");
  cls->add_option("--gamma10", gamma10, "gamma10/2pi [Hz]")->required();
  cls->add_option("--gamma20", gamma20, "gamma20/2pi [Hz]")->required();
  cls->add_option("--omega-c", omega_c, "Omega_c/2pi [Hz]")->required();

  int np = 0, points = 401;
  double f_idt = 0, k2 = 0, capacitance = 1.502e-13;
  auto* idt = app.add_subcommand("idt", "Interdigital transducer response");
  auto* resp = idt->add_subcommand("response", "Conductance and coupling rate versus frequency");
  idt->require_subcommand(1);
  resp->add_option("--np", np, "Finger pairs")->required();
  resp->add_option("--f-idt", f_idt, "Centre frequency [Hz]")->required();
  resp->add_option("--k2", k2, "Electromechanical coupling K^2")->required();
  resp->add_option("--capacitance", capacitance, "Total qubit capacitance [F]");
  resp->add_option("--points", points, "Frequency points over +-2 bandwidths");

  auto* orc = app.add_subcommand("oracle", "Cross-check against the master-equation oracle");
  auto* chk = orc->add_subcommand("check", "Weak-probe formula vs Lindblad steady state");
  orc->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) return simulate(g, scheme);
    if (*pipe) return pipeline(g);
    if (*cls) return classify(gamma10, gamma20, omega_c);
    if (*resp) return idt_response(g, np, f_idt, k2, capacitance, points);
    if (*chk) return oracle_check(g);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RankError& e) {
    std::cerr << "fit failed: " << e.what() << "\n";
    return kExitFit;
  } catch (const FitError& e) {
    std::cerr << "fit failed: " << e.what() << "\n";
    return kExitFit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
