#include "saweit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saweit/errors.hpp"
#include "saweit/poles.hpp"
#include "saweit/scattering.hpp"
#include "saweit/units.hpp"

namespace saweit {

DataTable SweepTable::to_table() const {
  DataTable t;
  t.numeric_columns = axis_names;
  for (const char* c : {"re", "im", "abs", "phase"}) t.numeric_columns.emplace_back(c);
  const bool banded = std::any_of(records.begin(), records.end(),
                                  [](const SweepRecord& r) { return !r.band.empty(); });
  t.text_columns = {"regime"};
  if (banded) t.text_columns.emplace_back("band");
  for (const auto& r : records) {
    auto row = r.axes;
    row.insert(row.end(),
               {r.value.real(), r.value.imag(), std::abs(r.value), std::arg(r.value)});
    std::vector<std::string> labels{r.regime};
    if (banded) labels.push_back(r.band);
    t.add_row(std::move(row), std::move(labels));
  }
  return t;
}

SweepTable synthesize_noise(const SweepTable& table, double sigma_rel, std::uint64_t seed,
                            NoiseMode mode) {
  std::vector<std::complex<double>> values;
  values.reserve(table.records.size());
  for (const auto& r : table.records) values.push_back(r.value);
  const auto noisy = synthesize_noise(values, sigma_rel, seed, mode);
  SweepTable out = table;
  for (std::size_t k = 0; k < noisy.size(); ++k) out.records[k].value = noisy[k];
  return out;
}

std::string regime_band(double gamma10, double gamma20, double control_rabi) {
  const auto cls = classify_regime(gamma10, gamma20, control_rabi);
  if (cls.threshold > 0.0 &&
      std::abs(control_rabi - cls.threshold) <= kCrossoverBand * cls.threshold) {
    return "crossover";
  }
  return cls.regime == Regime::Eit ? "EIT" : "ATS";
}

ControlSweepResult run_control_sweep(const ExperimentConfig& cfg) {
  const auto rates = cfg.atom.rates();
  const double probe_detuning = cfg.probe_detuning();
  const auto powers = cfg.control_sweep.power_dbm.values();
  const auto freqs = cfg.scheme == Scheme::PowerSweep ? std::vector<double>{cfg.atom.omega21()}
                                                      : cfg.control_sweep.frequency.values();

  ControlSweepResult out;
  out.table.axis_names = {"power_dbm", "control_frequency_hz", "omega_c_hz"};
  out.table.records.reserve(powers.size() * freqs.size());
  for (double p : powers) {
    const double rabi = control_rabi_from_power(cfg.calibration, p);
    const std::string regime{to_string(classify_regime(rates.gamma10, rates.gamma20, rabi).regime)};
    for (double wc : freqs) {
      const double dc = wc - cfg.atom.omega21();
      out.table.records.push_back({{p, angular_to_hz(wc), angular_to_hz(rabi)},
                                   reflection(rates, probe_detuning, dc, rabi), regime, ""});
    }
  }
  out.table = synthesize_noise(out.table, cfg.sigma_rel, cfg.seed, cfg.noise_mode);
  const double threshold = std::max(rates.gamma10 - rates.gamma20, 0.0);
  out.threshold_power_dbm = power_for_control_rabi(cfg.calibration, threshold);
  return out;
}

LinewidthPipelineResult run_linewidth_pipeline(const ExperimentConfig& cfg) {
  const auto rates = cfg.atom.rates();
  const double probe_detuning = cfg.probe_detuning();
  const auto powers = cfg.linewidth.power_dbm.values();
  // Dip sits at Dc = -Dp.
  const double center = cfg.atom.omega21() - probe_detuning;
  const Grid freq_grid{center - cfg.linewidth.half_span, center + cfg.linewidth.half_span,
                       cfg.linewidth.points};
  const auto freqs = freq_grid.values();

  LinewidthPipelineResult out;
  std::vector<LinewidthPoint> points;
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    LinewidthRow row;
    row.power_dbm = powers[i];
    row.power_watts = dbm_to_watts(powers[i]);
    row.control_rabi_true = control_rabi_from_power(cfg.calibration, powers[i]);

    std::vector<std::complex<double>> r;
    r.reserve(freqs.size());
    for (double wc : freqs) {
      r.push_back(reflection(rates, probe_detuning, wc - cfg.atom.omega21(), row.control_rabi_true));
    }
    const auto noisy = synthesize_noise(r, cfg.sigma_rel, derive_seed(cfg.seed, i), cfg.noise_mode);
    std::vector<SweepSample> samples;
    samples.reserve(freqs.size());
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      samples.push_back({freqs[k], std::norm(noisy[k]), std::nullopt});
    }
    const auto dip = fit_dip_lorentzian(samples);
    if (dip.converged && !dip.degenerate) {
      row.linewidth = dip.value("hwhm");
      row.linewidth_sigma = dip.error("hwhm");
      row.status = "ok";
      points.push_back({row.power_watts, row.linewidth, row.linewidth_sigma});
      used.push_back(i);
    } else {
      row.status = "fit-failed";
    }
    out.rows.push_back(row);
  }

  // Noiseless dips give (numerically) zero errors: fall back to equal weights.
  const bool weighted = cfg.sigma_rel > 0.0 &&
                        std::all_of(points.begin(), points.end(),
                                    [](const LinewidthPoint& p) { return p.sigma > 0.0; });
  if (!weighted) {
    for (auto& p : points) p.sigma = 1.0;
  }
  out.line_fit = fit_linewidth_line(points, rates.gamma10);

  const auto rabi = rabi_per_point(out.line_fit, rates.gamma10, points);
  for (std::size_t j = 0; j < used.size(); ++j) {
    auto& row = out.rows[used[j]];
    row.control_rabi = rabi[j].control_rabi;
    row.control_rabi_sigma = weighted ? rabi[j].sigma : 0.0;
    if (rabi[j].one_sided) row.status = "one-sided";
  }
  out.threshold = std::max(rates.gamma10 - out.line_fit.value("gamma20"), 0.0);
  const double k = out.line_fit.value("k");
  out.threshold_power_dbm = k > 0.0 ? power_for_control_rabi(PowerCalibration{k}, out.threshold)
                                    : std::numeric_limits<double>::quiet_NaN();
  return out;
}

DataTable LinewidthPipelineResult::table() const {
  DataTable t;
  t.numeric_columns = {"power_dbm",  "power_w",          "gamma_eit_hz", "gamma_eit_err_hz",
                       "omega_c_hz", "omega_c_err_hz",   "omega_c_true_hz"};
  t.text_columns = {"status"};
  for (const auto& r : rows) {
    t.add_row({r.power_dbm, r.power_watts, angular_to_hz(r.linewidth),
               angular_to_hz(r.linewidth_sigma), angular_to_hz(r.control_rabi),
               angular_to_hz(r.control_rabi_sigma), angular_to_hz(r.control_rabi_true)},
              {r.status});
  }
  return t;
}

DataTable LinewidthPipelineResult::loglog_table() const {
  DataTable t;
  t.numeric_columns = {"log10_power_w", "log10_omega_c_hz", "log10_omega_c_lo_hz",
                       "log10_omega_c_hi_hz", "log10_fit_omega_c_hz"};
  t.text_columns = {"status"};
  const double k = line_fit.value("k");
  for (const auto& r : rows) {
    if (r.status == "fit-failed") continue;
    const double w = angular_to_hz(r.control_rabi);
    const double s = angular_to_hz(r.control_rabi_sigma);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto lg = [&](double v) { return v > 0.0 ? std::log10(v) : nan; };
    t.add_row({std::log10(r.power_watts), lg(w), lg(w - s), lg(w + s),
               lg(angular_to_hz(std::sqrt(std::max(k, 0.0) * r.power_watts)))},
              {r.status});
  }
  return t;
}

SweepTable run_flux_sweep(const ExperimentConfig& cfg) {
  const auto rates = cfg.atom.rates();
  const auto detunings = cfg.flux.probe_detuning.values();
  SweepTable out;
  out.axis_names = {"omega_c_hz", "probe_detuning_hz"};
  for (std::size_t i = 0; i < cfg.flux.control_rabi.size(); ++i) {
    const double rabi = cfg.flux.control_rabi[i];
    const std::string regime{to_string(classify_regime(rates.gamma10, rates.gamma20, rabi).regime)};
    const std::string band = regime_band(rates.gamma10, rates.gamma20, rabi);
    SweepTable curve;
    curve.axis_names = out.axis_names;
    for (double dp : detunings) {
      const auto t = transmission_flux_sweep(rates, dp, cfg.flux.residual_detuning, rabi) +
                     cfg.flux.crosstalk;
      curve.records.push_back({{angular_to_hz(rabi), angular_to_hz(dp)}, t, regime, band});
    }
    curve = synthesize_noise(curve, cfg.sigma_rel, derive_seed(cfg.seed, i), cfg.noise_mode);
    out.records.insert(out.records.end(), curve.records.begin(), curve.records.end());
  }
  return out;
}

std::vector<SweepSample> curve_samples(const SweepTable& flux, double control_rabi) {
  std::vector<SweepSample> out;
  const double target = angular_to_hz(control_rabi);
  for (const auto& r : flux.records) {
    if (r.axes.at(0) == target) out.push_back({hz_to_angular(r.axes.at(1)), r.value, std::nullopt});
  }
  return out;
}

}  // namespace saweit
