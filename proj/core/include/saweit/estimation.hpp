#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "saweit/levenberg_marquardt.hpp"

namespace saweit {

/// Outcome of a least-squares fit. Standard errors come from the curvature of
/// the normal equations at the optimum scaled by the residual variance, so
/// they are meaningful only when the model describes the data.
struct FitResult {
  std::vector<std::string> names;
  Eigen::VectorXd estimates;
  Eigen::VectorXd standard_errors;
  Eigen::MatrixXd covariance;
  double residual_sum_squares = 0.0;
  int iterations = 0;
  bool converged = false;
  bool at_bound = false;    // a non-negativity clamp was active at the end
  bool degenerate = false;  // some parameter is not identified by the data

  double value(std::string_view name) const;
  double error(std::string_view name) const;
  std::size_t index(std::string_view name) const;
};

/// One measured point: abscissa in library units (rad/s, or W for powers),
/// value real or complex, optional known noise sigma.
struct SweepSample {
  double x = 0.0;
  std::complex<double> value;
  std::optional<double> sigma;
};

/// baseline - depth * hwhm^2 / ((x - center)^2 + hwhm^2), fitted to the real
/// part of the samples (|r|^2 in the control-frequency sweep, where this form
/// is exact). Parameters: center, hwhm, depth, baseline.
FitResult fit_dip_lorentzian(std::span<const SweepSample> samples, const LmOptions& options = {});

struct LinewidthPoint {
  double power_watts = 0.0;
  double linewidth = 0.0;  // gamma_EIT, rad/s
  double sigma = 0.0;      // standard error of linewidth
};

/// Weighted straight line gamma_EIT = gamma20 + (k / (4 gamma10)) P.
/// Parameters: gamma20, k. Throws RankError with fewer than two distinct
/// powers, DomainError with fewer than three points.
FitResult fit_linewidth_line(std::span<const LinewidthPoint> points, double gamma10);

struct RabiEstimate {
  double power_watts = 0.0;
  double control_rabi = 0.0;
  double sigma = 0.0;
  // gamma_EIT <= gamma20: Rabi reported as 0 and sigma is an upper bound
  // sqrt(4 gamma10 sigma_gamma).
  bool one_sided = false;
};

/// Inverts the linewidth law point by point with first-order error bars.
std::vector<RabiEstimate> rabi_per_point(const FitResult& line_fit, double gamma10,
                                         std::span<const LinewidthPoint> points);

/// Control-off reflection magnitude |r| = scale * (Gamma10/2) / sqrt(gamma10^2 + Dp^2).
/// Only scale * Gamma10 is identified, so scale is a known normalization.
/// Parameters: gamma10, Gamma10, scale (held).
FitResult fit_two_level(std::span<const SweepSample> samples, double scale = 1.0,
                        const LmOptions& options = {});

struct TransmissionFitOptions {
  std::optional<double> gamma20;
  std::optional<double> delta;
  std::optional<double> control_rabi;  // e.g. from a power calibration
  bool float_crosstalk = true;
  bool magnitude_only = false;
  LmOptions lm;
};

/// Flux-sweep transmission with a constant crosstalk background,
/// t_meas = scale * (t(Dp; gamma20, delta, Omega_c) + c), gamma10 and Gamma10
/// known. Parameters: gamma20, delta, Omega_c, scale, crosstalk_re, crosstalk_im.
/// Without explicit starting values it runs a small multi-start over Omega_c
/// and gamma20 and keeps the lowest cost.
FitResult fit_transmission(std::span<const SweepSample> samples, double gamma10,
                           double decay10, const TransmissionFitOptions& options = {});

}  // namespace saweit
