#include "saweit/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "saweit/errors.hpp"

namespace saweit {
namespace {

using cd = std::complex<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

FitResult make_result(std::vector<std::string> names, const VectorXd& estimates,
                      const MatrixXd& covariance) {
  FitResult out;
  out.names = std::move(names);
  out.estimates = estimates;
  out.covariance = covariance;
  out.standard_errors = covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  return out;
}

// Covariance of y = diag(scale) x.
MatrixXd rescale_covariance(const MatrixXd& cov, const VectorXd& scale) {
  return scale.asDiagonal() * cov * scale.asDiagonal();
}

double weight_of(const SweepSample& s) {
  if (s.sigma) {
    if (!(*s.sigma > 0.0)) throw DomainError("sample sigma must be positive");
    return 1.0 / *s.sigma;
  }
  return 1.0;
}

void require_finite(std::span<const SweepSample> samples) {
  for (const auto& s : samples) {
    if (!std::isfinite(s.x) || !std::isfinite(s.value.real()) || !std::isfinite(s.value.imag())) {
      throw DomainError("samples must be finite");
    }
  }
}

// Moving average over an odd window, used only for starting values.
std::vector<double> smooth(const std::vector<double>& y, std::size_t half) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(y.size() - 1, i + half);
    double acc = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) acc += y[k];
    out[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<std::size_t> order_by_x(std::span<const SweepSample> samples) {
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return samples[a].x < samples[b].x; });
  return idx;
}

double edge_mean(const std::vector<double>& y, double fraction) {
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * y.size()));
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += y[k] + y[y.size() - 1 - k];
  return acc / (2.0 * static_cast<double>(n));
}

}  // namespace

std::size_t FitResult::index(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DomainError("FitResult: no parameter named " + std::string(name));
  return static_cast<std::size_t>(it - names.begin());
}

double FitResult::value(std::string_view name) const {
  return estimates(static_cast<Eigen::Index>(index(name)));
}

double FitResult::error(std::string_view name) const {
  return standard_errors(static_cast<Eigen::Index>(index(name)));
}

// ---------------------------------------------------------------------------

FitResult fit_dip_lorentzian(std::span<const SweepSample> samples, const LmOptions& options) {
  if (samples.size() < 5) throw DomainError("fit_dip_lorentzian: need at least 5 samples");
  require_finite(samples);
  const auto order = order_by_x(samples);
  const std::size_t n = samples.size();

  std::vector<double> x(n), y(n), w(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = samples[order[k]].x;
    y[k] = samples[order[k]].value.real();
    w[k] = weight_of(samples[order[k]]);
  }
  const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  const double ymin = *ymin_it;
  const double ymax = *ymax_it;
  const double yscale = std::max(std::abs(ymin), std::abs(ymax));
  const std::vector<std::string> names{"center", "hwhm", "depth", "baseline"};

  if (x.back() == x.front()) throw DomainError("fit_dip_lorentzian: all abscissae equal");
  if (ymax - ymin <= 1e-12 * yscale) {
    // Flat data: the baseline is the only identified quantity.
    FitResult flat = make_result(names,
                                 (VectorXd(4) << std::numeric_limits<double>::quiet_NaN(),
                                  std::numeric_limits<double>::quiet_NaN(), 0.0, y.front())
                                     .finished(),
                                 MatrixXd::Zero(4, 4));
    flat.converged = true;
    flat.degenerate = true;
    return flat;
  }

  const double xc = 0.5 * (x.front() + x.back());
  const double xs = 0.5 * (x.back() - x.front());
  std::vector<double> u(n), v(n);
  for (std::size_t k = 0; k < n; ++k) {
    u[k] = (x[k] - xc) / xs;
    v[k] = y[k] / yscale;
  }

  // Starting values from the smoothed curve.
  const auto vs = smooth(v, n >= 50 ? 2 : 0);
  const double b0 = edge_mean(vs, 0.1);
  const auto kmin = static_cast<std::size_t>(std::min_element(vs.begin(), vs.end()) - vs.begin());
  const double d0 = std::max(b0 - vs[kmin], 1e-6);
  const double half = b0 - d0 / 2.0;
  std::size_t lo = kmin, hi = kmin;
  while (lo > 0 && vs[lo - 1] < half) --lo;
  while (hi + 1 < n && vs[hi + 1] < half) ++hi;
  const double spacing = 2.0 / static_cast<double>(n - 1);
  const double w0 = std::max(0.5 * (u[hi] - u[lo]), spacing);

  const auto residuals = [&](const VectorXd& p) {
    VectorXd r(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const double q = (u[k] - p(0)) * (u[k] - p(0));
      const double w2 = p(1) * p(1);
      r(static_cast<Eigen::Index>(k)) = w[k] * (p(3) - p(2) * w2 / (q + w2) - v[k]);
    }
    return r;
  };
  const auto jacobian = [&](const VectorXd& p) {
    MatrixXd j(static_cast<Eigen::Index>(n), 4);
    for (std::size_t k = 0; k < n; ++k) {
      const double du = u[k] - p(0);
      const double q = du * du;
      const double w2 = p(1) * p(1);
      const double den = q + w2;
      const auto row = static_cast<Eigen::Index>(k);
      j(row, 0) = w[k] * (-p(2) * 2.0 * w2 * du / (den * den));
      j(row, 1) = w[k] * (-p(2) * 2.0 * p(1) * q / (den * den));
      j(row, 2) = w[k] * (-w2 / den);
      j(row, 3) = w[k];
    }
    return j;
  };

  LmProblem problem{residuals, jacobian, {false, false, true, false}, {}};
  const auto s = levenberg_marquardt(problem, (VectorXd(4) << u[kmin], w0, d0, b0).finished(),
                                     options);
  VectorXd est = s.params;
  est(1) = std::abs(est(1));
  const VectorXd scale = (VectorXd(4) << xs, xs, yscale, yscale).finished();
  const VectorXd offset = (VectorXd(4) << xc, 0.0, 0.0, 0.0).finished();

  FitResult out = make_result(names, est.cwiseProduct(scale) + offset,
                              rescale_covariance(residual_scaled_covariance(s, {}), scale));
  out.residual_sum_squares = s.residuals.squaredNorm() * yscale * yscale;
  out.iterations = s.iterations;
  out.converged = s.converged;
  out.at_bound = std::any_of(s.at_bound.begin(), s.at_bound.end(), [](bool b) { return b; });
  out.degenerate = !(est(2) > 0.0);
  return out;
}

// ---------------------------------------------------------------------------

FitResult fit_linewidth_line(std::span<const LinewidthPoint> points, double gamma10) {
  if (!(gamma10 > 0.0)) throw DomainError("fit_linewidth_line: gamma10 must be positive");
  std::vector<double> powers;
  for (const auto& p : points) {
    if (!std::isfinite(p.power_watts) || !std::isfinite(p.linewidth)) {
      throw DomainError("fit_linewidth_line: non-finite point");
    }
    if (!(p.sigma > 0.0)) throw DomainError("fit_linewidth_line: sigma must be positive");
    powers.push_back(p.power_watts);
  }
  std::sort(powers.begin(), powers.end());
  const auto distinct = std::unique(powers.begin(), powers.end()) - powers.begin();
  if (distinct < 2) throw RankError("fit_linewidth_line: fewer than two distinct powers");
  if (points.size() < 3) throw DomainError("fit_linewidth_line: need at least 3 points");

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    const double w = 1.0 / (p.sigma * p.sigma);
    sw += w;
    sx += w * p.power_watts;
    sy += w * p.linewidth;
  }
  const double xbar = sx / sw;
  const double ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double w = 1.0 / (p.sigma * p.sigma);
    sxx += w * (p.power_watts - xbar) * (p.power_watts - xbar);
    sxy += w * (p.power_watts - xbar) * (p.linewidth - ybar);
  }
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  double chi2 = 0.0;
  for (const auto& p : points) {
    const double res = p.linewidth - intercept - slope * p.power_watts;
    chi2 += res * res / (p.sigma * p.sigma);
  }
  const double s2 = chi2 / static_cast<double>(points.size() - 2);

  // (gamma20, k) with k = 4 gamma10 slope.
  const double kfac = 4.0 * gamma10;
  MatrixXd cov(2, 2);
  cov(0, 0) = s2 * (1.0 / sw + xbar * xbar / sxx);
  cov(1, 1) = kfac * kfac * s2 / sxx;
  cov(0, 1) = cov(1, 0) = -kfac * s2 * xbar / sxx;

  FitResult out = make_result({"gamma20", "k"},
                              (VectorXd(2) << intercept, kfac * slope).finished(), cov);
  out.residual_sum_squares = chi2;
  out.iterations = 1;
  out.converged = true;
  return out;
}

std::vector<RabiEstimate> rabi_per_point(const FitResult& line_fit, double gamma10,
                                         std::span<const LinewidthPoint> points) {
  if (!(gamma10 > 0.0)) throw DomainError("rabi_per_point: gamma10 must be positive");
  const double gamma20 = line_fit.value("gamma20");
  std::vector<RabiEstimate> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    RabiEstimate e{.power_watts = p.power_watts};
    const double excess = p.linewidth - gamma20;
    if (excess > 0.0) {
      e.control_rabi = std::sqrt(4.0 * gamma10 * excess);
      e.sigma = 2.0 * gamma10 * p.sigma / e.control_rabi;
    } else {
      e.control_rabi = 0.0;
      e.sigma = std::sqrt(4.0 * gamma10 * p.sigma);
      e.one_sided = true;
    }
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

FitResult fit_two_level(std::span<const SweepSample> samples, double scale,
                        const LmOptions& options) {
  if (samples.size() < 5) throw DomainError("fit_two_level: need at least 5 samples");
  if (!(scale > 0.0)) throw DomainError("fit_two_level: scale must be positive");
  require_finite(samples);
  const auto order = order_by_x(samples);
  const std::size_t n = samples.size();

  std::vector<double> x(n), y(n), w(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = samples[order[k]].x;
    y[k] = std::abs(samples[order[k]].value);
    w[k] = weight_of(samples[order[k]]);
  }
  const double xs = std::max(std::abs(x.front()), std::abs(x.back()));
  const double ys = *std::max_element(y.begin(), y.end());
  if (!(xs > 0.0) || !(ys > 0.0)) throw DomainError("fit_two_level: degenerate samples");
  std::vector<double> u(n), v(n);
  for (std::size_t k = 0; k < n; ++k) {
    u[k] = x[k] / xs;
    v[k] = y[k] / ys;
  }

  // Half maximum of A / sqrt(g^2 + u^2) sits at |u| = sqrt(3) g.
  const auto vs = smooth(v, n >= 50 ? 2 : 0);
  const auto kmax = static_cast<std::size_t>(std::max_element(vs.begin(), vs.end()) - vs.begin());
  std::size_t lo = kmax, hi = kmax;
  while (lo > 0 && vs[lo - 1] > vs[kmax] / 2.0) --lo;
  while (hi + 1 < n && vs[hi + 1] > vs[kmax] / 2.0) ++hi;
  const double g0 = std::max(0.5 * (u[hi] - u[lo]) / std::sqrt(3.0), 1.0 / static_cast<double>(n));
  const double a0 = vs[kmax] * std::sqrt(g0 * g0 + u[kmax] * u[kmax]);

  const auto residuals = [&](const VectorXd& p) {
    VectorXd r(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      r(static_cast<Eigen::Index>(k)) = w[k] * (p(1) / std::hypot(p(0), u[k]) - v[k]);
    }
    return r;
  };
  const auto jacobian = [&](const VectorXd& p) {
    MatrixXd j(static_cast<Eigen::Index>(n), 2);
    for (std::size_t k = 0; k < n; ++k) {
      const double rho = std::hypot(p(0), u[k]);
      const auto row = static_cast<Eigen::Index>(k);
      j(row, 0) = -w[k] * p(1) * p(0) / (rho * rho * rho);
      j(row, 1) = w[k] / rho;
    }
    return j;
  };
  LmProblem problem{residuals, jacobian, {true, true}, {}};
  const auto s = levenberg_marquardt(problem, (VectorXd(2) << g0, a0).finished(), options);
  const MatrixXd cov_ga = residual_scaled_covariance(s, {});

  // gamma10 = g xs; Gamma10 = 2 A ys xs / scale.
  const double gamma10 = s.params(0) * xs;
  const double amp_factor = 2.0 * ys * xs / scale;
  MatrixXd cov = MatrixXd::Zero(3, 3);
  cov(0, 0) = cov_ga(0, 0) * xs * xs;
  cov(1, 1) = cov_ga(1, 1) * amp_factor * amp_factor;
  cov(0, 1) = cov(1, 0) = cov_ga(0, 1) * xs * amp_factor;

  FitResult out = make_result({"gamma10", "Gamma10", "scale"},
                              (VectorXd(3) << gamma10, s.params(1) * amp_factor, scale).finished(),
                              cov);
  out.residual_sum_squares = s.residuals.squaredNorm() * ys * ys;
  out.iterations = s.iterations;
  out.converged = s.converged;
  out.at_bound = std::any_of(s.at_bound.begin(), s.at_bound.end(), [](bool b) { return b; });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Transmission model in units of gamma10: parameters
// [g2, dl, W, s, c_re, c_im], detuning u = Dp / gamma10, G = Gamma10 / gamma10.
struct TransmissionModel {
  double decay_ratio;

  struct Eval {
    cd value;
    std::array<cd, 6> grad;
  };

  Eval operator()(const VectorXd& p, double u) const {
    const cd i{0.0, 1.0};
    const double w2 = p(2) * p(2);
    const cd upper = cd(p(0), -(2.0 * u + p(1)));
    const cd d = 2.0 * cd(1.0, -u) + w2 / (2.0 * upper);
    const cd t = 1.0 - decay_ratio / d;
    const cd c(p(4), p(5));
    const cd dt_dd = decay_ratio / (d * d);
    const cd u2 = upper * upper;
    Eval e;
    e.value = p(3) * (t + c);
    e.grad[0] = p(3) * dt_dd * (-w2 / (2.0 * u2));
    e.grad[1] = p(3) * dt_dd * (i * w2 / (2.0 * u2));
    e.grad[2] = p(3) * dt_dd * (p(2) / upper);
    e.grad[3] = t + c;
    e.grad[4] = p(3);
    e.grad[5] = i * p(3);
    return e;
  }
};

}  // namespace

FitResult fit_transmission(std::span<const SweepSample> samples, double gamma10, double decay10,
                           const TransmissionFitOptions& options) {
  if (samples.size() < 8) throw DomainError("fit_transmission: need at least 8 samples");
  if (!(gamma10 > 0.0) || !(decay10 >= 0.0)) {
    throw DomainError("fit_transmission: gamma10 must be positive and decay10 >= 0");
  }
  require_finite(samples);
  const auto order = order_by_x(samples);
  const std::size_t n = samples.size();
  std::vector<double> u(n), w(n);
  std::vector<cd> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    u[k] = samples[order[k]].x / gamma10;
    y[k] = samples[order[k]].value;
    w[k] = weight_of(samples[order[k]]);
  }
  const TransmissionModel model{decay10 / gamma10};
  const bool mag = options.magnitude_only;

  const auto rows = static_cast<Eigen::Index>(mag ? n : 2 * n);
  const auto residuals = [&](const VectorXd& p) {
    VectorXd r(rows);
    for (std::size_t k = 0; k < n; ++k) {
      const cd m = model(p, u[k]).value;
      const auto row = static_cast<Eigen::Index>(k);
      if (mag) {
        r(row) = w[k] * (std::abs(m) - std::abs(y[k]));
      } else {
        r(2 * row) = w[k] * (m.real() - y[k].real());
        r(2 * row + 1) = w[k] * (m.imag() - y[k].imag());
      }
    }
    return r;
  };
  const auto jacobian = [&](const VectorXd& p) {
    MatrixXd j(rows, 6);
    for (std::size_t k = 0; k < n; ++k) {
      const auto e = model(p, u[k]);
      const auto row = static_cast<Eigen::Index>(k);
      for (int c = 0; c < 6; ++c) {
        if (mag) {
          const double am = std::abs(e.value);
          j(row, c) = am > 0.0 ? w[k] * std::real(std::conj(e.value) * e.grad[c]) / am : 0.0;
        } else {
          j(2 * row, c) = w[k] * e.grad[c].real();
          j(2 * row + 1, c) = w[k] * e.grad[c].imag();
        }
      }
    }
    return j;
  };

  // Background level s (1 + c) from the wings.
  std::vector<double> re(n), im(n), ab(n);
  for (std::size_t k = 0; k < n; ++k) {
    re[k] = y[k].real();
    im[k] = y[k].imag();
    ab[k] = std::abs(y[k]);
  }
  const cd wing(edge_mean(re, 0.1), edge_mean(im, 0.1));
  double s0 = mag ? edge_mean(ab, 0.1) : std::abs(wing);
  if (!(s0 > 0.0)) s0 = 1.0;
  cd c0 = options.float_crosstalk && !mag ? wing / s0 - 1.0 : cd{};

  // The transparency feature sits at Dp = -delta/2; take the most prominent
  // local maximum of |t| inside the two-level dip as its location.
  double dl0 = 0.0;
  {
    const auto sm = smooth(ab, n >= 60 ? 2 : 0);
    double best = -1.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (std::abs(u[k]) > 1.5 || !(sm[k] >= sm[k - 1] && sm[k] >= sm[k + 1])) continue;
      std::size_t a = k, b = k;
      while (a > 0 && sm[a - 1] <= sm[a]) --a;
      while (b + 1 < n && sm[b + 1] <= sm[b]) ++b;
      const double prominence = sm[k] - std::max(sm[a], sm[b]);
      if (prominence > best) {
        best = prominence;
        dl0 = -2.0 * u[k];
      }
    }
  }
  if (options.delta) dl0 = *options.delta / gamma10;

  std::vector<double> g2_starts{0.1, 0.3};
  std::vector<double> w_starts{0.15, 0.4, 0.8, 1.4, 2.2};
  if (options.gamma20) g2_starts = {*options.gamma20 / gamma10};
  if (options.control_rabi) w_starts = {*options.control_rabi / gamma10};

  std::vector<bool> fixed(6, false);
  if (!options.float_crosstalk) fixed[4] = fixed[5] = true;
  const LmProblem problem{residuals, jacobian, {true, false, true, true, false, false}, fixed};

  std::optional<LmSummary> best;
  for (double g2 : g2_starts) {
    for (double w0 : w_starts) {
      VectorXd p0(6);
      p0 << g2, dl0, w0, s0, c0.real(), c0.imag();
      auto s = levenberg_marquardt(problem, p0, options.lm);
      const bool better = !best || (s.converged && !best->converged) ||
                          (s.converged == best->converged && s.cost < best->cost);
      if (better) best = std::move(s);
    }
  }

  const LmSummary& s = *best;
  const VectorXd scale = (VectorXd(6) << gamma10, gamma10, gamma10, 1.0, 1.0, 1.0).finished();
  FitResult out = make_result({"gamma20", "delta", "Omega_c", "scale", "crosstalk_re", "crosstalk_im"},
                              s.params.cwiseProduct(scale),
                              rescale_covariance(residual_scaled_covariance(s, fixed), scale));
  out.residual_sum_squares = s.residuals.squaredNorm();
  out.iterations = s.iterations;
  out.converged = s.converged;
  out.at_bound = std::any_of(s.at_bound.begin(), s.at_bound.end(), [](bool b) { return b; });
  return out;
}

}  // namespace saweit
