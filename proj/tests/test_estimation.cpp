#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "saweit/errors.hpp"
#include "saweit/estimation.hpp"
#include "saweit/scattering.hpp"
#include "saweit/units.hpp"

using namespace saweit;
using oracle::kDecay10;
using oracle::kGamma10;
using oracle::kGamma20;
using oracle::kMHz;
using oracle::kRabi;
using cd = std::complex<double>;

namespace {

const LadderRates kPaper{kDecay10, kGamma10, kGamma20};
const double kOmega21 = 2150.0 * kMHz;

// Additive Gaussian noise at noise * max|y|, the measurement model of the
// synthetic-data generator.
std::vector<SweepSample> with_noise(std::vector<SweepSample> v, double noise, std::mt19937_64& rng) {
  if (noise == 0.0) return v;
  double peak = 0.0;
  for (const auto& s : v) peak = std::max(peak, std::abs(s.value));
  std::normal_distribution<double> normal(0.0, noise * peak);
  for (auto& s : v) s.value += normal(rng);
  return v;
}

// |r|^2 versus control angular frequency at Dp = 0.
std::vector<SweepSample> dip_samples(double rabi, int n, double half_span, double noise = 0.0,
                                     std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::vector<SweepSample> out;
  for (int k = 0; k < n; ++k) {
    const double wc = kOmega21 - half_span + 2.0 * half_span * k / (n - 1);
    out.push_back({wc, std::norm(reflection(kPaper, 0.0, wc - kOmega21, rabi)), std::nullopt});
  }
  return with_noise(std::move(out), noise, rng);
}

std::vector<SweepSample> two_level_samples(double gamma10, double decay10, double scale, int n,
                                           double noise = 0.0, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::vector<SweepSample> out;
  for (int k = 0; k < n; ++k) {
    const double dp = -100 * kMHz + 200 * kMHz * k / (n - 1);
    out.push_back({dp, scale * std::abs(reflection(LadderRates{decay10, gamma10, 0.0}, dp, 0.0, 0.0)),
                   std::nullopt});
  }
  return with_noise(std::move(out), noise, rng);
}

std::vector<SweepSample> flux_samples(double gamma20, double delta, double rabi, cd crosstalk,
                                      double noise, std::uint64_t seed, int n = 241) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, noise);
  const LadderRates rates{kDecay10, kGamma10, gamma20};
  std::vector<SweepSample> out;
  for (int k = 0; k < n; ++k) {
    const double dp = -60 * kMHz + 120 * kMHz * k / (n - 1);
    const cd t = transmission_flux_sweep(rates, dp, delta, rabi) + crosstalk;
    out.push_back({dp, t + cd(normal(rng), normal(rng)), std::nullopt});
  }
  return out;
}

}  // namespace

TEST_SUITE("fit_dip_lorentzian") {
  TEST_CASE("noiseless dip at the operating point") {
    const auto fit = fit_dip_lorentzian(dip_samples(kRabi, 200, 40 * kMHz));
    REQUIRE(fit.converged);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.value("hwhm") / kMHz == doctest::Approx(5.382976190476191).epsilon(1e-8));
    CHECK(fit.value("center") == doctest::Approx(kOmega21).epsilon(1e-12));
    const double a = kDecay10 / (2 * kGamma10);
    CHECK(fit.value("baseline") == doctest::Approx(a * a).epsilon(1e-8));
    const double geit = eit_linewidth(kGamma10, kGamma20, kRabi);
    CHECK(fit.value("depth") ==
          doctest::Approx(a * a * (1 - kGamma20 * kGamma20 / (geit * geit))).epsilon(1e-8));
  }

  TEST_CASE("flat data: baseline only") {
    const auto fit = fit_dip_lorentzian(dip_samples(0.0, 50, 40 * kMHz));
    CHECK(fit.degenerate);
    const double a = kDecay10 / (2 * kGamma10);
    CHECK(fit.value("baseline") == a * a);
    CHECK(std::isnan(fit.value("hwhm")));
  }

  TEST_CASE("too few samples") {
    CHECK_THROWS_AS(fit_dip_lorentzian(dip_samples(kRabi, 4, 40 * kMHz)), DomainError);
  }

  TEST_CASE("Monte Carlo: 2% noise, 200 points") {
    const double truth = eit_linewidth(kGamma10, kGamma20, kRabi);
    int within3 = 0, within1 = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto fit = fit_dip_lorentzian(dip_samples(kRabi, 200, 40 * kMHz, 0.02, seed));
      REQUIRE(fit.converged);
      const double z = std::abs(fit.value("hwhm") - truth) / fit.error("hwhm");
      within3 += z <= 3.0;
      within1 += z <= 1.0;
    }
    CHECK(within3 >= 95);
    MESSAGE("hwhm within 1 sigma in " << within1 << "/100 seeds");
  }
}

TEST_SUITE("fit_linewidth_line") {
  std::vector<LinewidthPoint> line_points(double gamma20, double k, double sigma, double noise,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, noise);
    std::vector<LinewidthPoint> pts;
    for (int i = 0; i < 10; ++i) {
      const double p = dbm_to_watts(-60.0 + 15.0 * i / 9.0);
      pts.push_back({p, gamma20 + k * p / (4 * kGamma10) + normal(rng), sigma});
    }
    return pts;
  }

  const double kK = 3.2199625349397895e23;

  TEST_CASE("noiseless line is recovered exactly") {
    const auto fit = fit_linewidth_line(line_points(kGamma20, kK, 1.0, 0.0, 0), kGamma10);
    CHECK(fit.value("gamma20") / kMHz == doctest::Approx(4.94).epsilon(1e-12));
    CHECK(fit.value("k") == doctest::Approx(kK).epsilon(1e-12));
  }

  TEST_CASE("rank and size errors") {
    std::vector<LinewidthPoint> same(5, {1e-8, 3e7, 1e5});
    CHECK_THROWS_AS(fit_linewidth_line(same, kGamma10), RankError);
    std::vector<LinewidthPoint> two{{1e-8, 3e7, 1e5}, {2e-8, 3.1e7, 1e5}};
    CHECK_THROWS_AS(fit_linewidth_line(two, kGamma10), DomainError);
    CHECK_THROWS_AS(fit_linewidth_line(line_points(kGamma20, kK, 1.0, 0, 0), 0.0), DomainError);
  }

  TEST_CASE("invariant under rescaling the power axis") {
    const auto pts = line_points(kGamma20, kK, 0.2 * kMHz, 0.2 * kMHz, 9);
    auto scaled = pts;
    const double a = 1e3;
    for (auto& p : scaled) p.power_watts *= a;
    const auto f1 = fit_linewidth_line(pts, kGamma10);
    const auto f2 = fit_linewidth_line(scaled, kGamma10);
    CHECK(f2.value("gamma20") == doctest::Approx(f1.value("gamma20")).epsilon(1e-12));
    CHECK(f2.value("k") == doctest::Approx(f1.value("k") / a).epsilon(1e-12));
    CHECK(f2.error("gamma20") == doctest::Approx(f1.error("gamma20")).epsilon(1e-10));
  }

  TEST_CASE("synthetic power sweep with 0.14 MHz intercept error") {
    // Per-point sigma chosen so the intercept's standard error is 0.14 MHz.
    const auto probe = line_points(kGamma20, kK, 1.0, 0.0, 0);
    double sw = 0, sx = 0, sxx = 0;
    for (const auto& p : probe) {
      sw += 1;
      sx += p.power_watts;
    }
    for (const auto& p : probe) sxx += (p.power_watts - sx / sw) * (p.power_watts - sx / sw);
    const double sigma = 0.14 * kMHz / std::sqrt(1 / sw + (sx / sw) * (sx / sw) / sxx);

    int within = 0;
    double mean_se = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto fit = fit_linewidth_line(line_points(kGamma20, kK, sigma, sigma, seed), kGamma10);
      within += std::abs(fit.value("gamma20") - kGamma20) <= 3 * fit.error("gamma20");
      mean_se += fit.error("gamma20") / kMHz / 100;
    }
    CHECK(within >= 95);
    CHECK(mean_se == doctest::Approx(0.14).epsilon(0.15));
  }

  TEST_CASE("standard-error coverage") {
    int within1 = 0;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
      const auto fit =
          fit_linewidth_line(line_points(kGamma20, kK, 0.3 * kMHz, 0.3 * kMHz, 1000 + seed), kGamma10);
      within1 += std::abs(fit.value("gamma20") - kGamma20) <= fit.error("gamma20");
    }
    // Residual-scaled errors with 8 degrees of freedom: roughly 65% coverage.
    CHECK(within1 >= 240);
    CHECK(within1 <= 300);
  }
}

TEST_SUITE("rabi_per_point") {
  FitResult line_with_gamma20(double gamma20) {
    FitResult f;
    f.names = {"gamma20", "k"};
    f.estimates = Eigen::Vector2d(gamma20, 1.0);
    return f;
  }

  TEST_CASE("inversion of the linewidth law") {
    const auto fit = line_with_gamma20(kGamma20);
    const std::vector<LinewidthPoint> pts{{1e-9, 5.382976190476191 * kMHz, 0.1 * kMHz},
                                          {1e-9, kGamma20, 0.1 * kMHz}};
    const auto est = rabi_per_point(fit, kGamma10, pts);
    CHECK(est[0].control_rabi / kMHz == doctest::Approx(6.1).epsilon(1e-12));
    CHECK_FALSE(est[0].one_sided);
    CHECK(est[0].sigma == doctest::Approx(2 * kGamma10 * 0.1 * kMHz / est[0].control_rabi));
    CHECK(est[1].control_rabi == 0.0);
    CHECK(est[1].one_sided);
    CHECK(est[1].sigma > 0.0);
  }

  TEST_CASE("error bars shrink with drive strength at fixed linewidth error") {
    const auto fit = line_with_gamma20(kGamma20);
    std::vector<LinewidthPoint> pts;
    for (double w : {2.0, 4.0, 8.0, 16.0}) {
      pts.push_back({1e-9, eit_linewidth(kGamma10, kGamma20, w * kMHz), 0.1 * kMHz});
    }
    const auto est = rabi_per_point(fit, kGamma10, pts);
    for (std::size_t k = 1; k < est.size(); ++k) {
      CHECK(est[k].sigma < est[k - 1].sigma);
      CHECK(est[k].sigma * est[k].control_rabi ==
            doctest::Approx(est[0].sigma * est[0].control_rabi).epsilon(1e-12));
    }
  }
}

TEST_SUITE("fit_two_level") {
  TEST_CASE("noiseless recovery") {
    const auto fit = fit_two_level(two_level_samples(kGamma10, kDecay10, 1.0, 200));
    REQUIRE(fit.converged);
    CHECK(fit.value("gamma10") / kMHz == doctest::Approx(21.0).epsilon(1e-8));
    CHECK(fit.value("Gamma10") / kMHz == doctest::Approx(20.1).epsilon(1e-8));
  }

  TEST_CASE("radiatively limited data peaks at one") {
    const auto fit = fit_two_level(two_level_samples(kGamma10, 2 * kGamma10, 1.0, 101));
    CHECK(fit.value("scale") * fit.value("Gamma10") / (2 * fit.value("gamma10")) ==
          doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("known normalization divides out") {
    const auto fit = fit_two_level(two_level_samples(kGamma10, kDecay10, 0.8, 200), 0.8);
    CHECK(fit.value("Gamma10") / kMHz == doctest::Approx(20.1).epsilon(1e-8));
  }

  TEST_CASE("Monte Carlo: 2% noise, 200 points") {
    int within3 = 0, within1 = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto fit = fit_two_level(two_level_samples(kGamma10, kDecay10, 1.0, 200, 0.02, seed));
      REQUIRE(fit.converged);
      const double z = std::abs(fit.value("gamma10") - kGamma10) / fit.error("gamma10");
      within3 += z <= 3.0;
      within1 += z <= 1.0;
    }
    CHECK(within3 >= 95);
    CHECK(within1 >= 60);
    CHECK(within1 <= 75);
  }
}

TEST_SUITE("fit_transmission") {
  const double kG20 = 4.5 * kMHz;
  const double kDelta = 4.0 * kMHz;

  TEST_CASE("noiseless recovery without crosstalk") {
    const auto fit = fit_transmission(flux_samples(kG20, kDelta, kRabi, {}, 0.0, 0), kGamma10, kDecay10);
    REQUIRE(fit.converged);
    CHECK(fit.value("gamma20") / kMHz == doctest::Approx(4.5).epsilon(1e-8));
    CHECK(fit.value("delta") / kMHz == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(fit.value("Omega_c") / kMHz == doctest::Approx(6.1).epsilon(1e-8));
    CHECK(fit.value("scale") == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(fit.value("crosstalk_re")) < 1e-10);
  }

  TEST_CASE("crosstalk: floated recovers it, pinned biases gamma20") {
    const cd c = std::polar(0.05, 0.9);
    const auto samples = flux_samples(kG20, kDelta, kRabi, c, 0.005, 77);
    const auto floated = fit_transmission(samples, kGamma10, kDecay10);
    REQUIRE(floated.converged);
    CHECK(std::abs(floated.value("crosstalk_re") - c.real()) <= 3 * floated.error("crosstalk_re"));
    CHECK(std::abs(floated.value("crosstalk_im") - c.imag()) <= 3 * floated.error("crosstalk_im"));
    CHECK(std::abs(floated.value("gamma20") - kG20) <= 3 * floated.error("gamma20"));

    TransmissionFitOptions pinned;
    pinned.float_crosstalk = false;
    const auto biased = fit_transmission(samples, kGamma10, kDecay10, pinned);
    CHECK(biased.value("crosstalk_re") == 0.0);
    CHECK(biased.error("crosstalk_re") == 0.0);
    const double bias = std::abs(biased.value("gamma20") - kG20);
    MESSAGE("pinned-crosstalk gamma20 bias " << bias / kMHz << " MHz, floated sigma "
                                             << floated.error("gamma20") / kMHz << " MHz");
    CHECK(bias > 3 * floated.error("gamma20"));
    CHECK(biased.residual_sum_squares > floated.residual_sum_squares);
  }

  TEST_CASE("magnitude-only data") {
    TransmissionFitOptions opts;
    opts.magnitude_only = true;
    opts.float_crosstalk = false;
    const auto fit = fit_transmission(flux_samples(kG20, kDelta, kRabi, {}, 0.0, 0), kGamma10,
                                      kDecay10, opts);
    CHECK(fit.value("gamma20") / kMHz == doctest::Approx(4.5).epsilon(1e-6));
    CHECK(std::abs(fit.value("delta")) / kMHz == doctest::Approx(4.0).epsilon(1e-6));
  }

  TEST_CASE("too few samples") {
    CHECK_THROWS_AS(fit_transmission(flux_samples(kG20, kDelta, kRabi, {}, 0.0, 0, 7), kGamma10, kDecay10),
                    DomainError);
  }
}

TEST_CASE("noiseless round trip across drive strengths") {
  for (double w : {3.0, 10.0, 16.0, 25.0, 40.0}) {
    const double rabi = w * kMHz;
    const auto dip = fit_dip_lorentzian(dip_samples(rabi, 150, 60 * kMHz));
    CHECK(dip.value("hwhm") == doctest::Approx(eit_linewidth(kGamma10, kGamma20, rabi)).epsilon(1e-6));
    const auto tr = fit_transmission(flux_samples(4.5 * kMHz, -3.0 * kMHz, rabi, cd(0.02, -0.01), 0.0, 0),
                                     kGamma10, kDecay10);
    CHECK(tr.value("gamma20") / kMHz == doctest::Approx(4.5).epsilon(1e-6));
    CHECK(tr.value("delta") / kMHz == doctest::Approx(-3.0).epsilon(1e-6));
    CHECK(tr.value("Omega_c") / kMHz == doctest::Approx(w).epsilon(1e-6));
  }
}

TEST_CASE("levenberg_marquardt with finite-difference Jacobian") {
  // y = a exp(-b x)
  const double a = 2.5, b = 0.7;
  std::vector<double> xs, ys;
  for (int k = 0; k < 30; ++k) {
    xs.push_back(0.2 * k);
    ys.push_back(a * std::exp(-b * 0.2 * k));
  }
  LmProblem problem;
  problem.residuals = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) r(static_cast<Eigen::Index>(k)) = p(0) * std::exp(-p(1) * xs[k]) - ys[k];
    return r;
  };
  const auto s = levenberg_marquardt(problem, Eigen::Vector2d(1.0, 0.1));
  CHECK(s.converged);
  CHECK(s.params(0) == doctest::Approx(a).epsilon(1e-8));
  CHECK(s.params(1) == doctest::Approx(b).epsilon(1e-8));

  problem.fixed = {true, false};
  const auto held = levenberg_marquardt(problem, Eigen::Vector2d(2.0, 0.1));
  CHECK(held.params(0) == 2.0);
  const auto cov = residual_scaled_covariance(held, problem.fixed);
  CHECK(cov(0, 0) == 0.0);
  CHECK(cov(1, 1) > 0.0);
}

TEST_CASE("non-negativity clamp is flagged") {
  // Best unconstrained fit of y = p x to y = -x would be p = -1.
  LmProblem problem;
  problem.residuals = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(3);
    for (int k = 0; k < 3; ++k) r(k) = p(0) * (k + 1) + (k + 1);
    return r;
  };
  problem.nonnegative = {true};
  const auto s = levenberg_marquardt(problem, Eigen::VectorXd::Constant(1, 1.0));
  CHECK(s.params(0) == 0.0);
  CHECK(s.at_bound[0]);
}
