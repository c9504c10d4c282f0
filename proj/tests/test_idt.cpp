#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "saweit/errors.hpp"
#include "saweit/idt.hpp"
#include "saweit/units.hpp"

using namespace saweit;
using oracle::kMHz;

namespace {

IdtTransducer qubit_idt() {
  return {25, hz_to_angular(2.26e9), 7.11e-4, 1.502e-13, std::nullopt};
}

}  // namespace

TEST_CASE("sinc removable singularity") {
  CHECK(sinc(0.0) == 1.0);
  for (double x : {1e-12, -1e-9, 5e-5, 9.99e-5, 1.01e-4, 0.3}) {
    const double expected = std::sqrt(static_cast<double>(oracle::sinc_squared_series(x)));
    CHECK(sinc(x) == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("conductance") {
  const auto idt = qubit_idt();
  const double g0 = idt.peak_conductance();
  CHECK(acoustic_conductance(idt, idt.center_omega) == g0);
  const double first_null_hi = idt.center_omega * (1 + 1.0 / idt.finger_pairs);
  const double first_null_lo = idt.center_omega * (1 - 1.0 / idt.finger_pairs);
  CHECK(acoustic_conductance(idt, first_null_hi) / g0 < 1e-20);
  CHECK(acoustic_conductance(idt, first_null_lo) / g0 < 1e-20);
  const double ratio = acoustic_conductance(idt, hz_to_angular(2.15e9)) / g0;
  CHECK(ratio == doctest::Approx(static_cast<double>(oracle::sinc_squared_series(
                     25.0L * 3.14159265358979323846264338327950288L * (2.15L - 2.26L) / 2.26L)))
                     .epsilon(1e-12));
  CHECK(ratio == doctest::Approx(0.027132644698060147).epsilon(1e-12));
}

TEST_CASE("decay from conductance") {
  const auto idt = qubit_idt();
  CHECK(decay_from_conductance(0.0, idt.capacitance) == 0.0);
  CHECK(decay_from_conductance(idt.peak_conductance(), idt.capacitance) ==
        doctest::Approx(idt.k2 * idt.finger_pairs * idt.center_omega / 2).epsilon(1e-15));
  CHECK(decay_from_conductance(idt.peak_conductance(), idt.capacitance) / kMHz ==
        doctest::Approx(20.1).epsilon(1e-3));
  CHECK_THROWS_AS(decay_from_conductance(1.0, 0.0), DomainError);
}

TEST_CASE("coupling rate of the paper device") {
  const auto idt = qubit_idt();
  const double peak = coupling_rate(idt, idt.center_omega);
  CHECK(peak / kMHz == doctest::Approx(20.08575).epsilon(1e-12));
  const double upper = coupling_rate(idt, hz_to_angular(2.15e9));
  CHECK(upper / kMHz == doctest::Approx(0.5449795182440617).epsilon(1e-10));
  CHECK(peak / upper > 10.0);
  CHECK(peak / upper == doctest::Approx(36.86).epsilon(1e-3));
  // 2.15 GHz lies below the first lower null at 2.1696 GHz.
  const double null_lo = idt.center_omega * (1 - 1.0 / idt.finger_pairs);
  CHECK(angular_to_hz(null_lo) == doctest::Approx(2.1696e9).epsilon(1e-12));
  CHECK(hz_to_angular(2.15e9) < null_lo);
  CHECK(coupling_rate(idt, null_lo) / peak < 1e-20);
}

TEST_CASE("bandwidth") {
  auto idt = qubit_idt();
  CHECK(angular_to_hz(idt_bandwidth(idt)) == doctest::Approx(81.36e6).epsilon(1e-12));
  idt.finger_pairs = 50;
  CHECK(angular_to_hz(idt_bandwidth(idt)) == doctest::Approx(40.68e6).epsilon(1e-12));
  idt.finger_pairs = 150;
  CHECK(angular_to_hz(idt_bandwidth(idt)) == doctest::Approx(13.56e6).epsilon(1e-12));
}

TEST_CASE("properties") {
  const auto idt = qubit_idt();
  const double peak = idt.peak_decay();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> off(-0.5, 0.5);
  for (int k = 0; k < 5000; ++k) {
    const double x = off(rng) * idt.center_omega;
    const double up = coupling_rate(idt, idt.center_omega + x);
    const double down = coupling_rate(idt, idt.center_omega - x);
    REQUIRE(up == doctest::Approx(down).epsilon(1e-9));
    REQUIRE(up >= 0.0);
    REQUIRE(up < peak);
    const double omega = idt.center_omega + x;
    REQUIRE(decay_from_conductance(acoustic_conductance(idt, omega), idt.capacitance) ==
            doctest::Approx(coupling_rate(idt, omega)).epsilon(1e-12));
  }
  for (double eps : {1e-12, -1e-12}) {
    CHECK(coupling_rate(idt, idt.center_omega * (1 + eps)) == doctest::Approx(peak).epsilon(1e-15));
  }
}

TEST_CASE("invalid transducers") {
  auto idt = qubit_idt();
  idt.finger_pairs = 0;
  CHECK_THROWS_AS(idt_bandwidth(idt), DomainError);
  idt = qubit_idt();
  idt.k2 = 1.5;
  CHECK_THROWS_AS(coupling_rate(idt, idt.center_omega), DomainError);
  idt = qubit_idt();
  CHECK_THROWS_AS(coupling_rate(idt, -1.0), DomainError);
}
