#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace saweit {

enum class NoiseMode {
  Complex,    // independent Gaussian on each quadrature
  Magnitude,  // Gaussian on |value|, phase kept
};

/// Adds noise with standard deviation sigma_rel * max|value| (per quadrature
/// in Complex mode). Values are split into fixed blocks, each with its own
/// engine seeded from (seed, block index), so the output depends only on the
/// seed and position and blocks can be generated in any order.
std::vector<std::complex<double>> synthesize_noise(std::span<const std::complex<double>> values,
                                                   double sigma_rel, std::uint64_t seed,
                                                   NoiseMode mode = NoiseMode::Complex);

/// Child seed for an independent stream (e.g. one per dataset).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace saweit
