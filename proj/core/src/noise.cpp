#include "saweit/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "saweit/errors.hpp"

namespace saweit {
namespace {

constexpr std::size_t kBlock = 256;

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<std::complex<double>> synthesize_noise(std::span<const std::complex<double>> values,
                                                   double sigma_rel, std::uint64_t seed,
                                                   NoiseMode mode) {
  if (!(sigma_rel >= 0.0)) throw DomainError("synthesize_noise: sigma_rel must be >= 0");
  std::vector<std::complex<double>> out(values.begin(), values.end());
  if (sigma_rel == 0.0 || out.empty()) return out;

  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  const double sigma = sigma_rel * peak;

  for (std::size_t start = 0; start < out.size(); start += kBlock) {
    auto engine = block_engine(seed, start / kBlock);
    std::normal_distribution<double> normal(0.0, sigma);
    const std::size_t stop = std::min(out.size(), start + kBlock);
    for (std::size_t k = start; k < stop; ++k) {
      if (mode == NoiseMode::Complex) {
        const double re = normal(engine);
        const double im = normal(engine);
        out[k] += std::complex<double>(re, im);
      } else {
        const double mag = std::abs(out[k]);
        const double noisy = mag + normal(engine);
        out[k] = mag > 0.0 ? out[k] * (noisy / mag) : std::complex<double>(noisy, 0.0);
      }
    }
  }
  return out;
}

}  // namespace saweit
