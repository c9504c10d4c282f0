#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "saweit/config.hpp"
#include "saweit/estimation.hpp"
#include "saweit/experiments.hpp"
#include "saweit/lindblad.hpp"
#include "saweit/scattering.hpp"
#include "saweit/units.hpp"

namespace {

using namespace saweit;

const double kMHz = hz_to_angular(1e6);

void BM_Reflection(benchmark::State& state) {
  const LadderRates rates{20.1 * kMHz, 21.0 * kMHz, 4.94 * kMHz};
  double dp = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reflection(rates, dp, 0.0, 6.1 * kMHz));
    dp += 1e3;
  }
}
BENCHMARK(BM_Reflection);

void BM_SteadyState(benchmark::State& state) {
  const auto atom = parse_config(paper_profile()).atom;
  const auto l = build_liouvillian(LiouvillianSpec::from(atom, {0.01 * kMHz, 0.0, 6.1 * kMHz, 0.0}));
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(l));
}
BENCHMARK(BM_SteadyState);

void BM_DipFit(benchmark::State& state) {
  const LadderRates rates{20.1 * kMHz, 21.0 * kMHz, 4.94 * kMHz};
  std::vector<SweepSample> samples;
  const auto n = static_cast<int>(state.range(0));
  for (int k = 0; k < n; ++k) {
    const double dc = -40 * kMHz + 80 * kMHz * k / (n - 1);
    samples.push_back({dc, std::norm(reflection(rates, 0.0, dc, 6.1 * kMHz)), std::nullopt});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_dip_lorentzian(samples));
}
BENCHMARK(BM_DipFit)->Arg(50)->Arg(200)->Arg(1000);

void BM_ControlSweep(benchmark::State& state) {
  const auto cfg = parse_config(paper_profile());
  for (auto _ : state) benchmark::DoNotOptimize(run_control_sweep(cfg));
}
BENCHMARK(BM_ControlSweep)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
