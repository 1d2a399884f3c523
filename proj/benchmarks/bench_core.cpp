#include <numbers>

#include <benchmark/benchmark.h>

#include "revsphere/curvature.hpp"
#include "revsphere/geodesics.hpp"
#include "revsphere/halfperiod.hpp"

using namespace revsphere;

namespace {

constexpr double kPi = std::numbers::pi;

void BM_HalfPeriod(benchmark::State& state) {
  const MetricProfile p = make_theorem_a(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(half_period(p, 0.5 * p.a()).phi);
}
BENCHMARK(BM_HalfPeriod)->Arg(4)->Arg(8)->Arg(16);

void BM_HalfPeriodDirect(benchmark::State& state) {
  const MetricProfile p = make_theorem_a(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(half_period_direct(p, 0.5 * p.a()).phi);
}
BENCHMARK(BM_HalfPeriodDirect)->Arg(4)->Arg(8)->Arg(16);

void BM_MonotonicityReport(benchmark::State& state) {
  const MetricProfile p = make_lambda_profile(4.0);
  for (auto _ : state) benchmark::DoNotOptimize(monotonicity_report(p, 50).strictly_decreasing);
}
BENCHMARK(BM_MonotonicityReport)->Unit(benchmark::kMillisecond);

void BM_CountExtrema(benchmark::State& state) {
  const MetricProfile p = make_theorem_a(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_extrema(p, Interval(0.0, kPi / 2), 4000).count);
}
BENCHMARK(BM_CountExtrema)->Arg(4)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Geodesic(benchmark::State& state) {
  const MetricProfile p = state.range(0) ? make_theorem_a(8) : make_lambda_profile(4.0);
  for (auto _ : state) {
    const Geodesic g(p, make_point(kPi / 3, 0.0), 0.7, 2 * kPi, 1e-10);
    benchmark::DoNotOptimize(g.at(kPi).r);
  }
}
BENCHMARK(BM_Geodesic)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_FanBuild(benchmark::State& state) {
  const MetricProfile p = make_lambda_profile(4.0);
  for (auto _ : state) {
    const GeodesicFan fan(p, make_point(kPi / 3, 0.0), static_cast<std::size_t>(state.range(0)), kPi + 0.2);
    benchmark::DoNotOptimize(fan.size());
  }
}
BENCHMARK(BM_FanBuild)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_CutPoint(benchmark::State& state) {
  const MetricProfile p = make_lambda_profile(4.0);
  const GeodesicFan fan(p, make_point(kPi / 4, 0.0), 1024, kPi + 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(cut_point_along(fan, 1.0).distance);
}
BENCHMARK(BM_CutPoint)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
