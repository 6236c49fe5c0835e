// OpenMP kernels against their serial references.

#include "hetbif/diagram.hpp"
#include "hetbif/modelmap.hpp"

#include <benchmark/benchmark.h>

using namespace hetbif;

namespace {

std::vector<Vec2> gap_points() {
  std::vector<Vec2> pts;
  for (int i = 0; i < 64; ++i) pts.push_back({-0.01 + 0.02 * i / 63, 0.005});
  return pts;
}

template <bool Parallel>
void BM_SamplePoints(benchmark::State& st) {
  Scenario s = scenario("mono_c32");
  ZeroFunction f = zero_function(s, CurveTag::H_L);
  auto pts = gap_points();
  for (auto _ : st) benchmark::DoNotOptimize(Parallel ? sample_points(f, pts) : sample_points_serial(f, pts));
}

template <bool Parallel>
void BM_Displacement(benchmark::State& st) {
  Scenario s = scenario("mono_c12");
  BoundField f = s.field({3.3e-6, -0.015});
  std::vector<double> xs;
  for (int i = 1; i <= 48; ++i) xs.push_back(0.08 * i / 48);
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? displacement_samples(f, s.cycle_section, xs)
                                      : displacement_samples_serial(f, s.cycle_section, xs));
}

template <bool Parallel>
void BM_FixedPointGrid(benchmark::State& st) {
  ModelMapFamily fam;
  for (auto _ : st) benchmark::DoNotOptimize(Parallel ? fixed_point_grid(fam, 200) : fixed_point_grid_serial(fam, 200));
}

}  // namespace

BENCHMARK(BM_SamplePoints<false>)->Name("sample_points/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplePoints<true>)->Name("sample_points/openmp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Displacement<false>)->Name("displacement_samples/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Displacement<true>)->Name("displacement_samples/openmp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FixedPointGrid<false>)->Name("fixed_point_grid/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FixedPointGrid<true>)->Name("fixed_point_grid/openmp")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
