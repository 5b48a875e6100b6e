// Serial reference vs OpenMP renderers. Run with --benchmark_filter=... and
// OMP_NUM_THREADS to compare scaling.

#include <benchmark/benchmark.h>

#include "qdyn/atlas.hpp"

namespace {

using namespace qdyn;

template <Raster (*Render)(const MapParam&, const Window&, const JuliaOptions&)>
void julia(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const Window w = Window::from_bounds(-2, 2, -2, 2, res, res);
  JuliaOptions opt;
  opt.targets = attracting_targets(MapParam({1, 0}), {});
  for (auto _ : state) benchmark::DoNotOptimize(Render(MapParam({1, 0}), w, opt));
  state.SetItemsProcessed(state.iterations() * res * res);
}

template <Raster (*Render)(const Window&, const ParameterSpaceOptions&)>
void params(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const Window w = Window::from_bounds(0, 3, 0, 3, res, res);
  for (auto _ : state) benchmark::DoNotOptimize(Render(w, {}));
  state.SetItemsProcessed(state.iterations() * res * res);
}

template <std::vector<SweepRow> (*Sweep)(const SweepOptions&)>
void sweep(benchmark::State& state) {
  SweepOptions opt;
  opt.samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Sweep(opt));
  state.SetItemsProcessed(state.iterations() * opt.samples);
}

}  // namespace

BENCHMARK(julia<render_julia_serial>)->Name("julia/serial")->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(julia<render_julia>)->Name("julia/omp")->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(params<render_parameter_space_serial>)->Name("params/serial")->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK(params<render_parameter_space>)->Name("params/omp")->Arg(96)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(sweep<bifurcation_sweep_serial>)->Name("sweep/serial")->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(sweep<bifurcation_sweep>)->Name("sweep/omp")->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
