// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to vary workers.

#include <benchmark/benchmark.h>

#include <random>

#include "steerfiber/phantom.hpp"
#include "steerfiber/raycast.hpp"
#include "steerfiber/reachability.hpp"

using namespace steerfiber;

namespace {

const TriMesh& phantom() {
  static const TriMesh mesh = make_larynx_phantom();
  return mesh;
}

const std::vector<Ray>& rays() {
  static const std::vector<Ray> r = [] {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::vector<Ray> out;
    for (int i = 0; i < 100000; ++i) {
      out.push_back(Ray::toward(Vec3(u(rng), u(rng), 10.0 + u(rng)), Vec3(n(rng), n(rng), n(rng))));
    }
    return out;
  }();
  return r;
}

const std::vector<SceneConfig>& configs() {
  static const std::vector<SceneConfig> c = [] {
    SamplingParams p;
    p.n_configs = 256;
    p.seed = 7;
    return sample_configs(phantom(), DeviceModel{}, p).configs;
  }();
  return c;
}

void BM_CastRaysSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cast_rays_serial(rays(), phantom()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rays().size()));
}

void BM_CastRaysParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cast_rays_parallel(rays(), phantom()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rays().size()));
}

void BM_MapSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(accumulate_map_serial(phantom(), DeviceModel{}, configs(), BeamSpec{}, 7));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(configs().size()));
}

void BM_MapParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(accumulate_map(phantom(), DeviceModel{}, configs(), BeamSpec{}, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(configs().size()));
}

}  // namespace

BENCHMARK(BM_CastRaysSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CastRaysParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MapSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MapParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
