#include <benchmark/benchmark.h>

#include "kvstring/iss.hpp"
#include "kvstring/reference_fd.hpp"

using namespace kvstring;

namespace {

SimulationConfig sine_config(std::size_t n) {
  const StringParams p = validate_params(1.0, 2.0);
  const UniformGrid g(n);
  const BoundarySignal d(signal::Sine{0.5, 2.0, 0.3});
  SimulationConfig cfg(p, lift_boundary(d.value(0.0), p, g) + 0.3 * eigenstate(p, {1, 1}, g));
  cfg.d = d;
  cfg.t_end = 1.0;
  return cfg;
}

void BM_Eigenvalues(benchmark::State& state) {
  const StringParams p = validate_params(1.0, 1.0);
  const int k_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    cplx acc;
    for (int k = 0; k <= k_max; ++k) acc += eigenvalue(p, {k, -1}) + eigenvalue(p, {k, 1});
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 2 * (k_max + 1));
}
BENCHMARK(BM_Eigenvalues)->Arg(200)->Arg(10000);

void BM_Project(benchmark::State& state) {
  const StringParams p = validate_params(1.0, 1.0);
  const UniformGrid g(static_cast<std::size_t>(state.range(0)));
  const StateVector x = eigenstate(p, {2, 1}, g) + 0.5 * eigenstate(p, {7, -1}, g);
  const ModalBasis basis(p, 64);
  for (auto _ : state) benchmark::DoNotOptimize(project(x, basis));
}
BENCHMARK(BM_Project)->Arg(1024)->Arg(4096);

void BM_SimulateSpectral(benchmark::State& state) {
  SimulationConfig cfg = sine_config(1024);
  cfg.truncation = static_cast<int>(state.range(0));
  cfg.truncation_rel_tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_spectral(cfg));
}
BENCHMARK(BM_SimulateSpectral)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SimulateFd(benchmark::State& state) {
  const SimulationConfig cfg = sine_config(1024);
  const FdConfig fd{static_cast<std::size_t>(state.range(0)), 1e-4, false};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_fd(cfg, fd));
}
BENCHMARK(BM_SimulateFd)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Certificate(benchmark::State& state) {
  const StringParams p = validate_params(1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(certificate(p, 1e-6));
}
BENCHMARK(BM_Certificate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
