#include <benchmark/benchmark.h>

#include "surflab/ensemble.hpp"
#include "surflab/idss.hpp"
#include "surflab/spectral.hpp"

using namespace surflab;

namespace {

// Realization plus inertia count at three energies: the per-sample kernel of every ensemble.
SampleJob count_job(const GridSpec& g) {
  const PotentialModel m = default_model();
  return [g, m](std::int64_t i) {
    const Hamiltonian H = assemble(g, m.realize(g, static_cast<std::uint64_t>(i) + 1).total(), BoundarySpec{});
    InertiaCounter c(H);
    return std::vector<double>{double(c.count(-1.2)), double(c.count(-1.0)), double(c.count(-0.8))};
  };
}

IdssConfig idss_config(int L, int workers) {
  IdssConfig c;
  c.grid = build_grid(1, 1, L, 1, 16);
  c.model = default_model();
  c.energies = {-1.2, -1.0, -0.8, -0.6};
  c.n_samples = 64;
  c.seed = 3;
  c.workers = workers;
  return c;
}

void BM_run_samples_serial(benchmark::State& st) {
  const SampleJob job = count_job(build_grid(1, 1, static_cast<int>(st.range(0)), 1, 16));
  for (auto _ : st) benchmark::DoNotOptimize(run_samples_serial(64, job));
}

void BM_run_samples_openmp(benchmark::State& st) {
  const SampleJob job = count_job(build_grid(1, 1, static_cast<int>(st.range(0)), 1, 16));
  for (auto _ : st) benchmark::DoNotOptimize(run_samples(64, job, 0));
}

void BM_idss_serial(benchmark::State& st) {
  const IdssConfig c = idss_config(static_cast<int>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(idss_estimate_serial(c));
}

void BM_idss_openmp(benchmark::State& st) {
  const IdssConfig c = idss_config(static_cast<int>(st.range(0)), 0);
  for (auto _ : st) benchmark::DoNotOptimize(idss_estimate(c));
}

}  // namespace

BENCHMARK(BM_run_samples_serial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_samples_openmp)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_idss_serial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_idss_openmp)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
