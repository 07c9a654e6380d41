#include <benchmark/benchmark.h>

#include "hmp/cayley_basis.hpp"
#include "hmp/nevanlinna.hpp"
#include "hmp/oracle.hpp"
#include "hmp/transform.hpp"

namespace {

using namespace hmp;

const MomentSequence& lognormal() {
  static const MomentSequence seq = oracle::lognormal_moments(129, 256);
  return seq;
}

void BM_Embed(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(embed(lognormal(), m));
}
BENCHMARK(BM_Embed)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Orthogonalize(benchmark::State& state) {
  const GramModel model = embed(lognormal(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(orthogonalize(model));
}
BENCHMARK(BM_Orthogonalize)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Coefficients(benchmark::State& state) {
  const GramModel model = embed(lognormal(), static_cast<int>(state.range(0)));
  const StructureMatrices sm = structure_matrices(orthogonalize(model), model);
  PrecisionScope scope(lognormal().precision_bits());
  const Complex z = make_complex(0.5, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(coefficients(sm, lognormal(), z));
}
BENCHMARK(BM_Coefficients)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_TransformGrid(benchmark::State& state) {
  const TransformEvaluator ev(lognormal(), 32);
  const int threads = static_cast<int>(state.range(0));
  PrecisionScope scope(lognormal().precision_bits());
  std::vector<Complex> grid;
  for (int k = 0; k < 64; ++k) grid.push_back(make_complex(-4.0 + 0.125 * k, 0.5));
  const SchurParameter f = SchurParameter::scalar(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate(grid, f, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_TransformGrid)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_AtomicInversion(benchmark::State& state) {
  const AtomicMatrixMeasure m = oracle::random_atomic_measure(5, 2, 4);
  InversionOptions opts;
  opts.step = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(stieltjes_invert(atomic_transform(m), -3.0, 3.0, opts));
}
BENCHMARK(BM_AtomicInversion)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
