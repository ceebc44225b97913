// Serial reference vs OpenMP kernels. Arg(0) is serial, Arg(1) parallel.
#include <benchmark/benchmark.h>

#include "padelab/lab.hpp"

using namespace padelab;

namespace {

kernels::Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? kernels::Exec::serial : kernels::Exec::parallel;
}

LabSetup montessus(kernels::Exec exec) {
  const std::vector<Complex> poles{2.0, 3.0, 4.0}, residues{1.0, 1.0, 1.0};
  return LabSetup{TargetFunction::partial_fractions(poles, residues),
                  TriangularTable(RootsOfUnityTable{}, 40),
                  CompactSet::circle(0.0, 1.0),
                  Measure::uniform_circle(0.0, 1.0),
                  2,
                  CompactSet::circle(0.0, 1.5),
                  GridSpec{},
                  Precision::binary64,
                  PadeOptions{},
                  exec};
}

void BM_LevelGrid(benchmark::State& state) {
  const Measure mu = Measure::discrete({Complex(-1.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 1.5)});
  const LevelRegion D(mu, 2.0);
  const Box box{-4.0, 4.0, -4.0, 4.0};
  for (auto _ : state) benchmark::DoNotOptimize(level_grid(D, box, 400, 400, exec_of(state)));
}
BENCHMARK(BM_LevelGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RhoExtrema(benchmark::State& state) {
  // A polygon against a discrete measure has no closed form, so the grid scan runs.
  const CompactSet E = CompactSet::polygon({Complex(-1.0, -1.0), Complex(1.0, -1.0), Complex(1.2, 0.8), Complex(-0.8, 1.0)});
  std::vector<Complex> atoms;
  for (int k = 0; k < 32; ++k) atoms.push_back(std::polar(1.0, 2.0 * kPi * k / 32.0));
  const Measure mu = Measure::discrete(atoms);
  for (auto _ : state) benchmark::DoNotOptimize(rho_extrema(E, mu, GridSpec{}, exec_of(state)));
}
BENCHMARK(BM_RhoExtrema)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BuildSweep(benchmark::State& state) {
  const LabSetup s = montessus(exec_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(build_sweep(s, NRange{10, 36}));
}
BENCHMARK(BM_BuildSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RateSequence(benchmark::State& state) {
  const LabSetup s = montessus(exec_of(state));
  const auto sweep = build_sweep(s, NRange{10, 36});
  for (auto _ : state) benchmark::DoNotOptimize(rate_sequence(s, sweep, 0.01));
}
BENCHMARK(BM_RateSequence)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
