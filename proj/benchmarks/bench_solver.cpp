#include <benchmark/benchmark.h>

#include "blowup/solver.hpp"
#include "blowup/vortex.hpp"

namespace {

void BM_SolverStep(benchmark::State& st) {
  const blowup::FluidState s = blowup::vortex_build({}, blowup::Grid::cube(2, static_cast<int>(st.range(0)), 2.0));
  blowup::GasModel m;
  m.gamma = 2.0;
  m.force.terms.push_back(blowup::Coriolis{1.0});
  blowup::SolverConfig c;
  c.scheme = st.range(1) ? blowup::Scheme::MUSCL2 : blowup::Scheme::LLF1;
  for (auto _ : st) benchmark::DoNotOptimize(blowup::step(s, m, c));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.size()));
}

}  // namespace

BENCHMARK(BM_SolverStep)->Args({64, 0})->Args({64, 1})->Args({128, 1})->Args({256, 1})->Unit(benchmark::kMillisecond);
