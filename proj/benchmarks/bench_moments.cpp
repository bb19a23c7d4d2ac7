#include <benchmark/benchmark.h>

#include <cmath>

#include "blowup/moments.hpp"

namespace {

blowup::FluidState swirl_state(int cells) {
  using blowup::Point;
  const auto rho = [](const Point& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); };
  return blowup::sample_state(
      blowup::Grid::cube(2, cells, 6.0), 0.0, rho,
      [](const Point& x) { return Point{0.5 * x[0] + x[1], 0.5 * x[1] - x[0], 0.0}; },
      [&](const Point& x) { return std::pow(rho(x), 1.4); });
}

void BM_ComputeMoments(benchmark::State& st) {
  const blowup::FluidState s = swirl_state(static_cast<int>(st.range(0)));
  blowup::GasModel m;
  for (auto _ : st) benchmark::DoNotOptimize(blowup::compute_moments(s, m, {1e-8, false}));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.size()));
}

}  // namespace

BENCHMARK(BM_ComputeMoments)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
