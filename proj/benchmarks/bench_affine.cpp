#include <benchmark/benchmark.h>

#include "blowup/affine.hpp"

namespace {

void BM_AffineIntegrate(benchmark::State& st) {
  blowup::AffineParams p;
  p.gamma = 1.4;
  p.Ep0 = 0.5;
  for (auto _ : st) benchmark::DoNotOptimize(blowup::affine_integrate(p, static_cast<double>(st.range(0)), 1e-3, 1000));
}

void BM_ThresholdSearch(benchmark::State& st) {
  blowup::AffineParams p;
  p.gamma = 1.4;
  p.Ep0 = 0.5;
  for (auto _ : st) benchmark::DoNotOptimize(blowup::theorem22_search(p, 1e-3));
}

}  // namespace

BENCHMARK(BM_AffineIntegrate)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThresholdSearch)->Unit(benchmark::kMicrosecond);
