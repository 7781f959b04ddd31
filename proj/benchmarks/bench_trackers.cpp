#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "varcs/baselines.hpp"
#include "varcs/hilbert.hpp"
#include "varcs/psi.hpp"
#include "varcs/streams.hpp"
#include "varcs/variance_cs.hpp"

namespace {

using namespace varcs;

std::vector<double> bench_stream(std::size_t n) {
  StreamSpec spec;
  spec.seed = 42;
  spec.length = n;
  return generate_stream(spec);
}

void BM_PsiE(benchmark::State& state) {
  double lam = 0.0;
  for (auto _ : state) {
    lam += 9.7e-8;
    benchmark::DoNotOptimize(psi_e(lam));
  }
}
BENCHMARK(BM_PsiE);

void BM_UpperTrackerUpdate(benchmark::State& state) {
  const auto xs = bench_stream(1 << 16);
  std::size_t i = 0;
  UpperTracker tracker(0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracker.update(xs[i]));
    if (++i == xs.size()) {
      i = 0;
      tracker = UpperTracker(0.05);
    }
  }
}
BENCHMARK(BM_UpperTrackerUpdate);

void BM_TwoSidedUpdate(benchmark::State& state) {
  const auto xs = bench_stream(1 << 16);
  std::size_t i = 0;
  VarianceTracker tracker(0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracker.update(xs[i]));
    if (++i == xs.size()) {
      i = 0;
      tracker = VarianceTracker(0.05);
    }
  }
}
BENCHMARK(BM_TwoSidedUpdate);

void BM_DecoupledUpdate(benchmark::State& state) {
  const auto xs = bench_stream(1 << 16);
  std::size_t i = 0;
  DecoupledTracker tracker(0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracker.update(xs[i]));
    if (++i == xs.size()) {
      i = 0;
      tracker = DecoupledTracker(0.05);
    }
  }
}
BENCHMARK(BM_DecoupledUpdate);

void BM_VecTrackerUpdateD3(benchmark::State& state) {
  const auto xs = bench_stream(3 * (1 << 14));
  std::size_t i = 0;
  VecVarianceTracker tracker(3, 0.05);
  std::array<double, 3> x{};
  for (auto _ : state) {
    for (auto& c : x) c = (xs[i++ % xs.size()] - 0.5) * 0.577;
    benchmark::DoNotOptimize(tracker.update(x));
    if (tracker.count() == (1 << 14)) tracker = VecVarianceTracker(3, 0.05);
  }
}
BENCHMARK(BM_VecTrackerUpdateD3);

void BM_BetaDraw(benchmark::State& state) {
  StreamSpec spec;
  spec.kind = StreamKind::beta;
  spec.a = 2.0;
  spec.b = 6.0;
  spec.seed = 7;
  StreamGenerator gen(spec);
  for (auto _ : state) benchmark::DoNotOptimize(gen.next());
}
BENCHMARK(BM_BetaDraw);

}  // namespace

BENCHMARK_MAIN();
