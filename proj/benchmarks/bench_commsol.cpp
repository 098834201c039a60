#include <benchmark/benchmark.h>

#include "commsol/geometry.hpp"

using namespace commsol;

static void BM_EnumerateSubgroups(benchmark::State &state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_subgroups(2, state.range(0)));
  }
}
BENCHMARK(BM_EnumerateSubgroups)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_ProfiniteKernelF2(benchmark::State &state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(profinite_kernel(2, state.range(0)));
  }
}
BENCHMARK(BM_ProfiniteKernelF2)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

static void BM_ProfiniteKernelZ(benchmark::State &state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(profinite_kernel(std::size_t{2}, state.range(0)));
  }
}
BENCHMARK(BM_ProfiniteKernelZ)->DenseRange(2, 6, 2);

static void BM_ComposeCatalog(benchmark::State &state) {
  const auto cat = f2_catalog();
  for (auto _ : state) {
    for (const auto &f : cat) {
      for (const auto &g : cat) {
        benchmark::DoNotOptimize(compose(f, g));
      }
    }
  }
}
BENCHMARK(BM_ComposeCatalog)->Unit(benchmark::kMillisecond);

static void BM_MatrixCompose(benchmark::State &state) {
  const ZComm a = from_matrix(RationalMatrix(3, {mpq_class(1, 2), 1, 0, 0, mpq_class(2, 3), 1, 1, 0, 2}));
  const ZComm b = from_matrix(RationalMatrix(3, {2, 0, 1, mpq_class(1, 3), 1, 0, 0, 1, 1}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose(a, b));
  }
}
BENCHMARK(BM_MatrixCompose);

static void BM_Zeta(benchmark::State &state) {
  const auto s = std::make_shared<const TruncatedSystem<FreeGroup>>(2, state.range(0));
  const FComm phi = f2_catalog()[9];
  for (auto _ : state) {
    benchmark::DoNotOptimize(zeta<FreeGroup>(phi, s));
  }
}
BENCHMARK(BM_Zeta)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

static void BM_SigmaF2(benchmark::State &state) {
  const FreeSolenoid s(2, 2);
  const auto p = s.point(0, TreePoint{Word(2), 1, mpq_class(1, 4)});
  const auto q = s.baseleaf(parse_word("abAB", 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.sigma(p, q));
  }
}
BENCHMARK(BM_SigmaF2);

static void BM_QIEstimate(benchmark::State &state) {
  const BaseleafMap<FreeGroup> m(f2_catalog()[9]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qi_estimate(m, state.range(0)));
  }
}
BENCHMARK(BM_QIEstimate)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_BoundedDistance(benchmark::State &state) {
  const auto cat = f2_catalog();
  const BaseleafMap<FreeGroup> a(cat[5]), b(cat[7]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bounded_distance(a, b, state.range(0)));
  }
}
BENCHMARK(BM_BoundedDistance)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BoundaryAction(benchmark::State &state) {
  const FComm phi = f2_catalog()[10];
  const auto p = fixed_point(parse_word("abAbb", 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(boundary_action(phi, p));
  }
}
BENCHMARK(BM_BoundaryAction);

BENCHMARK_MAIN();
