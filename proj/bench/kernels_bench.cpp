// Serial reference kernels against their OpenMP counterparts.

#include "digitlens/counting.hpp"
#include "digitlens/kernels.hpp"

#include <benchmark/benchmark.h>

using namespace digitlens;
namespace kn = digitlens::kernels;

namespace {

DigitSystem carpet() {
  std::vector<DigitTuple> d;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      if (i < 9 && j < 9) d.push_back({i, j});
  return DigitSystem(10, 2, d);
}

template <bool Parallel>
void BM_grid_max(benchmark::State& st) {
  const kn::DigitTable t(carpet());
  std::vector<double> arg;
  for (auto _ : st) {
    const double v = Parallel ? kn::omp::grid_max(t, static_cast<int>(st.range(0)), arg)
                              : kn::serial::grid_max(t, static_cast<int>(st.range(0)), arg);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Parallel>
void BM_partial_sum(benchmark::State& st) {
  const kn::DigitTable t(DigitSystem::one_dim(3, {0, 2}));
  const std::vector<double> theta{0.1};
  for (auto _ : st) {
    const auto s = Parallel ? kn::omp::partial_sum(t, static_cast<int>(st.range(0)), theta, 1e-10, 1)
                            : kn::serial::partial_sum(t, static_cast<int>(st.range(0)), theta, 1e-10, 1);
    benchmark::DoNotOptimize(s.value);
  }
}

template <bool Parallel>
void BM_count_tree(benchmark::State& st) {
  const CellTree tree(carpet());
  const ManifoldSpec circle = ManifoldSpec::circle({0.5, 0.5}, 0.4);
  const int k = static_cast<int>(st.range(0));
  kn::CountQuery q;
  q.tree = &tree;
  q.manifold = &circle;
  q.delta = std::pow(10.0, -k);
  q.depth = k;
  for (auto _ : st) {
    const auto t = Parallel ? kn::omp::count_tree(q) : kn::serial::count_tree(q);
    benchmark::DoNotOptimize(t.straddle);
  }
}

template <bool Parallel>
void BM_cover(benchmark::State& st) {
  const DigitSystem k1 = DigitSystem::one_dim(10, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  const CellTree tree(ProductSystem({k1, k1}));
  kn::CoverQuery q;
  q.tree = &tree;
  q.map = kn::CoverMap::product;
  q.depth = static_cast<int>(st.range(0));
  q.a = 0.2;
  q.bins = 200;
  q.width = 1e-3;
  for (std::int64_t i = 0; i <= q.bins; ++i) q.edges.push_back(Rational(200 + i, 1000));
  for (auto _ : st) {
    const auto t = Parallel ? kn::omp::cover(q) : kn::serial::cover(q);
    benchmark::DoNotOptimize(t.nodes);
  }
}

}  // namespace

BENCHMARK(BM_grid_max<false>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grid_max<true>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_partial_sum<false>)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_partial_sum<true>)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_count_tree<false>)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_count_tree<true>)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cover<false>)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cover<true>)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
