// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "stein_pairs/curie_weiss.hpp"
#include "stein_pairs/kernels.hpp"
#include "stein_pairs/numerics.hpp"

using namespace stein_pairs;

namespace {

std::vector<double> grid(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = -6.0 + 12.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

const kernels::Fn kDensity = [](double t) { return std::exp(-t * t * t * t / 12.0) * std::cos(t); };

template <bool Parallel>
void BM_Map(benchmark::State& state) {
  const auto x = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto y = Parallel ? kernels::omp::map(kDensity, x) : kernels::serial::map(kDensity, x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Dot(benchmark::State& state) {
  const auto x = grid(static_cast<std::size_t>(state.range(0)));
  const auto p = kernels::serial::map(kDensity, x);
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? kernels::omp::dot(p, x) : kernels::serial::dot(p, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_CurieWeissLaw(benchmark::State& state) {
  const long long n = state.range(0);
  for (auto _ : state) {
    auto w = Parallel ? kernels::omp::curie_weiss_log_weights(n, 1.0) : kernels::serial::curie_weiss_log_weights(n, 1.0);
    auto p = Parallel ? kernels::omp::normalize_log_weights(w) : kernels::serial::normalize_log_weights(w);
    benchmark::DoNotOptimize(p.data());
  }
  state.SetItemsProcessed(state.iterations() * (n + 1));
}

template <bool Parallel>
void BM_KolmogorovGap(benchmark::State& state) {
  const long long n = state.range(0);
  const auto law = curie_weiss::exact_magnetization_law({n, 1.0}, Execution::serial);
  const LimitLaw q = curie_weiss::quartic_limit();
  const kernels::Fn cdf = [&](double z) { return q.cdf(z); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Parallel ? kernels::omp::max_cdf_gap(law.w_law.atoms(), law.w_law.cumulative(), cdf)
                 : kernels::serial::max_cdf_gap(law.w_law.atoms(), law.w_law.cumulative(), cdf));
  }
  state.SetItemsProcessed(state.iterations() * (n + 1));
}

}  // namespace

BENCHMARK(BM_Map<false>)->Name("map/serial")->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_Map<true>)->Name("map/omp")->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_Dot<false>)->Name("dot/serial")->Arg(1 << 12)->Arg(1 << 20);
BENCHMARK(BM_Dot<true>)->Name("dot/omp")->Arg(1 << 12)->Arg(1 << 20);
BENCHMARK(BM_CurieWeissLaw<false>)->Name("cw_law/serial")->Arg(1000)->Arg(1000000);
BENCHMARK(BM_CurieWeissLaw<true>)->Name("cw_law/omp")->Arg(1000)->Arg(1000000);
BENCHMARK(BM_KolmogorovGap<false>)->Name("ks_gap/serial")->Arg(1600)->Arg(100000);
BENCHMARK(BM_KolmogorovGap<true>)->Name("ks_gap/omp")->Arg(1600)->Arg(100000);

BENCHMARK_MAIN();
