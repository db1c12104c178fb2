#include <benchmark/benchmark.h>

#include <vector>

#include "mpineq/dense_matrix.hpp"
#include "mpineq/kernels.hpp"
#include "mpineq/random.hpp"

using namespace mpineq;

namespace {

struct Data {
  DenseMatrix kernel;
  std::vector<double> v_masses, e_masses, weights, row_factor;

  explicit Data(std::size_t n) : kernel(n, n), v_masses(n), e_masses(n), weights(n), row_factor(n) {
    Rng rng(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t e = 0; e < n; ++e) kernel(v, e) = rng.uniform(0.0, 2.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
      v_masses[i] = rng.uniform(0.1, 1.0);
      e_masses[i] = rng.uniform(0.1, 1.0);
      weights[i] = rng.uniform(0.5, 2.0);
      row_factor[i] = rng.uniform(-1.0, 1.0);
    }
  }
};

template <bool Parallel>
void BM_degrees(benchmark::State& state) {
  const Data d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = Parallel ? kernels::degrees(d.kernel, d.weights, d.e_masses)
                        : kernels::serial::degrees(d.kernel, d.weights, d.e_masses);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool Parallel>
void BM_column_sums(benchmark::State& state) {
  const Data d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = Parallel ? kernels::column_mass_sums(d.kernel, d.v_masses)
                        : kernels::serial::column_mass_sums(d.kernel, d.v_masses);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool Parallel>
void BM_double_sum(benchmark::State& state) {
  const Data d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const double x = Parallel ? kernels::double_sum(d.kernel, d.row_factor, d.weights, d.v_masses, d.e_masses)
                              : kernels::serial::double_sum(d.kernel, d.row_factor, d.weights, d.v_masses, d.e_masses);
    benchmark::DoNotOptimize(x);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

}  // namespace

BENCHMARK(BM_degrees<false>)->Name("degrees/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_degrees<true>)->Name("degrees/omp")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_column_sums<false>)->Name("column_sums/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_column_sums<true>)->Name("column_sums/omp")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_double_sum<false>)->Name("double_sum/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_double_sum<true>)->Name("double_sum/omp")->RangeMultiplier(4)->Range(64, 4096);

BENCHMARK_MAIN();
