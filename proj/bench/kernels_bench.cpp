// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "onshell/chi.hpp"
#include "onshell/matrix.hpp"
#include "onshell/spectral.hpp"

using namespace onshell;

namespace {

Matrix random_matrix(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(-9, 9);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Scalar(Rational(d(rng), 1 + (d(rng) & 3)), Rational(d(rng)));
  return m;
}

void BM_matmul_serial(benchmark::State& st) {
  auto a = random_matrix(static_cast<std::size_t>(st.range(0)), 1), b = random_matrix(static_cast<std::size_t>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(serial::matmul(a, b));
}
void BM_matmul_parallel(benchmark::State& st) {
  auto a = random_matrix(static_cast<std::size_t>(st.range(0)), 1), b = random_matrix(static_cast<std::size_t>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(parallel::matmul(a, b));
}

OperatorExpr bench_operator() { return casimir(4, Metric::minkowski(4)); }

void BM_restriction_serial(benchmark::State& st) {
  auto q = bench_operator();
  for (auto _ : st) benchmark::DoNotOptimize(serial::restriction(q, static_cast<int>(st.range(0))));
}
void BM_restriction_parallel(benchmark::State& st) {
  auto q = bench_operator();
  for (auto _ : st) benchmark::DoNotOptimize(restriction(q, static_cast<int>(st.range(0))));
}
void BM_adjoint_serial(benchmark::State& st) {
  auto q = bench_operator();
  for (auto _ : st) benchmark::DoNotOptimize(serial::adjoint_restriction(q, static_cast<int>(st.range(0))));
}
void BM_adjoint_parallel(benchmark::State& st) {
  auto q = bench_operator();
  for (auto _ : st) benchmark::DoNotOptimize(adjoint_restriction(q, static_cast<int>(st.range(0))));
}

void BM_crosscheck_serial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(serial::chi_crosscheck(static_cast<int>(st.range(0)), 4, {Rational(0), Rational(1)},
                                                    Metric::minkowski(4)));
}
void BM_crosscheck_parallel(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(
        chi_crosscheck(static_cast<int>(st.range(0)), 4, {Rational(0), Rational(1)}, Metric::minkowski(4)));
}

}  // namespace

BENCHMARK(BM_matmul_serial)->Arg(16)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matmul_parallel)->Arg(16)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_restriction_serial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_restriction_parallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_adjoint_serial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_adjoint_parallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_crosscheck_serial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_crosscheck_parallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
