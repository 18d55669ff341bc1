#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "freeconv/kernels.hpp"

namespace {

using namespace freeconv::kernels;

std::vector<double> sample(std::size_t n) {
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -2.0 + 4.0 * static_cast<double>(j) / static_cast<double>(n - 1);
    f[j] = std::sqrt(std::max(0.0, 4.0 - x * x));
  }
  return f;
}

std::vector<double> nodes(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = -2.0 + 4.0 * static_cast<double>(j) / static_cast<double>(n - 1);
  return x;
}

template <auto Fn>
void BM_hilbert(benchmark::State& state) {
  const auto f = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f));
}

template <auto Fn>
void BM_log_potential(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = sample(n);
  const auto at = nodes(n);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(-2.0, 4.0 / static_cast<double>(n - 1), f, at));
}

template <auto Fn>
void BM_cauchy_convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = sample(n);
  const auto at = nodes(n);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(-2.0, 4.0 / static_cast<double>(n - 1), f, 0.05, at));
}

template <auto Fn>
void BM_cauchy_many(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = nodes(n);
  auto wf = sample(n);
  for (double& w : wf) w *= 4.0 / static_cast<double>(n - 1);
  std::vector<cplx> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = {x[j], 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x, wf, z));
}

template <auto Fn>
void BM_quadruple(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = nodes(n);
  auto q = sample(n);
  std::vector<cplx> g(n), dg(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx z(x[j], 0.05);
    g[j] = 0.5 * (z - std::sqrt(z - 2.0) * std::sqrt(z + 2.0));
    dg[j] = -g[j] * g[j] / (1.0 - g[j] * g[j]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x, q, g, dg, 0.05));
}

}  // namespace

BENCHMARK(BM_hilbert<serial::hilbert_midpoint>)->Name("hilbert_midpoint/serial")->Arg(2001)->Arg(8001);
BENCHMARK(BM_hilbert<omp::hilbert_midpoint>)->Name("hilbert_midpoint/omp")->Arg(2001)->Arg(8001)->UseRealTime();
BENCHMARK(BM_log_potential<serial::log_potential>)->Name("log_potential/serial")->Arg(2001);
BENCHMARK(BM_log_potential<omp::log_potential>)->Name("log_potential/omp")->Arg(2001)->UseRealTime();
BENCHMARK(BM_cauchy_convolve<serial::cauchy_convolve>)->Name("cauchy_convolve/serial")->Arg(2001);
BENCHMARK(BM_cauchy_convolve<omp::cauchy_convolve>)->Name("cauchy_convolve/omp")->Arg(2001)->UseRealTime();
BENCHMARK(BM_cauchy_many<serial::cauchy_trapezoid_many>)->Name("cauchy_trapezoid_many/serial")->Arg(2001);
BENCHMARK(BM_cauchy_many<omp::cauchy_trapezoid_many>)->Name("cauchy_trapezoid_many/omp")->Arg(2001)->UseRealTime();
BENCHMARK(BM_quadruple<serial::quadruple_sum>)->Name("quadruple_sum/serial")->Arg(1001);
BENCHMARK(BM_quadruple<omp::quadruple_sum>)->Name("quadruple_sum/omp")->Arg(1001)->UseRealTime();

BENCHMARK_MAIN();
