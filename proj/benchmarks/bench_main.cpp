#include <benchmark/benchmark.h>

#include <random>

#include "bandeig/band_lu.hpp"
#include "bandeig/band_reduction.hpp"
#include "bandeig/kmeans1d.hpp"
#include "bandeig/layout/redistribute.hpp"

namespace {

using namespace bandeig;

DenseHermitian<double> random_symmetric(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixX<double> M(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) M(i, j) = dist(rng);
    M(j, j) = 2.0 * static_cast<double>(j) + dist(rng);
  }
  return DenseHermitian<double>::from_lower(M);
}

void BM_band_reduce(benchmark::State& state) {
  const Index n = state.range(0), n_bw = state.range(1);
  auto A = random_symmetric(n, 11);
  for (auto _ : state) {
    auto [D, T] = band_reduce(A, n_bw);
    benchmark::DoNotOptimize(D);
  }
}
BENCHMARK(BM_band_reduce)->Args({128, 16})->Args({256, 16})->Args({256, 32});

void BM_band_solve(benchmark::State& state) {
  const Index n = state.range(0), n_bw = state.range(1);
  auto A = random_symmetric(n, 12);
  auto D = band_reduce(A, n_bw).first;
  ShiftedBandFactor F(D, Complex(0.0, 1.0));
  std::mt19937_64 rng(13);
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixX<Complex> B(n, 8);
  for (Index j = 0; j < B.cols(); ++j)
    for (Index i = 0; i < n; ++i) B(i, j) = Complex(dist(rng), dist(rng));
  for (auto _ : state) {
    auto Y = F.solve(B);
    benchmark::DoNotOptimize(Y);
  }
}
BENCHMARK(BM_band_solve)->Args({256, 16})->Args({512, 32});

void BM_kmeans1d(benchmark::State& state) {
  const Index n = state.range(0), k = state.range(1);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  std::vector<double> values(n);
  for (auto& v : values) v = dist(rng);
  std::sort(values.begin(), values.end());
  for (auto _ : state) {
    auto part = kmeans1d(values, k);
    benchmark::DoNotOptimize(part);
  }
}
BENCHMARK(BM_kmeans1d)->Args({1000, 8})->Args({100000, 16});

void BM_redistribute(benchmark::State& state) {
  const Index n = state.range(0), nev = state.range(1);
  ProcessGrid g(2, 2);
  std::mt19937_64 rng(15);
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixX<double> X(n, nev);
  for (Index j = 0; j < nev; ++j)
    for (Index i = 0; i < n; ++i) X(i, j) = dist(rng);
  std::vector<Index> counts(g.ranks(), nev / g.ranks());
  counts[0] += nev - (nev / g.ranks()) * g.ranks();
  auto X1 = Irregular1DLayout<double>::scatter(X, counts);
  for (auto _ : state) {
    auto [X2, t] = redistribute_1d_to_2d(X1, 32, 32, g);
    benchmark::DoNotOptimize(X2);
  }
}
BENCHMARK(BM_redistribute)->Args({512, 64})->Args({1024, 128});

}  // namespace

BENCHMARK_MAIN();
