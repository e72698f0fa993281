// Copyright 2026 The coevo-skill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "coevo/kernels.hpp"

namespace {

using coevo::Matrix;

Matrix noise(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Matrix m(rows, cols);
  for (double& v : m.values()) v = d(rng);
  return m;
}

// Args: batch rows, layer width (square layer).
template <auto Kernel>
void BM_Forward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto w = static_cast<std::size_t>(state.range(1));
  const Matrix x = noise(n, w, 1), weights = noise(w, w, 2);
  const std::vector<double> bias(w, 0.1);
  Matrix y(n, w);
  for (auto _ : state) {
    Kernel(x, weights, bias, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n * w * w));
}

template <auto Kernel>
void BM_GradParams(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto w = static_cast<std::size_t>(state.range(1));
  const Matrix up = noise(n, w, 3), x = noise(n, w, 4);
  Matrix dw(w, w);
  std::vector<double> db(w);
  for (auto _ : state) {
    Kernel(up, x, dw, db);
    benchmark::DoNotOptimize(dw.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n * w * w));
}

template <auto Kernel>
void BM_GradInput(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto w = static_cast<std::size_t>(state.range(1));
  const Matrix up = noise(n, w, 5), weights = noise(w, w, 6);
  Matrix dx(n, w);
  for (auto _ : state) {
    Kernel(up, weights, dx);
    benchmark::DoNotOptimize(dx.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n * w * w));
}

// Args: sample count, dimension.
template <auto Kernel>
void BM_Covariance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const Matrix s = noise(n, d, 7);
  const std::vector<double> mean(d, 0.0);
  Matrix cov(d, d);
  for (auto _ : state) {
    Kernel(s, mean, cov);
    benchmark::DoNotOptimize(cov.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n * d * d));
}

void LayerSizes(benchmark::internal::Benchmark* b) {
  for (int w : {32, 128, 256}) b->Args({64, w})->Args({512, w});
}

void SampleSizes(benchmark::internal::Benchmark* b) {
  for (int d : {2, 16, 64}) b->Args({2048, d});
}

namespace serial = coevo::kernels::serial;
namespace parallel = coevo::kernels::parallel;

BENCHMARK(BM_Forward<serial::affine_forward>)->Apply(LayerSizes);
BENCHMARK(BM_Forward<parallel::affine_forward>)->Apply(LayerSizes)->UseRealTime();
BENCHMARK(BM_GradParams<serial::affine_grad_params>)->Apply(LayerSizes);
BENCHMARK(BM_GradParams<parallel::affine_grad_params>)->Apply(LayerSizes)->UseRealTime();
BENCHMARK(BM_GradInput<serial::affine_grad_input>)->Apply(LayerSizes);
BENCHMARK(BM_GradInput<parallel::affine_grad_input>)->Apply(LayerSizes)->UseRealTime();
BENCHMARK(BM_Covariance<serial::covariance>)->Apply(SampleSizes);
BENCHMARK(BM_Covariance<parallel::covariance>)->Apply(SampleSizes)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
