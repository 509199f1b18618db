// Copyright 2026 The fqaoa-sim Authors
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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fqaoa/kernels.hpp"

using namespace fqaoa::kernels;

namespace {

std::vector<cplx> random_state(int n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(std::size_t{1} << n);
  for (auto& a : v) a = {nd(rng), nd(rng)};
  return v;
}

const Mat2 kMat{{0.6, 0.0}, {0.0, -0.8}, {0.0, -0.8}, {0.6, 0.0}};

template <void (*F)(std::span<cplx>, int, const Mat2&)>
void bm_apply_1q(benchmark::State& state) {
  auto v = random_state(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    F(v, 3, kMat);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

template <void (*F)(std::span<cplx>, int, int, double, double)>
void bm_pair_rotation(benchmark::State& state) {
  auto v = random_state(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    F(v, 2, 9, 0.6, 0.8);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

template <void (*F)(std::span<cplx>, std::span<const double>, double)>
void bm_phase_diagonal(benchmark::State& state) {
  auto v = random_state(static_cast<int>(state.range(0)));
  std::vector<double> e(v.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = 0.001 * static_cast<double>(i % 977);
  for (auto _ : state) {
    F(v, e, 0.3);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

template <double (*F)(std::span<const cplx>)>
void bm_norm(benchmark::State& state) {
  const auto v = random_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(F(v));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

}  // namespace

BENCHMARK(bm_apply_1q<serial::apply_1q>)->Name("apply_1q/serial")->DenseRange(12, 20, 4);
BENCHMARK(bm_apply_1q<parallel::apply_1q>)->Name("apply_1q/parallel")->DenseRange(12, 20, 4);
BENCHMARK(bm_pair_rotation<serial::apply_real_pair_rotation>)->Name("pair_rotation/serial")->DenseRange(12, 20, 4);
BENCHMARK(bm_pair_rotation<parallel::apply_real_pair_rotation>)->Name("pair_rotation/parallel")->DenseRange(12, 20, 4);
BENCHMARK(bm_phase_diagonal<serial::apply_phase_diagonal>)->Name("phase_diagonal/serial")->DenseRange(12, 20, 4);
BENCHMARK(bm_phase_diagonal<parallel::apply_phase_diagonal>)->Name("phase_diagonal/parallel")->DenseRange(12, 20, 4);
BENCHMARK(bm_norm<serial::norm_squared>)->Name("norm/serial")->DenseRange(12, 20, 4);
BENCHMARK(bm_norm<parallel::norm_squared>)->Name("norm/parallel")->DenseRange(12, 20, 4);

BENCHMARK_MAIN();
