/*
 * Copyright 2026 The proxycert Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "proxycert/metrics.h"

namespace proxycert {
namespace {

struct Inputs {
  std::vector<double> f;
  std::vector<std::uint8_t> y;
  std::vector<std::uint8_t> mask;
  std::vector<std::uint8_t> other;
};

Inputs MakeInputs(std::size_t n, int levels) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> level(0, levels - 1);
  std::bernoulli_distribution coin(0.5);
  Inputs in;
  for (std::size_t i = 0; i < n; ++i) {
    in.f.push_back((level(rng) + 0.5) / levels);
    in.y.push_back(coin(rng));
    in.mask.push_back(coin(rng));
    in.other.push_back(coin(rng));
  }
  return in;
}

void BM_Mse(benchmark::State& state) {
  const Inputs in = MakeInputs(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(Mse(in.f, in.y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Mse)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_GroupAe(benchmark::State& state) {
  const Inputs in = MakeInputs(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(GroupAe(in.f, in.y, in.mask));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GroupAe)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_GroupEce(benchmark::State& state) {
  const Inputs in = MakeInputs(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(GroupEce(in.f, in.y, in.mask));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GroupEce)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_ProxyError(benchmark::State& state) {
  const Inputs in = MakeInputs(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(ProxyError(in.mask, in.other));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProxyError)->Arg(1 << 16)->Arg(1 << 20);

}  // namespace
}  // namespace proxycert

BENCHMARK_MAIN();
