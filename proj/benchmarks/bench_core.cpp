// Copyright 2026 The Brier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "brier/losses.hpp"
#include "brier/nn.hpp"
#include "brier/random.hpp"
#include "brier/training.hpp"

namespace {

using namespace brier;

Tensor random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.normal();
  return Tensor({rows, cols}, std::move(v));
}

std::vector<std::size_t> labels(std::size_t n, std::size_t classes) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i % classes;
  return out;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, n, 1);
  const auto b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);

// One SGD step of the MNIST MLP at batch 64.
void BM_MlpStep(benchmark::State& state) {
  const auto spec = ModelSpec::mlp({784, 256, 10});
  const auto loss = state.range(0) ? LossSpec::rescaled_square() : LossSpec::cross_entropy();
  Params params = init_params(spec, 1);
  Params velocity = zeros_like(params);
  const auto x = random_matrix(64, 784, 3);
  const auto y = labels(64, 10);
  for (auto _ : state) {
    const auto fr = forward(spec, params, x);
    const auto bl = batch_loss(loss, fr.outputs, y);
    const auto grads = backward(spec, params, fr.cache, bl.grad);
    auto next = sgd_step(params, grads, velocity, 1e-4, 0.0);
    params = std::move(next.params);
    velocity = std::move(next.velocity);
  }
  state.SetLabel(loss.to_string());
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_MlpStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BatchLoss(benchmark::State& state) {
  const auto classes = static_cast<std::size_t>(state.range(1));
  const auto loss = state.range(0) ? LossSpec::rescaled_square(15, 30) : LossSpec::cross_entropy();
  const auto out = random_matrix(64, classes, 4);
  const auto y = labels(64, classes);
  for (auto _ : state) benchmark::DoNotOptimize(batch_loss(loss, out, y));
  state.SetLabel(loss.to_string());
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_BatchLoss)->ArgsProduct({{0, 1}, {10, 1000}});

}  // namespace

BENCHMARK_MAIN();
