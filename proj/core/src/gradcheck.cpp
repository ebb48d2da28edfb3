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

#include "brier/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "brier/error.hpp"
#include "brier/random.hpp"

namespace brier {
namespace {

struct Coord {
  std::size_t layer;
  bool is_bias;
  std::size_t index;
};

std::vector<Coord> all_coords(const Params& params) {
  std::vector<Coord> coords;
  for (std::size_t l = 0; l < params.size(); ++l) {
    for (std::size_t i = 0; i < params[l].weight.size(); ++i) coords.push_back({l, false, i});
    for (std::size_t i = 0; i < params[l].bias.size(); ++i) coords.push_back({l, true, i});
  }
  return coords;
}

double read(const Params& p, const Coord& c) {
  const auto& t = c.is_bias ? p[c.layer].bias : p[c.layer].weight;
  return t[c.index];
}

Params with_offset(const Params& p, const Coord& c, double delta) {
  Params out = p;
  Tensor& t = c.is_bias ? out[c.layer].bias : out[c.layer].weight;
  std::vector<double> data = std::move(t).release();
  const Shape shape = (c.is_bias ? p[c.layer].bias : p[c.layer].weight).shape();
  data[c.index] += delta;
  t = Tensor(shape, std::move(data));
  return out;
}

// Sign pattern of every ReLU pre-activation in a forward pass.
std::vector<bool> relu_mask(const ModelSpec& spec, const ForwardCache& cache) {
  std::vector<bool> mask;
  const auto& layers = spec.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto* act = std::get_if<Activation>(&layers[l]);
    if (act == nullptr || act->kind != ActivationKind::kRelu) continue;
    for (double z : cache.inputs[l].data()) mask.push_back(z > 0.0);
  }
  return mask;
}

}  // namespace

GradCheckResult grad_check(const ModelSpec& spec, const Params& params,
                           const LossSpec& loss, const Tensor& x_batch,
                           std::span<const std::size_t> labels,
                           const GradCheckOptions& options) {
  if (labels.empty()) throw InvalidArgument("grad_check needs a nonempty batch");
  const auto base = forward(spec, params, x_batch);
  const auto bl = batch_loss(loss, base.outputs, labels);
  const Params analytic = backward(spec, params, base.cache, bl.grad);
  const auto base_mask = relu_mask(spec, base.cache);

  std::vector<Coord> coords = all_coords(params);
  if (coords.size() > options.max_coords) {
    std::vector<std::size_t> idx(coords.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(options.seed);
    shuffle(idx, rng);
    idx.resize(options.max_coords);
    std::sort(idx.begin(), idx.end());
    std::vector<Coord> subset;
    subset.reserve(idx.size());
    for (auto i : idx) subset.push_back(coords[i]);
    coords = std::move(subset);
  }

  GradCheckResult result;
  bool first = true;
  for (const Coord& c : coords) {
    const auto plus = forward(spec, with_offset(params, c, options.step), x_batch);
    const auto minus = forward(spec, with_offset(params, c, -options.step), x_batch);
    if (relu_mask(spec, plus.cache) != base_mask ||
        relu_mask(spec, minus.cache) != base_mask) {
      ++result.coords_skipped;
      continue;
    }
    const double lp = batch_loss(loss, plus.outputs, labels).mean;
    const double lm = batch_loss(loss, minus.outputs, labels).mean;
    const double numeric = (lp - lm) / (2.0 * options.step);
    double ga = read(analytic, c);
    if (first) {
      ga += options.corrupt_analytic;
      first = false;
    }
    const double denom = std::max({1.0, std::abs(ga), std::abs(numeric)});
    result.max_rel_error = std::max(result.max_rel_error, std::abs(ga - numeric) / denom);
    ++result.coords_checked;
  }
  return result;
}

}  // namespace brier
