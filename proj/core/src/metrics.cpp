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

#include "brier/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "brier/error.hpp"

namespace brier {
namespace {

template <class Fn>
void for_each_chunk(const ModelSpec& spec, const Params& params, const Dataset& dataset,
                    std::size_t chunk, Fn&& fn) {
  if (dataset.num_classes != spec.output_dim()) {
    throw ShapeError("dataset has " + std::to_string(dataset.num_classes) +
                     " classes, model emits " + std::to_string(spec.output_dim()));
  }
  if (dataset.dim() != spec.input_dim()) {
    throw ShapeError("dataset has " + std::to_string(dataset.dim()) +
                     " features, model expects " + std::to_string(spec.input_dim()));
  }
  chunk = std::max<std::size_t>(chunk, 1);
  std::vector<std::size_t> idx;
  for (std::size_t begin = 0; begin < dataset.size(); begin += chunk) {
    const std::size_t end = std::min(dataset.size(), begin + chunk);
    idx.resize(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    fn(begin, predict(spec, params, dataset.gather(idx)));
  }
}

}  // namespace

bool in_top_k(std::span<const double> outputs, std::size_t label, std::size_t k) {
  const double target = outputs[label];
  std::size_t rank = 0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i] > target || (outputs[i] == target && i < label)) ++rank;
  }
  return rank < k;
}

EvalResult evaluate_outputs(const Tensor& outputs, std::span<const std::size_t> labels,
                            const EvalOptions& options) {
  if (outputs.rank() != 2 || outputs.rows() != labels.size() || labels.empty()) {
    throw ShapeError("evaluate: outputs " + to_string(outputs.shape()) + " vs " +
                     std::to_string(labels.size()) + " labels");
  }
  const std::size_t n = labels.size();
  const std::size_t classes = outputs.cols();
  for (std::size_t k : options.ks) {
    if (k == 0) throw InvalidArgument("top-k needs k >= 1");
  }
  if (options.f1 == F1Mode::kRequired && classes != 2) {
    throw InvalidArgument("F1 requested for " + std::to_string(classes) +
                          " classes; it is defined for binary tasks only");
  }

  std::vector<std::size_t> ks = options.ks;
  if (std::find(ks.begin(), ks.end(), 1) == ks.end()) ks.push_back(1);
  std::map<std::size_t, std::size_t> hits;
  for (auto k : ks) hits[k] = 0;
  std::vector<std::size_t> predictions(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = outputs.row(r);
    if (labels[r] >= classes) throw InvalidArgument("label out of range in evaluate");
    predictions[r] = argmax(row);
    for (auto& [k, count] : hits) count += in_top_k(row, labels[r], k) ? 1 : 0;
  }

  EvalResult result;
  result.n_samples = n;
  for (const auto& [k, count] : hits) {
    result.topk[k] = static_cast<double>(count) / static_cast<double>(n);
  }
  result.accuracy = result.topk.at(1);
  result.error_rate = 1.0 - result.accuracy;
  if (options.f1 != F1Mode::kOff && classes == 2) {
    result.f1 = f1_binary(predictions, labels, options.positive_class);
  }
  return result;
}

EvalResult evaluate(const ModelSpec& spec, const Params& params, const Dataset& dataset,
                    const EvalOptions& options) {
  std::vector<double> all;
  all.reserve(dataset.size() * spec.output_dim());
  for_each_chunk(spec, params, dataset, options.chunk,
                 [&](std::size_t, const Tensor& out) {
                   all.insert(all.end(), out.data().begin(), out.data().end());
                 });
  return evaluate_outputs(Tensor({dataset.size(), spec.output_dim()}, std::move(all)),
                          dataset.labels, options);
}

double accuracy(const ModelSpec& spec, const Params& params, const Dataset& dataset,
                std::size_t chunk) {
  std::size_t correct = 0;
  for_each_chunk(spec, params, dataset, chunk, [&](std::size_t begin, const Tensor& out) {
    for (std::size_t r = 0; r < out.rows(); ++r) {
      correct += argmax(out.row(r)) == dataset.labels[begin + r] ? 1 : 0;
    }
  });
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

double f1_binary(std::span<const std::size_t> predictions,
                 std::span<const std::size_t> labels, std::size_t positive) {
  if (predictions.size() != labels.size()) {
    throw ShapeError("f1_binary: predictions and labels differ in length");
  }
  if (positive > 1) throw InvalidArgument("f1_binary: positive class must be 0 or 1");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] > 1 || labels[i] > 1) {
      throw InvalidArgument("f1_binary: non-binary value at index " + std::to_string(i));
    }
    const bool pred_pos = predictions[i] == positive;
    const bool true_pos = labels[i] == positive;
    if (pred_pos && true_pos) ++tp;
    if (pred_pos && !true_pos) ++fp;
    if (!pred_pos && true_pos) ++fn;
  }
  const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace brier
