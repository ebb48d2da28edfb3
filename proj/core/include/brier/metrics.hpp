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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "brier/data.hpp"
#include "brier/nn.hpp"

namespace brier {

struct EvalResult {
  double accuracy = 0.0;
  /// Classification error rate, 1 - accuracy.
  double error_rate = 0.0;
  std::map<std::size_t, double> topk;
  /// Binary F1 with class 1 positive; present only for two-class data.
  std::optional<double> f1;
  std::size_t n_samples = 0;
};

enum class F1Mode {
  kIfBinary,  // compute when C == 2, otherwise leave empty
  kRequired,  // InvalidArgument when C != 2
  kOff,
};

struct EvalOptions {
  std::vector<std::size_t> ks = {1};
  F1Mode f1 = F1Mode::kIfBinary;
  std::size_t positive_class = 1;
  /// Rows per forward pass.
  std::size_t chunk = 1000;
};

/// True class ranks below k when outputs are ordered by value, ties broken
/// toward the lower index.
bool in_top_k(std::span<const double> outputs, std::size_t label, std::size_t k);

/// Metrics from a precomputed [N x C] score matrix.
EvalResult evaluate_outputs(const Tensor& outputs, std::span<const std::size_t> labels,
                            const EvalOptions& options = {});

/// Runs the model over `dataset` and scores the raw outputs (argmax
/// prediction, no softmax).
EvalResult evaluate(const ModelSpec& spec, const Params& params, const Dataset& dataset,
                    const EvalOptions& options = {});

/// Fraction of rows whose argmax equals the label.
double accuracy(const ModelSpec& spec, const Params& params, const Dataset& dataset,
                std::size_t chunk = 1000);

/// 2PR/(P+R) with `positive` as the positive class; 0 when P+R == 0.
/// Throws InvalidArgument on labels or predictions outside {0, 1}.
double f1_binary(std::span<const std::size_t> predictions,
                 std::span<const std::size_t> labels, std::size_t positive = 1);

}  // namespace brier
