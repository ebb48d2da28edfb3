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
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "brier/tensor.hpp"

namespace brier {

struct Linear {
  std::size_t in = 0;
  std::size_t out = 0;
  friend bool operator==(const Linear&, const Linear&) = default;
};

enum class ActivationKind { kRelu, kTanh };

struct Activation {
  ActivationKind kind = ActivationKind::kRelu;
  friend bool operator==(const Activation&, const Activation&) = default;
};

using LayerSpec = std::variant<Linear, Activation>;

/// Feedforward architecture. The last layer is always Linear and the model
/// emits raw scores; there is no softmax layer, cross-entropy applies its
/// own inside the loss.
class ModelSpec {
 public:
  /// Throws InvalidArgument when the layers do not chain or do not end in a
  /// Linear of width `output_dim`.
  ModelSpec(std::vector<LayerSpec> layers, std::size_t output_dim);

  /// widths = {d, h1, ..., C}; `act` between consecutive Linear layers.
  static ModelSpec mlp(const std::vector<std::size_t>& widths,
                       ActivationKind act = ActivationKind::kRelu);

  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return output_dim_; }
  std::size_t num_linear() const noexcept { return num_linear_; }
  std::size_t num_params() const noexcept;

  /// Canonical text, e.g. "linear(784,256)|relu|linear(256,10)".
  std::string describe() const;
  /// 64-bit FNV-1a of describe(), hex encoded.
  const std::string& fingerprint() const noexcept { return fingerprint_; }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  std::vector<LayerSpec> layers_;
  std::size_t input_dim_ = 0;
  std::size_t output_dim_ = 0;
  std::size_t num_linear_ = 0;
  std::string fingerprint_;
};

/// Weight [out x in] and bias [out] of one Linear layer.
struct LinearParams {
  Tensor weight;
  Tensor bias;
  friend bool operator==(const LinearParams&, const LinearParams&) = default;
};

/// One LinearParams per Linear layer, in layer order. Gradients use the
/// same type.
using Params = std::vector<LinearParams>;

std::size_t count_params(const Params& params);

/// Uniform(-a, a) weights with a = sqrt(6 / (in + out)), zero biases.
Params init_params(const ModelSpec& spec, std::uint64_t seed);

/// Throws ShapeError if `params` does not fit `spec`.
void check_params(const ModelSpec& spec, const Params& params);

/// Per-layer values kept by forward() for backward().
struct ForwardCache {
  std::string fingerprint;
  std::size_t batch = 0;
  /// inputs[i] is the input of layer i; inputs.back() is the model output.
  std::vector<Tensor> inputs;
};

struct ForwardResult {
  Tensor outputs;  // [B x C]
  ForwardCache cache;
};

ForwardResult forward(const ModelSpec& spec, const Params& params,
                      const Tensor& x_batch);

/// Raw scores only; skips building the cache.
Tensor predict(const ModelSpec& spec, const Params& params, const Tensor& x_batch);

/// Gradients of the batch objective given dL/d(outputs). Any 1/B factor is
/// expected to already be inside `d_outputs`.
Params backward(const ModelSpec& spec, const Params& params,
                const ForwardCache& cache, const Tensor& d_outputs);

/// Binary checkpoint: spec fingerprint followed by every weight and bias in
/// layer order as little-endian IEEE-754 doubles. Round trips bit-exactly.
void save_params(std::ostream& out, const ModelSpec& spec, const Params& params);
void save_params(const std::string& path, const ModelSpec& spec,
                 const Params& params);
Params load_params(std::istream& in, const ModelSpec& spec);
Params load_params(const std::string& path, const ModelSpec& spec);

}  // namespace brier
