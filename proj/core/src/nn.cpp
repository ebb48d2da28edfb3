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

#include "brier/nn.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "brier/error.hpp"
#include "brier/random.hpp"

namespace brier {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// x [B x in] * W^T + b -> [B x out]
Tensor affine(const Tensor& x, const LinearParams& p) {
  const Tensor z = matmul(x, transpose(p.weight));
  const std::size_t rows = z.rows();
  const std::size_t cols = z.cols();
  std::vector<double> out = Tensor(z).release();
  const auto b = p.bias.data();
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = out.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += b[c];
  }
  return Tensor({rows, cols}, std::move(out));
}

Tensor apply(ActivationKind kind, const Tensor& x) {
  return kind == ActivationKind::kRelu ? relu(x) : brier::tanh(x);
}

}  // namespace

ModelSpec::ModelSpec(std::vector<LayerSpec> layers, std::size_t output_dim)
    : layers_(std::move(layers)), output_dim_(output_dim) {
  if (layers_.empty()) throw InvalidArgument("model has no layers");
  if (output_dim_ == 0) throw InvalidArgument("model output_dim must be >= 1");
  std::size_t width = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (const auto* lin = std::get_if<Linear>(&layers_[i])) {
      if (lin->in == 0 || lin->out == 0) {
        throw InvalidArgument("layer " + std::to_string(i) +
                              ": linear dimensions must be positive");
      }
      if (num_linear_ == 0) {
        input_dim_ = lin->in;
      } else if (lin->in != width) {
        throw InvalidArgument("layer " + std::to_string(i) + ": linear input " +
                              std::to_string(lin->in) +
                              " does not match previous width " +
                              std::to_string(width));
      }
      width = lin->out;
      ++num_linear_;
    } else if (num_linear_ == 0) {
      throw InvalidArgument("layer " + std::to_string(i) +
                            ": activation before the first linear layer");
    }
  }
  const auto* last = std::get_if<Linear>(&layers_.back());
  if (last == nullptr) {
    throw InvalidArgument("last layer must be linear (the model emits raw scores)");
  }
  if (last->out != output_dim_) {
    throw InvalidArgument("last linear layer has " + std::to_string(last->out) +
                          " outputs, expected " + std::to_string(output_dim_));
  }
  fingerprint_ = fnv1a_hex(describe());
}

ModelSpec ModelSpec::mlp(const std::vector<std::size_t>& widths, ActivationKind act) {
  if (widths.size() < 2) throw InvalidArgument("mlp needs at least two widths");
  std::vector<LayerSpec> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    if (i > 0) layers.emplace_back(Activation{act});
    layers.emplace_back(Linear{widths[i], widths[i + 1]});
  }
  return ModelSpec(std::move(layers), widths.back());
}

std::size_t ModelSpec::num_params() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    if (const auto* lin = std::get_if<Linear>(&layer)) n += lin->out * (lin->in + 1);
  }
  return n;
}

std::string ModelSpec::describe() const {
  std::string out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (i) out += "|";
    out += std::visit(
        Overloaded{[](const Linear& l) {
                     return "linear(" + std::to_string(l.in) + "," +
                            std::to_string(l.out) + ")";
                   },
                   [](const Activation& a) -> std::string {
                     return a.kind == ActivationKind::kRelu ? "relu" : "tanh";
                   }},
        layers_[i]);
  }
  return out;
}

std::size_t count_params(const Params& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.weight.size() + p.bias.size();
  return n;
}

Params init_params(const ModelSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  Params params;
  params.reserve(spec.num_linear());
  for (const auto& layer : spec.layers()) {
    const auto* lin = std::get_if<Linear>(&layer);
    if (lin == nullptr) continue;
    const double bound = std::sqrt(6.0 / static_cast<double>(lin->in + lin->out));
    std::vector<double> w(lin->out * lin->in);
    for (double& v : w) v = rng.uniform(-bound, bound);
    params.push_back({Tensor({lin->out, lin->in}, std::move(w)),
                      Tensor::zeros({lin->out})});
  }
  return params;
}

void check_params(const ModelSpec& spec, const Params& params) {
  if (params.size() != spec.num_linear()) {
    throw ShapeError("params hold " + std::to_string(params.size()) +
                     " linear layers, model has " + std::to_string(spec.num_linear()));
  }
  std::size_t idx = 0;
  for (const auto& layer : spec.layers()) {
    const auto* lin = std::get_if<Linear>(&layer);
    if (lin == nullptr) continue;
    const auto& p = params[idx];
    if (p.weight.shape() != Shape{lin->out, lin->in} ||
        p.bias.shape() != Shape{lin->out}) {
      throw ShapeError("params for linear layer " + std::to_string(idx) +
                       " have shapes " + to_string(p.weight.shape()) + "/" +
                       to_string(p.bias.shape()));
    }
    ++idx;
  }
}

namespace {

void check_input(const ModelSpec& spec, const Tensor& x) {
  if (x.rank() != 2 || x.cols() != spec.input_dim()) {
    throw ShapeError("model input must be [B x " + std::to_string(spec.input_dim()) +
                     "], got " + to_string(x.shape()));
  }
}

}  // namespace

ForwardResult forward(const ModelSpec& spec, const Params& params,
                      const Tensor& x_batch) {
  check_params(spec, params);
  check_input(spec, x_batch);
  ForwardCache cache;
  cache.fingerprint = spec.fingerprint();
  cache.batch = x_batch.rows();
  cache.inputs.reserve(spec.layers().size() + 1);
  cache.inputs.push_back(x_batch);
  std::size_t lin_idx = 0;
  for (const auto& layer : spec.layers()) {
    const Tensor& in = cache.inputs.back();
    if (std::holds_alternative<Linear>(layer)) {
      cache.inputs.push_back(affine(in, params[lin_idx++]));
    } else {
      cache.inputs.push_back(apply(std::get<Activation>(layer).kind, in));
    }
  }
  Tensor outputs = cache.inputs.back();
  return {std::move(outputs), std::move(cache)};
}

Tensor predict(const ModelSpec& spec, const Params& params, const Tensor& x_batch) {
  check_params(spec, params);
  check_input(spec, x_batch);
  Tensor h = x_batch;
  std::size_t lin_idx = 0;
  for (const auto& layer : spec.layers()) {
    if (std::holds_alternative<Linear>(layer)) {
      h = affine(h, params[lin_idx++]);
    } else {
      h = apply(std::get<Activation>(layer).kind, h);
    }
  }
  return h;
}

Params backward(const ModelSpec& spec, const Params& params,
                const ForwardCache& cache, const Tensor& d_outputs) {
  check_params(spec, params);
  const auto& layers = spec.layers();
  if (cache.fingerprint != spec.fingerprint() ||
      cache.inputs.size() != layers.size() + 1) {
    throw ShapeError("forward cache does not belong to this model");
  }
  if (d_outputs.shape() != cache.inputs.back().shape()) {
    throw ShapeError("upstream gradient shape " + to_string(d_outputs.shape()) +
                     " does not match outputs " +
                     to_string(cache.inputs.back().shape()));
  }

  Params grads(params.size());
  Tensor g = d_outputs;
  std::size_t lin_idx = params.size();
  for (std::size_t l = layers.size(); l-- > 0;) {
    const Tensor& in = cache.inputs[l];
    if (std::holds_alternative<Linear>(layers[l])) {
      const LinearParams& p = params[--lin_idx];
      // dW = g^T x, accumulated over the batch in row order. Computing it as
      // (x^T g)^T lets matmul skip the zeros of sparse inputs.
      Tensor dw = transpose(matmul(transpose(in), g));
      const std::size_t rows = g.rows();
      const std::size_t cols = g.cols();
      std::vector<double> db(cols, 0.0);
      const auto gd = g.data();
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) db[c] += gd[r * cols + c];
      }
      grads[lin_idx] = {std::move(dw), Tensor({cols}, std::move(db))};
      if (l > 0) g = matmul(g, p.weight);
    } else {
      const Tensor& out = cache.inputs[l + 1];
      const auto gd = g.data();
      const auto z = in.data();
      const auto y = out.data();
      std::vector<double> next(g.size());
      if (std::get<Activation>(layers[l]).kind == ActivationKind::kRelu) {
        // Subgradient 0 at z == 0.
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = z[i] > 0.0 ? gd[i] : 0.0;
      } else {
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = gd[i] * (1.0 - y[i] * y[i]);
      }
      g = Tensor(g.shape(), std::move(next));
    }
  }
  return grads;
}

}  // namespace brier
