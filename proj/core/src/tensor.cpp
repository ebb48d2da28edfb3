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

#include "brier/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>

#include "brier/error.hpp"
#include "brier/instrument.hpp"

namespace brier {
namespace {

std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

void require_rank2(const Tensor& t, const char* what) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(what) + ": expected a matrix, got shape " +
                     to_string(t.shape()));
  }
}

}  // namespace

std::string to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty()) throw ShapeError("tensor shape must have rank >= 1");
  if (element_count(shape_) != data_.size()) {
    throw ShapeError("tensor shape " + to_string(shape_) + " needs " +
                     std::to_string(element_count(shape_)) + " entries, got " +
                     std::to_string(data_.size()));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw NonFiniteError("non-finite tensor entry at flat index " +
                           std::to_string(i));
    }
  }
}

Tensor Tensor::zeros(Shape shape) { return filled(std::move(shape), 0.0); }

Tensor Tensor::filled(Shape shape, double value) {
  const std::size_t n = element_count(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value));
}

Tensor Tensor::vector(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("ragged matrix literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(data));
}

Tensor Tensor::identity(std::size_t n) {
  std::vector<double> data(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) data[i * n + i] = 1.0;
  return Tensor({n, n}, std::move(data));
}

std::size_t Tensor::rows() const {
  require_rank2(*this, "rows");
  return shape_[0];
}

std::size_t Tensor::cols() const {
  require_rank2(*this, "cols");
  return shape_[1];
}

double Tensor::at(std::size_t i) const {
  if (i >= data_.size()) {
    throw ShapeError("index " + std::to_string(i) + " out of range for shape " +
                     to_string(shape_));
  }
  return data_[i];
}

double Tensor::at(std::size_t row, std::size_t col) const {
  require_rank2(*this, "at");
  if (row >= shape_[0] || col >= shape_[1]) {
    throw ShapeError("index (" + std::to_string(row) + "," + std::to_string(col) +
                     ") out of range for shape " + to_string(shape_));
  }
  return data_[row * shape_[1] + col];
}

std::span<const double> Tensor::row(std::size_t r) const {
  require_rank2(*this, "row");
  if (r >= shape_[0]) throw ShapeError("row index out of range");
  return std::span<const double>(data_).subspan(r * shape_[1], shape_[1]);
}

std::vector<double> Tensor::release() && {
  shape_ = {0};
  return std::move(data_);
}

Tensor ewise(EwiseOp op, const Tensor& a) {
  std::vector<double> out(a.size());
  const auto in = a.data();
  switch (op) {
    case EwiseOp::kRelu:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
      break;
    case EwiseOp::kTanh:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(in[i]);
      break;
    default:
      throw InvalidArgument("ewise: operation needs a second operand");
  }
  return Tensor(a.shape(), std::move(out));
}

Tensor ewise(EwiseOp op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("ewise: shape mismatch " + to_string(a.shape()) + " vs " +
                     to_string(b.shape()));
  }
  std::vector<double> out(a.size());
  const auto x = a.data();
  const auto y = b.data();
  switch (op) {
    case EwiseOp::kAdd:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + y[i];
      break;
    case EwiseOp::kSub:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - y[i];
      break;
    case EwiseOp::kMul:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
      break;
    default:
      throw InvalidArgument("ewise: operation does not take a tensor operand");
  }
  return Tensor(a.shape(), std::move(out));
}

Tensor ewise(EwiseOp op, const Tensor& a, double s) {
  std::vector<double> out(a.size());
  const auto x = a.data();
  switch (op) {
    case EwiseOp::kAdd:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + s;
      break;
    case EwiseOp::kSub:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - s;
      break;
    case EwiseOp::kMul:
    case EwiseOp::kScale:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * s;
      break;
    default:
      throw InvalidArgument("ewise: operation does not take a scalar operand");
  }
  return Tensor(a.shape(), std::move(out));
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  const std::size_t n = b.cols();
  if (b.rows() != k) {
    throw ShapeError("matmul: inner dimensions differ, " + to_string(a.shape()) +
                     " x " + to_string(b.shape()));
  }
  std::vector<double> c(m * n, 0.0);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  // i-k-j order adds a[i,p]*b[p,j] to c[i,j] for p = 0, 1, ... which is the
  // same sequence of roundings as the textbook i-j-k loop. A zero a[i,p]
  // contributes a signed zero to a sum that can never be -0.0, so skipping
  // it leaves every bit unchanged.
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c.data() + i * n;
    const double* arow = pa + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = arow[p];
      if (aip == 0.0) continue;
      const double* brow = pb + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return Tensor({m, n}, std::move(c));
}

Tensor transpose(const Tensor& a) {
  require_rank2(a, "transpose");
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  std::vector<double> out(r * c);
  const auto in = a.data();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = in[i * c + j];
  }
  return Tensor({c, r}, std::move(out));
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) throw ShapeError("log_sum_exp: empty input");
  const double m = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - m);
  return m + std::log(sum);
}

Tensor softmax(const Tensor& logits) {
  if (logits.rank() != 1 || logits.size() == 0) {
    throw ShapeError("softmax: expected a nonempty vector, got shape " +
                     to_string(logits.shape()));
  }
  ++counters().softmax_rows;
  const auto v = logits.data();
  const double m = *std::max_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - m);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return Tensor(logits.shape(), std::move(out));
}

std::size_t argmax(std::span<const double> v) {
  if (v.empty()) throw ShapeError("argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

std::size_t argmax(const Tensor& v) { return argmax(v.data()); }

Counters& counters() noexcept {
  thread_local Counters c;
  return c;
}

void reset_counters() noexcept { counters() = Counters{}; }

}  // namespace brier
