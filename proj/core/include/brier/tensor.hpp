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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace brier {

using Shape = std::vector<std::size_t>;

std::string to_string(const Shape& shape);

/// Dense row-major array of doubles.
///
/// A Tensor is an immutable value: every operation returns a new tensor.
/// Construction checks that the data length matches the shape and that all
/// entries are finite, so no public operation can hand back NaN or Inf.
class Tensor {
 public:
  /// Empty rank-1 tensor of length zero.
  Tensor() : shape_{0} {}

  Tensor(Shape shape, std::vector<double> data);

  static Tensor zeros(Shape shape);
  static Tensor filled(Shape shape, double value);
  static Tensor vector(std::initializer_list<double> values);
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor identity(std::size_t n);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> data() const noexcept { return data_; }
  double operator[](std::size_t i) const { return data_[i]; }
  double at(std::size_t i) const;
  double at(std::size_t row, std::size_t col) const;

  /// Row `r` of a rank-2 tensor.
  std::span<const double> row(std::size_t r) const;

  /// Moves the storage out, leaving an empty tensor behind.
  std::vector<double> release() &&;

  friend bool operator==(const Tensor& a, const Tensor& b) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

enum class EwiseOp { kAdd, kSub, kMul, kScale, kRelu, kTanh };

/// Unary element-wise op (relu, tanh).
Tensor ewise(EwiseOp op, const Tensor& a);
/// Binary element-wise op on identical shapes (add, sub, mul).
Tensor ewise(EwiseOp op, const Tensor& a, const Tensor& b);
/// Tensor-scalar op (add, sub, mul, scale).
Tensor ewise(EwiseOp op, const Tensor& a, double s);

inline Tensor add(const Tensor& a, const Tensor& b) { return ewise(EwiseOp::kAdd, a, b); }
inline Tensor sub(const Tensor& a, const Tensor& b) { return ewise(EwiseOp::kSub, a, b); }
inline Tensor mul(const Tensor& a, const Tensor& b) { return ewise(EwiseOp::kMul, a, b); }
inline Tensor scale(const Tensor& a, double s) { return ewise(EwiseOp::kScale, a, s); }
inline Tensor relu(const Tensor& a) { return ewise(EwiseOp::kRelu, a); }
inline Tensor tanh(const Tensor& a) { return ewise(EwiseOp::kTanh, a); }

/// Matrix product of [m x k] and [k x n]. Each output entry is accumulated
/// in increasing k order starting from 0.0.
Tensor matmul(const Tensor& a, const Tensor& b);

Tensor transpose(const Tensor& a);

/// Softmax of a rank-1 tensor, max-shifted.
Tensor softmax(const Tensor& logits);

/// log(sum(exp(v))) with max shift. v must be nonempty.
double log_sum_exp(std::span<const double> v);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> v);
std::size_t argmax(const Tensor& v);

}  // namespace brier
