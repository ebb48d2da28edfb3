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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brier/tensor.hpp"

namespace brier {

/// Labeled examples: features [N x d], N labels in [0, C).
struct Dataset {
  std::string name;
  Tensor features;
  std::vector<std::size_t> labels;
  std::size_t num_classes = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const { return features.cols(); }

  /// Throws DataError if any invariant fails.
  void validate() const;

  /// Rows `indices` in the given order.
  Dataset subset(std::span<const std::size_t> indices, std::string name) const;
  /// Feature rows `indices` packed into a [n x d] tensor.
  Tensor gather(std::span<const std::size_t> indices) const;
};

/// Parses an IDX image/label file pair (big-endian, magic 2051 / 2049).
/// Pixels are scaled by 1/255; each image becomes one row of rows*cols values.
Dataset load_mnist(const std::string& images_path, const std::string& labels_path);

/// Header row required. `label_column` names the integral class column; all
/// other columns become features in header order.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 std::size_t num_classes);

struct GaussianSpec {
  std::size_t num_classes = 2;
  std::size_t dim = 2;
  std::size_t per_class = 100;
  double separation = 1.0;
  double noise = 1.0;
  std::uint64_t seed = 0;
};

/// Class c has mean separation * e_(c mod dim); samples are mean + noise * z
/// with z standard normal. Sample i belongs to class i mod C.
Dataset synth_gaussians(const GaussianSpec& spec);

enum class SplitPolicy { kTail, kShuffled };

struct SplitSpec {
  double val_fraction = 0.0;
  /// Exact validation size; overrides val_fraction when set.
  std::optional<std::size_t> val_count;
  std::uint64_t seed = 0;
  SplitPolicy policy = SplitPolicy::kTail;
};

/// Number of validation rows `spec` carves out of `n`.
std::size_t validation_rows(std::size_t n, const SplitSpec& spec);

/// (train, val). Tail takes the last rows as validation; shuffled applies a
/// seeded permutation first. Throws InvalidArgument if either side is empty.
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec);

/// Epoch-wise minibatch order: a fresh permutation derived from
/// (seed, epoch), cut into slices of batch_size. The last slice may be short.
class BatchPlan {
 public:
  BatchPlan(std::size_t n, std::size_t batch_size, std::uint64_t seed,
            std::uint64_t epoch);

  std::size_t num_batches() const noexcept { return num_batches_; }
  std::span<const std::size_t> batch(std::size_t i) const;
  std::span<const std::size_t> order() const noexcept { return order_; }

 private:
  std::vector<std::size_t> order_;
  std::size_t batch_size_;
  std::size_t num_batches_;
};

}  // namespace brier
