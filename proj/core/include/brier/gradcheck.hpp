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
#include <span>

#include "brier/losses.hpp"
#include "brier/nn.hpp"

namespace brier {

struct GradCheckOptions {
  double step = 1e-5;
  /// Above this many parameters a seeded random subset of this size is
  /// checked instead of every coordinate.
  std::size_t max_coords = 1000;
  std::uint64_t seed = 0;
  /// Test hook: added to the first analytic gradient coordinate.
  double corrupt_analytic = 0.0;
};

struct GradCheckResult {
  /// max |g_a - g_n| / max(1, |g_a|, |g_n|) over the checked coordinates.
  double max_rel_error = 0.0;
  std::size_t coords_checked = 0;
  /// Coordinates whose +/- step moved a ReLU pre-activation across zero.
  /// The loss is not differentiable there, so they are left out.
  std::size_t coords_skipped = 0;
};

/// Compares backward() against central finite differences of the mean
/// batch loss.
GradCheckResult grad_check(const ModelSpec& spec, const Params& params,
                           const LossSpec& loss, const Tensor& x_batch,
                           std::span<const std::size_t> labels,
                           const GradCheckOptions& options = {});

}  // namespace brier
