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

#include <cstdint>

namespace brier {

/// Per-thread counters that let tests observe which numeric paths ran.
///
/// A training run is single-threaded, so a test can reset the counters,
/// run, and read back exactly what that run did.
struct Counters {
  /// Rows pushed through a softmax (stand-alone or inside cross-entropy).
  std::uint64_t softmax_rows = 0;
  /// Rows whose log-sum-exp was evaluated by the fused cross-entropy kernel.
  std::uint64_t fused_lse_rows = 0;
  /// Calls to the batched fused cross-entropy kernel.
  std::uint64_t fused_ce_batches = 0;
  /// Calls to the batched square-loss kernel.
  std::uint64_t square_batches = 0;
};

Counters& counters() noexcept;
void reset_counters() noexcept;

}  // namespace brier
