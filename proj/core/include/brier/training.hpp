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
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "brier/data.hpp"
#include "brier/losses.hpp"
#include "brier/metrics.hpp"
#include "brier/nn.hpp"

namespace brier {

/// Protocol 1: stop once validation accuracy has not strictly improved for
/// `patience` consecutive epochs and keep the best-epoch checkpoint.
struct EarlyStop {
  std::size_t patience = 5;
  friend bool operator==(const EarlyStop&, const EarlyStop&) = default;
};

/// Protocol 2 (and plain fixed-length training): run exactly `epochs`.
struct FixedEpochs {
  std::size_t epochs = 1;
  friend bool operator==(const FixedEpochs&, const FixedEpochs&) = default;
};

using Protocol = std::variant<EarlyStop, FixedEpochs>;

struct TrainConfig {
  LossSpec loss;
  double learning_rate = 0.1;
  double momentum = 0.0;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  Protocol protocol = EarlyStop{};
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on any out-of-range field.
  void validate() const;
  /// Stable text of every field; identical configs give identical text.
  std::string fingerprint() const;
};

/// 0.1 for cross-entropy, 0.3 for the square loss family.
double default_learning_rate(const LossSpec& loss);

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  /// NaN when the run has no validation set.
  double val_accuracy = std::numeric_limits<double>::quiet_NaN();
};

enum class ProtocolKind { kEarlyStop, kFixedEpochs };

struct RunRecord {
  std::vector<EpochStats> history;
  std::size_t selected_epoch = 0;
  std::size_t total_epochs_run = 0;
  ProtocolKind protocol = ProtocolKind::kEarlyStop;
  std::uint64_t seed = 0;
  std::string config_fingerprint;
  /// Validation accuracy of the returned parameters (NaN without validation).
  double selected_val_accuracy = std::numeric_limits<double>::quiet_NaN();
  /// Filled in by the harness.
  std::optional<EvalResult> test;
};

/// Classical momentum: v' = momentum * v + g, params' = params - lr * v'.
/// Throws DivergenceError (epoch 0) if any updated value is not finite.
struct SgdState {
  Params params;
  Params velocity;
};
SgdState sgd_step(const Params& params, const Params& grads, const Params& velocity,
                  double learning_rate, double momentum);

/// Zero tensors shaped like `params`.
Params zeros_like(const Params& params);

class EarlyStopper {
 public:
  enum class Decision { kContinue, kStop };

  explicit EarlyStopper(std::size_t patience);

  /// Feed the validation accuracy of the next epoch.
  Decision update(double val_accuracy);

  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t best_epoch() const noexcept { return best_epoch_; }
  double best() const noexcept { return best_; }
  std::size_t since_improvement() const noexcept { return counter_; }
  /// True if the last update() improved the best value.
  bool improved() const noexcept { return improved_; }

 private:
  std::size_t patience_;
  std::size_t epoch_ = 0;
  std::size_t best_epoch_ = 0;
  std::size_t counter_ = 0;
  double best_ = -std::numeric_limits<double>::infinity();
  bool improved_ = false;
};

struct TrainResult {
  Params params;
  RunRecord record;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// One training run. `val` may be null only for FixedEpochs. Initial weights
/// come from init_params(model, config.seed) and batch order from
/// (config.seed, epoch), so the result is a pure function of the inputs.
/// Throws DivergenceError on a non-finite loss or update.
TrainResult train_run(const ModelSpec& model, const Dataset& train, const Dataset* val,
                      const TrainConfig& config, const EpochCallback& on_epoch = {});

/// How "number of epochs selected" is read off an early-stopping run.
enum class EpochSelection {
  kBestEpoch,    // the epoch whose checkpoint was kept
  kTotalEpochs,  // every epoch run, including the patience tail
};

/// Epoch budget a matched fixed-epoch run should use.
/// Throws InvalidArgument unless `record` comes from an EarlyStop run.
std::size_t selected_epochs(const RunRecord& record,
                            EpochSelection rule = EpochSelection::kBestEpoch);

}  // namespace brier
