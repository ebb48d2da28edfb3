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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brier/data.hpp"
#include "brier/harness.hpp"
#include "brier/nn.hpp"
#include "brier/training.hpp"

namespace brier {

enum class DatasetKind { kMnist, kCsv, kSynthetic };

struct DatasetConfig {
  DatasetKind kind = DatasetKind::kSynthetic;
  // mnist
  std::filesystem::path train_images, train_labels, test_images, test_labels;
  // csv
  std::filesystem::path train_csv, test_csv;
  std::string label_column = "label";
  std::size_t num_classes = 0;
  // synthetic; the test set is an independent draw of test_per_class samples
  GaussianSpec synthetic;
  std::size_t test_per_class = 0;

  SplitSpec split;
};

/// A validated experiment description loaded from a JSON config file.
struct ExperimentConfig {
  std::string name;
  std::string model_label;
  std::string task_label;
  DatasetConfig dataset;
  ModelSpec model = ModelSpec::mlp({1, 1});
  std::vector<TrainConfig> arms;
  std::vector<std::uint64_t> seeds;
  ProtocolSet protocols = ProtocolSet::kP1P2;
  EpochSelection selection = EpochSelection::kBestEpoch;
  std::vector<std::size_t> ks = {1};
  std::size_t jobs = 1;
  std::string output_dir;

  /// Arm whose loss equals `loss`, if any.
  const TrainConfig* find_arm(const LossSpec& loss) const;
};

/// Parses and validates a config. Relative paths resolve against
/// `base_dir`. Throws ConfigError naming the offending field.
ExperimentConfig parse_config(std::string_view json_text,
                              const std::filesystem::path& base_dir = {});

/// Reads `path` and parses it with the file's directory as base.
ExperimentConfig load_config(const std::filesystem::path& path);

struct LoadedData {
  std::shared_ptr<const Dataset> train;
  std::shared_ptr<const Dataset> val;
  std::shared_ptr<const Dataset> test;
};

/// Loads, splits and checks the data against the model.
/// Throws ConfigError when the data do not fit the model.
LoadedData load_data(const ExperimentConfig& config);

ExperimentSpec make_experiment(const ExperimentConfig& config, const LoadedData& data);

}  // namespace brier
