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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brier/data.hpp"
#include "brier/metrics.hpp"
#include "brier/nn.hpp"
#include "brier/training.hpp"

namespace brier {

enum class ProtocolSet { kP1, kP1P2 };

/// A multi-seed comparison of one cross-entropy arm against one or more
/// square-loss arms on a fixed model and dataset.
struct ExperimentSpec {
  std::string name = "experiment";
  /// Row labels for the comparison table.
  std::string model_label;
  std::string task_label;

  std::shared_ptr<const Dataset> train;
  std::shared_ptr<const Dataset> val;
  std::shared_ptr<const Dataset> test;
  ModelSpec model;

  /// One base config per loss. Its protocol must be EarlyStop; the seed
  /// field is overwritten per run.
  std::vector<TrainConfig> arms;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  ProtocolSet protocols = ProtocolSet::kP1P2;
  EpochSelection selection = EpochSelection::kBestEpoch;
  EvalOptions eval;
  /// Concurrent runs; 0 means one per hardware thread.
  std::size_t jobs = 1;

  /// Throws InvalidArgument on a malformed spec.
  void validate() const;
};

/// One (loss, protocol, seed) training run and its test metrics.
struct Cell {
  std::string loss;      // canonical loss text
  std::string protocol;  // "p1" or "p2"
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RunRecord record;  // record.test holds the test metrics when ok
  /// Hex digest of the initial parameters (identical across losses per seed).
  std::string init_digest;

  std::string id() const;
};

enum class MetricDirection { kHigherIsBetter, kLowerIsBetter };

/// Metric names carried by a cell: "accuracy", "error_rate", "top<k>", "f1".
std::vector<std::string> metric_names(std::span<const Cell> cells);
MetricDirection metric_direction(const std::string& metric);
std::optional<double> metric_value(const Cell& cell, const std::string& metric);

/// Per-seed difference oriented so that a positive value favours the square
/// loss: sq - ce for accuracy-type metrics, ce - sq for error rates.
double seed_delta(MetricDirection direction, double square, double cross_entropy);

struct MetricStats {
  double mean = 0.0;
  /// Sample standard deviation (divisor n - 1), 0 when n == 1.
  double std = 0.0;
  std::size_t n = 0;
};

/// Throws InvalidArgument on an empty input.
MetricStats summarize(std::span<const double> values);

struct GroupSummary {
  std::string loss;
  std::string protocol;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  /// Empty when every run of the group failed.
  std::map<std::string, MetricStats> metrics;
};

struct SeedDelta {
  std::string loss;
  std::string protocol;
  std::uint64_t seed = 0;
  std::string metric;
  double delta = 0.0;
};

struct DeltaSummary {
  std::string loss;
  std::string protocol;
  std::string metric;
  MetricStats stats;
};

struct Aggregate {
  std::vector<GroupSummary> groups;
  std::vector<SeedDelta> deltas;
  std::vector<DeltaSummary> delta_stats;

  const GroupSummary* find(const std::string& loss, const std::string& protocol) const;
};

/// Means, sample stds and paired deltas against the same-seed "ce"/"p1"
/// cell. Failed cells are counted but never enter a statistic.
Aggregate aggregate(std::span<const Cell> cells);

struct ComparisonReport {
  std::string name;
  std::string model_label;
  std::string task_label;
  EpochSelection selection = EpochSelection::kBestEpoch;
  std::vector<Cell> cells;
  Aggregate summary;

  const Cell* find(const std::string& loss, const std::string& protocol,
                   std::uint64_t seed) const;
  /// True if some group has no successful run.
  bool any_group_failed() const;
};

using CellCallback = std::function<void(const Cell&)>;

/// Trains every cell: per seed the cross-entropy and square arms under
/// early stopping, then (P1+P2) each square arm for the epochs selected by
/// the same-seed cross-entropy run. All runs of a seed start from the same
/// initial parameters. Evaluates on the test set and aggregates.
ComparisonReport run_experiment(const ExperimentSpec& spec,
                                const CellCallback& on_cell = {});

/// Hex digest of the raw bits of every parameter.
std::string params_digest(const Params& params);

}  // namespace brier
