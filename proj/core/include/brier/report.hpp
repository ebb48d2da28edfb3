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

#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "brier/harness.hpp"
#include "brier/training.hpp"

namespace brier {

enum class ReportFormat { kCsv, kMarkdown, kSvg };

/// Parses "csv", "md" or "svg".
ReportFormat parse_report_format(const std::string& text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// epoch,train_loss,train_acc,val_acc; one row per epoch run.
void write_curve_csv(std::ostream& out, std::span<const EpochStats> history);
std::vector<EpochStats> read_curve_csv(std::istream& in);

/// runs.csv: one row per cell with status, epoch counts and test metrics.
/// `metrics` fixes the metric columns (see metric_names()).
void write_runs_csv(std::ostream& out, std::span<const Cell> cells,
                    const std::vector<std::string>& metrics);
/// Inverse of write_runs_csv. Histories are not part of runs.csv; the
/// returned cells have empty record.history.
std::vector<Cell> read_runs_csv(std::istream& in);

/// Comparison table in the layout "train with square loss / train with
/// cross-entropy / square loss w/ same epochs as CE", plus per-seed detail.
std::string render_markdown(const ComparisonReport& report);

/// Bar chart of per-seed deltas (one bar per seed per square-loss group)
/// with the mean and a +/- 1 std error bar.
std::string render_delta_svg(const ComparisonReport& report,
                             const std::string& metric = "accuracy");

/// Validation accuracy against epoch for every successful cell.
std::string render_curves_svg(const ComparisonReport& report);

/// Writes the selected formats into `dir` (created if needed):
///   csv -> runs.csv and curves_<cell>.csv
///   md  -> <name>.md
///   svg -> <name>_deltas.svg and <name>_curves.svg
/// Returns the paths written. Throws IoError on an unwritable path.
std::vector<std::filesystem::path> emit_report(const ComparisonReport& report,
                                               const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats);

}  // namespace brier
