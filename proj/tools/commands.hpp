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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace brier::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kRunFailure = 1,
  kConfigError = 2,
};

struct TrainOptions {
  std::string config_path;
  std::optional<std::string> loss;
  std::optional<std::uint64_t> seed;
  std::string protocol = "p1";  // p1 | p2
  /// Protocol-2 epoch budget; when absent the same-seed cross-entropy
  /// protocol-1 run is trained first to obtain it.
  std::optional<std::size_t> epochs;
  std::optional<double> lr;
  std::optional<std::string> out;
  bool quiet = false;
};

struct CompareOptions {
  std::string config_path;
  std::optional<std::size_t> jobs;
  std::optional<std::string> out;
  std::vector<std::string> formats;  // empty = csv, md and svg
  std::optional<std::vector<std::uint64_t>> seeds;
  bool quiet = false;
};

struct GradcheckOptions {
  std::size_t classes = 10;
  std::string loss = "ce";
  std::uint64_t seed = 0;
  /// Test hook: perturbs one analytic gradient entry by this amount.
  double corrupt = 0.0;
};

/// Output directory precedence: flag, config, $BRIER_OUT_DIR, "brier_out".
std::string resolve_output_dir(const std::optional<std::string>& flag,
                               const std::string& from_config);

int cmd_train(const TrainOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err);
int cmd_gradcheck(const GradcheckOptions& opts, std::ostream& out, std::ostream& err);
int cmd_rescale(std::size_t classes, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a command.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace brier::cli
