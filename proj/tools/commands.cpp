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

#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "brier/config.hpp"
#include "brier/error.hpp"
#include "brier/gradcheck.hpp"
#include "brier/harness.hpp"
#include "brier/losses.hpp"
#include "brier/random.hpp"
#include "brier/report.hpp"

namespace brier::cli {
namespace {

namespace fs = std::filesystem;

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * v);
  return buf;
}

std::string epoch_line(const EpochStats& s) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "epoch %3zu  train_loss %.6f  train_acc %6.2f%%  val_acc %6.2f%%",
                s.epoch, s.train_loss, 100.0 * s.train_accuracy, 100.0 * s.val_accuracy);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string resolve_output_dir(const std::optional<std::string>& flag,
                               const std::string& from_config) {
  if (flag) return *flag;
  if (!from_config.empty()) return from_config;
  if (const char* env = std::getenv("BRIER_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "brier_out";
}

int cmd_train(const TrainOptions& opts, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  TrainConfig tc;
  fs::path out_dir;
  LoadedData data;
  try {
    cfg = load_config(opts.config_path);
    LossSpec loss = cfg.arms.front().loss;
    if (opts.loss) {
      try {
        loss = LossSpec::parse(*opts.loss);
      } catch (const InvalidArgument& e) {
        throw ConfigError("--loss", e.what());
      }
    }
    if (const TrainConfig* arm = cfg.find_arm(loss)) {
      tc = *arm;
    } else {
      tc = cfg.arms.front();
      tc.loss = loss;
      tc.learning_rate = default_learning_rate(loss);
    }
    if (opts.lr) {
      if (!(*opts.lr > 0.0)) throw ConfigError("--lr", "must be > 0");
      tc.learning_rate = *opts.lr;
    }
    tc.seed = opts.seed.value_or(cfg.seeds.front());
    if (opts.protocol != "p1" && opts.protocol != "p2") {
      throw ConfigError("--protocol", "expected p1 or p2");
    }
    if (opts.epochs && opts.protocol != "p2") {
      throw ConfigError("--epochs", "only meaningful with --protocol p2");
    }
    if (opts.protocol == "p2" && !opts.epochs && !cfg.find_arm(LossSpec::cross_entropy())) {
      throw ConfigError("--protocol", "p2 needs --epochs or a \"ce\" training block");
    }
    if (opts.epochs) {
      if (*opts.epochs == 0) throw ConfigError("--epochs", "must be >= 1");
      tc.protocol = FixedEpochs{*opts.epochs};
      tc.max_epochs = std::max(tc.max_epochs, *opts.epochs);
    }
    out_dir = resolve_output_dir(opts.out, cfg.output_dir);
    data = load_data(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (opts.protocol == "p2" && !opts.epochs) {
      TrainConfig ce = *cfg.find_arm(LossSpec::cross_entropy());
      ce.seed = tc.seed;
      if (!opts.quiet) out << "selecting epochs with a cross-entropy p1 run, seed " << tc.seed << "\n";
      const auto ce_run = train_run(cfg.model, *data.train, data.val.get(), ce);
      const std::size_t epochs = selected_epochs(ce_run.record, cfg.selection);
      if (!opts.quiet) out << "cross-entropy selected " << epochs << " epochs\n";
      tc.protocol = FixedEpochs{epochs};
      tc.max_epochs = std::max(tc.max_epochs, epochs);
    }

    Cell cell{.loss = tc.loss.to_string(), .protocol = opts.protocol, .seed = tc.seed};
    const Params init = init_params(cfg.model, tc.seed);
    cell.init_digest = params_digest(init);
    if (!opts.quiet) {
      out << "training " << cell.loss << " (" << opts.protocol << ", seed " << tc.seed
          << ", lr " << format_double(tc.learning_rate) << ") on " << data.train->size()
          << " samples\n";
    }
    auto result = train_run(cfg.model, *data.train, data.val.get(), tc, [&](const EpochStats& s) {
      if (!opts.quiet) out << epoch_line(s) << "\n" << std::flush;
    });
    EvalOptions eval;
    eval.ks = cfg.ks;
    result.record.test = evaluate(cfg.model, result.params, *data.test, eval);
    cell.record = std::move(result.record);
    cell.ok = true;

    fs::create_directories(out_dir);
    const std::string id = cell.id();
    std::ostringstream curve;
    write_curve_csv(curve, cell.record.history);
    write_text(out_dir / ("curves_" + id + ".csv"), curve.str());
    std::ostringstream runs;
    const std::vector<Cell> cells{cell};
    write_runs_csv(runs, cells, metric_names(cells));
    write_text(out_dir / ("run_" + id + ".csv"), runs.str());
    save_params((out_dir / ("params_" + id + ".bin")).string(), cfg.model, result.params);

    out << "selected epoch " << cell.record.selected_epoch << " of "
        << cell.record.total_epochs_run << "; test accuracy " << pct(cell.record.test->accuracy)
        << "\n";
    out << "wrote " << (out_dir / ("curves_" + id + ".csv")).string() << "\n";
    return kOk;
  } catch (const DivergenceError& e) {
    err << "run failed: " << e.what() << "\n";
    return kRunFailure;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return kRunFailure;
  }
}

int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  std::set<ReportFormat> formats;
  LoadedData data;
  fs::path out_dir;
  try {
    cfg = load_config(opts.config_path);
    if (opts.jobs) cfg.jobs = *opts.jobs;
    if (opts.seeds) {
      if (opts.seeds->empty()) throw ConfigError("--seed", "needs at least one seed");
      cfg.seeds = *opts.seeds;
    }
    try {
      for (const auto& f : opts.formats) formats.insert(parse_report_format(f));
    } catch (const InvalidArgument& e) {
      throw ConfigError("--format", e.what());
    }
    if (formats.empty()) {
      formats = {ReportFormat::kCsv, ReportFormat::kMarkdown, ReportFormat::kSvg};
    }
    out_dir = resolve_output_dir(opts.out, cfg.output_dir);
    data = load_data(cfg);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    const ExperimentSpec spec = make_experiment(cfg, data);
    const auto report = run_experiment(spec, [&](const Cell& c) {
      if (opts.quiet) return;
      out << "[" << c.id() << "] ";
      if (c.ok) {
        out << "selected epoch " << c.record.selected_epoch << "/" << c.record.total_epochs_run
            << ", test accuracy " << pct(c.record.test->accuracy) << "\n";
      } else {
        out << "FAILED: " << c.error << "\n";
      }
      out << std::flush;
    });
    const auto files = emit_report(report, out_dir, formats);
    for (const auto& f : files) out << "wrote " << f.string() << "\n";
    if (report.any_group_failed()) {
      err << "every run of at least one group failed\n";
      return kRunFailure;
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "compare failed: " << e.what() << "\n";
    return kRunFailure;
  }
}

int cmd_gradcheck(const GradcheckOptions& opts, std::ostream& out, std::ostream& err) {
  LossSpec loss;
  try {
    if (opts.classes < 2) throw ConfigError("--classes", "must be >= 2");
    try {
      loss = LossSpec::parse(opts.loss);
    } catch (const InvalidArgument& e) {
      throw ConfigError("--loss", e.what());
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  constexpr std::size_t kDim = 8;
  constexpr std::size_t kHidden = 16;
  constexpr std::size_t kBatch = 4;
  const ModelSpec model = ModelSpec::mlp({kDim, kHidden, opts.classes}, ActivationKind::kTanh);
  const Params params = init_params(model, opts.seed);
  Rng rng(derive_seed(opts.seed, 0x6c));
  std::vector<double> x(kBatch * kDim);
  for (double& v : x) v = rng.normal();
  std::vector<std::size_t> labels(kBatch);
  for (auto& l : labels) l = static_cast<std::size_t>(rng.below(opts.classes));

  GradCheckOptions gc;
  gc.seed = opts.seed;
  gc.corrupt_analytic = opts.corrupt;
  const auto res = grad_check(model, params, loss, Tensor({kBatch, kDim}, std::move(x)), labels, gc);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", res.max_rel_error);
  out << "model " << model.describe() << ", loss " << loss.to_string() << "\n";
  out << "max relative error " << buf << " over " << res.coords_checked << " coordinates";
  if (res.coords_skipped) out << " (" << res.coords_skipped << " skipped at kinks)";
  out << "\n";
  const bool pass = res.max_rel_error < 1e-6;
  out << (pass ? "PASS" : "FAIL") << " (threshold 1e-6)\n";
  return pass ? kOk : kRunFailure;
}

int cmd_rescale(std::size_t classes, std::ostream& out, std::ostream& err) {
  try {
    const auto r = default_rescaling(classes);
    out << "k=" << format_double(r.k) << " M=" << format_double(r.m) << "\n";
    return kOk;
  } catch (const InvalidArgument& e) {
    err << "config error: --classes: " << e.what() << "\n";
    return kConfigError;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-entropy vs square loss classification benchmark"};
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Single training run with per-epoch output");
  train_cmd->add_option("config", train.config_path, "Experiment config (JSON)")->required();
  train_cmd->add_option("--loss", train.loss, "Loss: ce, sq or sq:k=<k>,M=<M>");
  train_cmd->add_option("--seed", train.seed, "Seed for initialization and batch order");
  train_cmd->add_option("--protocol", train.protocol, "p1 (early stopping) or p2 (fixed epochs)")
      ->check(CLI::IsMember({"p1", "p2"}));
  train_cmd->add_option("--epochs", train.epochs, "Epoch budget for p2");
  train_cmd->add_option("--lr", train.lr, "Learning rate override");
  train_cmd->add_option("--out", train.out, "Output directory");
  train_cmd->add_flag("--quiet", train.quiet, "Only print the summary");

  CompareOptions compare;
  std::vector<std::uint64_t> seeds;
  auto* compare_cmd = app.add_subcommand("compare", "Multi-seed loss comparison and report");
  compare_cmd->add_option("config", compare.config_path, "Experiment config (JSON)")->required();
  compare_cmd->add_option("--jobs", compare.jobs, "Concurrent training runs");
  compare_cmd->add_option("--out", compare.out, "Output directory");
  compare_cmd->add_option("--format", compare.formats, "Report formats: csv, md, svg")
      ->delimiter(',');
  auto* seed_opt = compare_cmd->add_option("--seed", seeds, "Override the config seeds")
                       ->delimiter(',');
  compare_cmd->add_flag("--quiet", compare.quiet, "Suppress per-run lines");

  GradcheckOptions grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  grad_cmd->add_option("--classes", grad.classes, "Number of classes");
  grad_cmd->add_option("--loss", grad.loss, "Loss: ce, sq or sq:k=<k>,M=<M>");
  grad_cmd->add_option("--seed", grad.seed, "Seed for the random net and batch");
  grad_cmd->add_option("--corrupt-gradient", grad.corrupt, "Test hook: perturb one gradient entry")
      ->group("");

  std::size_t rescale_classes = 0;
  auto* rescale_cmd = app.add_subcommand("rescale", "Default (k, M) for a class count");
  rescale_cmd->add_option("--classes", rescale_classes, "Number of classes")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kConfigError;
  }

  if (*train_cmd) return cmd_train(train, out, err);
  if (*compare_cmd) {
    if (*seed_opt) compare.seeds = seeds;
    return cmd_compare(compare, out, err);
  }
  if (*grad_cmd) return cmd_gradcheck(grad, out, err);
  if (*rescale_cmd) return cmd_rescale(rescale_classes, out, err);
  return kConfigError;
}

}  // namespace brier::cli
