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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass criterion numbers as arguments to
// run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "brier/config.hpp"
#include "brier/gradcheck.hpp"
#include "brier/harness.hpp"
#include "brier/instrument.hpp"
#include "brier/report.hpp"
#include "commands.hpp"
#include "support.hpp"

namespace {

using namespace brier;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "brier");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str() + e.str();
  return code;
}

// 1. Analytic vs central-difference gradients on random small nets.
Outcome gradient_correctness() {
  Outcome r;
  const auto t0 = Clock::now();
  const std::vector<LossSpec> losses = {LossSpec::cross_entropy(), LossSpec::rescaled_square(1, 1),
                                        LossSpec::rescaled_square(1, 15),
                                        LossSpec::rescaled_square(15, 30)};
  const std::size_t class_counts[] = {2, 10, 42, 1000};
  Rng rng(20240601);
  double worst = 0.0;
  std::size_t checked = 0, max_params = 0;
  for (int i = 0; i < 200; ++i) {
    const auto& loss = losses[i % 4];
    const std::size_t c = class_counts[(i / 4) % 4];
    const std::size_t d = 2 + rng.below(7);
    std::vector<std::size_t> widths = {d};
    const std::size_t hidden_layers = rng.below(3);
    for (std::size_t h = 0; h < hidden_layers; ++h) widths.push_back(c >= 1000 ? 4 + rng.below(5) : 3 + rng.below(14));
    widths.push_back(c);
    const auto act = rng.below(2) ? ActivationKind::kTanh : ActivationKind::kRelu;
    const auto spec = ModelSpec::mlp(widths, act);
    max_params = std::max(max_params, spec.num_params());
    const auto x = test::random_matrix(3, d, rng);
    const auto labels = test::random_labels(3, c, rng);
    GradCheckOptions opts;
    opts.max_coords = 10000;
    opts.seed = i;
    const auto res = grad_check(spec, init_params(spec, i), loss, x, labels, opts);
    worst = std::max(worst, res.max_rel_error);
    checked += res.coords_checked;
  }
  const double secs = seconds_since(t0);
  r.require(max_params <= 10000, "a net exceeded 1e4 parameters");
  r.require(worst < 1e-6, "max relative error " + fmt("%.3e", worst));
  r.require(secs < 120.0, "runtime " + fmt("%.1f s", secs));
  r.detail = "200 cases, " + std::to_string(checked) + " coordinates, max rel err " +
             fmt("%.2e", worst) + ", " + fmt("%.1f s", secs) + (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

// 2. RescaledSquare{1,1} is the standard square loss; RescaledSquare{1,M} is the scaled distance.
Outcome loss_reduction() {
  Outcome r;
  Rng rng(99);
  const auto sq = LossSpec::rescaled_square(1, 1);
  std::size_t mismatches = 0;
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const std::size_t c = 2 + rng.below(99);
    std::vector<double> f(c);
    // Output magnitudes of trained nets; M spans the heuristic range.
    const double scale = rng.uniform(0.1, 3.0);
    for (double& v : f) v = scale * rng.normal();
    const std::size_t label = rng.below(c);
    double rest = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      if (j != label) rest += f[j] * f[j];
    }
    const double eq1 = (1.0 / static_cast<double>(c)) * ((f[label] - 1.0) * (f[label] - 1.0) + rest);
    if (loss_value(sq, f, {label}, c) != eq1) ++mismatches;

    const double m = 1.0 + static_cast<double>(rng.below(30));
    double dist = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double y = j == label ? m : 0.0;
      dist += (f[j] - y) * (f[j] - y);
    }
    dist /= static_cast<double>(c);
    worst = std::max(worst, std::abs(loss_value(LossSpec::rescaled_square(1, m), f, {label}, c) - dist));
  }
  r.require(mismatches == 0, std::to_string(mismatches) + " standard-form mismatches");
  r.require(worst <= 1e-12, "distance form off by " + fmt("%.3e", worst));
  r.detail = "1e5 evaluations, bit-exact mismatches " + std::to_string(mismatches) +
             ", max |diff| vs distance form " + fmt("%.2e", worst) + (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

// 3. Default (k, M) per class count.
Outcome rescaling_table() {
  Outcome r;
  const std::pair<std::size_t, Rescaling> rows[] = {
      {2, {1, 1}}, {10, {1, 1}}, {27, {1, 1}}, {42, {1, 15}}, {52, {1, 15}}, {1000, {15, 30}}};
  for (const auto& [c, want] : rows) {
    const auto got = default_rescaling(c);
    r.require(got == want, "C=" + std::to_string(c) + " gave k=" + format_double(got.k) +
                               " M=" + format_double(got.m));
  }
  if (r.pass) r.detail = "C in {2,10,27} -> (1,1), {42,52} -> (1,15), 1000 -> (15,30)";
  return r;
}

// 4. MNIST MLP, cross-entropy vs square loss under protocol 1, five seeds.
Outcome mnist_reproduction() {
  Outcome r;
  const char* env = std::getenv("BRIER_MNIST_DIR");
  if (env == nullptr || *env == '\0' ||
      !fs::exists(fs::path(env) / "train-images-idx3-ubyte")) {
    r.require(false, "MNIST files not found; set BRIER_MNIST_DIR");
    return r;
  }
  auto cfg = load_config(fs::path(BRIER_CONFIG_DIR) / "mnist.json");
  cfg.protocols = ProtocolSet::kP1;
  const auto data = load_data(cfg);
  const auto spec = make_experiment(cfg, data);
  auto last = Clock::now();
  double slowest = 0.0;
  const auto report = run_experiment(spec, [&](const Cell& c) {
    const double secs = seconds_since(last);
    last = Clock::now();
    slowest = std::max(slowest, secs);
    std::cout << "  mnist " << c.id() << ": "
              << (c.ok ? fmt("test %.2f%%", 100.0 * c.record.test->accuracy) +
                             ", selected epoch " + std::to_string(c.record.selected_epoch) +
                             "/" + std::to_string(c.record.total_epochs_run)
                       : "FAILED " + c.error)
              << fmt(", %.0f s", secs) << std::endl;
  });
  double min_acc = 1.0;
  for (const auto& c : report.cells) {
    r.require(c.ok, c.id() + " failed");
    if (c.ok) min_acc = std::min(min_acc, c.record.test->accuracy);
  }
  const auto* ce = report.summary.find("ce", "p1");
  const auto* sq = report.summary.find("sq", "p1");
  if (!ce || !sq || !ce->metrics.contains("accuracy") || !sq->metrics.contains("accuracy")) {
    r.require(false, "missing groups");
    return r;
  }
  const auto& a_ce = ce->metrics.at("accuracy");
  const auto& a_sq = sq->metrics.at("accuracy");
  const double diff = 100.0 * std::abs(a_sq.mean - a_ce.mean);
  r.require(min_acc >= 0.97, "a run scored " + fmt("%.2f%%", 100.0 * min_acc));
  r.require(diff <= 0.5, "mean gap " + fmt("%.2f pts", diff));
  r.require(100.0 * a_ce.std <= 0.3, "ce std " + fmt("%.2f pts", 100.0 * a_ce.std));
  r.require(100.0 * a_sq.std <= 0.3, "sq std " + fmt("%.2f pts", 100.0 * a_sq.std));
  r.require(slowest <= 900.0, "slowest run " + fmt("%.0f s", slowest));
  r.detail = "ce " + fmt("%.2f", 100.0 * a_ce.mean) + " ± " + fmt("%.2f", 100.0 * a_ce.std) +
             ", sq " + fmt("%.2f", 100.0 * a_sq.mean) + " ± " + fmt("%.2f", 100.0 * a_sq.std) +
             ", gap " + fmt("%.2f pts", diff) + ", min " + fmt("%.2f%%", 100.0 * min_acc) +
             ", slowest run " + fmt("%.0f s", slowest) + (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

// Synthetic ce + sq experiment under both protocols, shared by 5, 7 and 8.
const ComparisonReport& paired_report() {
  static const ComparisonReport report = [] {
    const GaussianSpec g{.num_classes = 4, .dim = 6, .per_class = 150, .separation = 2.5,
                         .noise = 1, .seed = 31};
    auto [tr, va] = split(synth_gaussians(g), SplitSpec{.val_fraction = 0.2, .seed = 1,
                                                        .policy = SplitPolicy::kShuffled});
    auto tg = g;
    tg.seed = 32;
    TrainConfig ce;
    ce.loss = LossSpec::cross_entropy();
    ce.learning_rate = 0.05;
    ce.batch_size = 32;
    ce.max_epochs = 60;
    TrainConfig sq = ce;
    sq.loss = LossSpec::rescaled_square();
    ExperimentSpec spec{.name = "paired",
                        .train = std::make_shared<Dataset>(std::move(tr)),
                        .val = std::make_shared<Dataset>(std::move(va)),
                        .test = std::make_shared<Dataset>(synth_gaussians(tg)),
                        .model = ModelSpec::mlp({6, 16, 4}),
                        .arms = {ce, sq}};
    return run_experiment(spec);
  }();
  return report;
}

// 5. Early-stopping fixtures and protocol-2 epoch matching.
Outcome protocol_mechanics() {
  Outcome r;
  auto feed = [](std::size_t patience, const std::vector<double>& accs, std::size_t* stop_at) {
    EarlyStopper es(patience);
    *stop_at = 0;
    for (std::size_t i = 0; i < accs.size(); ++i) {
      if (es.update(accs[i]) == EarlyStopper::Decision::kStop) {
        *stop_at = i + 1;
        break;
      }
    }
    return es;
  };
  std::size_t stop = 0;
  auto es = feed(5, {0.5, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6}, &stop);
  r.require(stop == 7 && es.best_epoch() == 2, "plateau fixture");
  std::vector<double> rising(200);
  for (std::size_t i = 0; i < rising.size(); ++i) rising[i] = 0.001 * static_cast<double>(i);
  es = feed(5, rising, &stop);
  r.require(stop == 0 && es.best_epoch() == 200, "increasing fixture");
  es = feed(5, {0.7, 0.65, 0.66}, &stop);
  const bool before = es.since_improvement() == 2;
  es.update(0.71);
  r.require(before && es.since_improvement() == 0 && es.best_epoch() == 4, "reset fixture");

  const auto& rep = paired_report();
  std::string epochs;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const Cell* ce = rep.find("ce", "p1", s);
    const Cell* p2 = rep.find("sq", "p2", s);
    if (!ce || !p2 || !ce->ok || !p2->ok) {
      r.require(false, "seed " + std::to_string(s) + " missing");
      continue;
    }
    r.require(p2->record.total_epochs_run == ce->record.selected_epoch,
              "seed " + std::to_string(s) + " p2 ran " +
                  std::to_string(p2->record.total_epochs_run) + " epochs, ce selected " +
                  std::to_string(ce->record.selected_epoch));
    epochs += (epochs.empty() ? "" : ",") + std::to_string(p2->record.total_epochs_run);
  }
  r.detail = "3 early-stop fixtures; p2 epochs per seed [" + epochs + "] match ce" +
             (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

// 6. Separable two-class Gaussians.
Outcome separable_sanity() {
  Outcome r;
  auto cfg = load_config(fs::path(BRIER_CONFIG_DIR) / "synthetic2.json");
  const auto& g = cfg.dataset.synthetic;
  r.require(g.num_classes == 2 && g.separation == 10 && g.noise == 1 && g.per_class == 500 &&
                cfg.model.num_linear() == 2,
            "config does not describe the required task");
  const auto data = load_data(cfg);
  const auto report = run_experiment(make_experiment(cfg, data));
  double min_acc = 1.0;
  std::size_t max_epochs = 0;
  for (const auto& c : report.cells) {
    r.require(c.ok, c.id() + " failed: " + c.error);
    if (!c.ok) continue;
    min_acc = std::min(min_acc, c.record.test->accuracy);
    max_epochs = std::max(max_epochs, c.record.total_epochs_run);
    r.require(c.record.test->accuracy >= 0.99,
              c.id() + fmt(" scored %.2f%%", 100.0 * c.record.test->accuracy));
  }
  r.require(report.cells.size() == 10, "expected 10 runs");
  r.require(max_epochs <= 20, "a run used " + std::to_string(max_epochs) + " epochs");
  r.detail = std::to_string(report.cells.size()) + " runs, min test accuracy " +
             fmt("%.2f%%", 100.0 * min_acc) + ", at most " + std::to_string(max_epochs) +
             " epochs" + (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

// 7. Aggregates recomputed from runs.csv by brute force.
Outcome aggregation_oracle() {
  Outcome r;
  const auto& rep = paired_report();
  test::TempDir dir("accept_agg");
  emit_report(rep, dir.path(), {ReportFormat::kCsv});
  std::ifstream in(dir / "runs.csv");
  const auto cells = read_runs_csv(in);
  std::size_t compared = 0;
  double worst = 0.0;
  auto close = [&](double a, double b, const std::string& what) {
    worst = std::max(worst, std::abs(a - b));
    ++compared;
    r.require(std::abs(a - b) <= 1e-12, what);
  };
  for (const auto& g : rep.summary.groups) {
    for (const auto& [metric, stats] : g.metrics) {
      std::vector<double> v;
      for (const auto& c : cells) {
        if (c.loss != g.loss || c.protocol != g.protocol || !c.ok) continue;
        if (metric == "accuracy") v.push_back(c.record.test->accuracy);
        else if (metric == "error_rate") v.push_back(c.record.test->error_rate);
        else v.push_back(c.record.test->topk.at(std::stoul(metric.substr(3))));
      }
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
      close(stats.mean, mean, g.loss + "/" + g.protocol + " " + metric + " mean");
      close(stats.std, sd, g.loss + "/" + g.protocol + " " + metric + " std");
    }
  }
  for (const auto& d : rep.summary.deltas) {
    const Cell* sq = nullptr;
    const Cell* ce = nullptr;
    for (const auto& c : cells) {
      if (c.loss == d.loss && c.protocol == d.protocol && c.seed == d.seed) sq = &c;
      if (c.loss == "ce" && c.protocol == "p1" && c.seed == d.seed) ce = &c;
    }
    if (!sq || !ce || !sq->ok || !ce->ok) continue;
    double want = 0.0;
    if (d.metric == "accuracy") want = sq->record.test->accuracy - ce->record.test->accuracy;
    else if (d.metric == "error_rate") want = ce->record.test->error_rate - sq->record.test->error_rate;
    else continue;
    close(d.delta, want, "delta " + d.loss + "/" + d.protocol + " seed " + std::to_string(d.seed));
  }

  // Constructed fixture for the sign rule.
  auto cell = [](const std::string& loss, double acc) {
    Cell c;
    c.loss = loss;
    c.protocol = "p1";
    c.seed = 1;
    c.ok = true;
    EvalResult e;
    e.accuracy = acc;
    e.error_rate = 1.0 - acc;
    e.topk[1] = acc;
    c.record.test = e;
    return c;
  };
  const std::vector<Cell> fixture = {cell("ce", 0.821), cell("sq", 0.838)};
  const auto agg = aggregate(fixture);
  for (const auto& d : agg.deltas) {
    if (d.metric == "accuracy") close(d.delta, 0.838 - 0.821, "accuracy sign");
    if (d.metric == "error_rate") close(d.delta, (1.0 - 0.821) - (1.0 - 0.838), "error sign");
    r.require(d.delta > 0, d.metric + " delta should favour the better square loss");
  }
  r.require(seed_delta(MetricDirection::kHigherIsBetter, 83.8, 82.1) > 0 &&
                seed_delta(MetricDirection::kLowerIsBetter, 10.0, 12.0) > 0,
            "seed_delta sign");
  r.detail = std::to_string(compared) + " values recomputed from runs.csv, max |diff| " +
             fmt("%.1e", worst) + (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

// 8. Repeated cmd_train is byte-identical; paired seeds share initial params.
Outcome determinism() {
  Outcome r;
  test::TempDir dir("accept_det");
  const auto cfg = fs::path(BRIER_CONFIG_DIR) / "synthetic50.json";
  for (const char* sub : {"a", "b"}) {
    std::string log;
    const int code = run_cli({"train", cfg.string(), "--loss", "sq:k=1,M=15", "--seed", "7",
                              "--quiet", "--out", (dir / sub).string()},
                             &log);
    r.require(code == 0, std::string("train ") + sub + " exited " + std::to_string(code) + ": " + log);
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename().string();
    const auto other = dir / "b" / name;
    r.require(fs::exists(other) && test::read_file(entry.path()) == test::read_file(other),
              name + " differs");
    ++files;
  }
  r.require(files >= 3, "expected curve, run and params files");

  const auto& rep = paired_report();
  const auto model = ModelSpec::mlp({6, 16, 4});
  std::size_t pairs = 0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const std::string want = params_digest(init_params(model, s));
    for (const auto& c : rep.cells) {
      if (c.seed != s) continue;
      r.require(c.init_digest == want, c.id() + " started from different params");
      ++pairs;
    }
  }
  r.detail = std::to_string(files) + " files byte-identical across two runs; " +
             std::to_string(pairs) + " cells share per-seed initial params" +
             (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

// 9. Square-loss training never calls softmax; CE fuses log-sum-exp once per batch.
Outcome no_softmax() {
  Outcome r;
  const auto all = synth_gaussians({.num_classes = 5, .dim = 4, .per_class = 40, .seed = 3});
  const auto [tr, va] = split(all, SplitSpec{.val_fraction = 0.25});
  const auto model = ModelSpec::mlp({4, 8, 5});
  TrainConfig c;
  c.learning_rate = 0.01;
  c.batch_size = 16;
  c.max_epochs = 4;
  c.protocol = FixedEpochs{4};
  const std::size_t batches = 4 * BatchPlan(tr.size(), 16, 0, 0).num_batches();
  const std::size_t rows = 4 * tr.size();

  for (const auto& loss : {LossSpec::rescaled_square(), LossSpec::rescaled_square(15, 30)}) {
    c.loss = loss;
    reset_counters();
    train_run(model, tr, &va, c);
    const auto k = counters();
    r.require(k.softmax_rows == 0 && k.fused_lse_rows == 0 && k.fused_ce_batches == 0,
              loss.to_string() + " touched softmax");
    r.require(k.square_batches == batches, loss.to_string() + " square kernel count");
  }
  c.loss = LossSpec::cross_entropy();
  reset_counters();
  train_run(model, tr, &va, c);
  const auto k = counters();
  r.require(k.fused_ce_batches == batches,
            "ce fused " + std::to_string(k.fused_ce_batches) + " times over " +
                std::to_string(batches) + " batches");
  r.require(k.fused_lse_rows == rows, "ce log-sum-exp rows");
  r.require(k.square_batches == 0, "ce used the square kernel");
  r.detail = "square paths: 0 softmax rows; ce: " + std::to_string(k.fused_ce_batches) +
             " fused calls for " + std::to_string(batches) + " batches" +
             (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

// 10. Rescaling comparison artifacts on the 50-class task.
Outcome rescaling_artifacts() {
  Outcome r;
  test::TempDir dir("accept_rescale");
  const auto cfg_path = fs::path(BRIER_CONFIG_DIR) / "synthetic50.json";
  const auto cfg = load_config(cfg_path);
  r.require(cfg.dataset.num_classes == 50, "config is not 50-class");
  std::string log;
  const int code = run_cli({"compare", cfg_path.string(), "--quiet", "--out", dir.path().string()}, &log);
  r.require(code == 0, "compare exited " + std::to_string(code) + ": " + log);
  if (code != 0) return r;

  std::ifstream in(dir / "runs.csv");
  const auto cells = read_runs_csv(in);
  std::set<std::string> losses;
  for (const auto& c : cells) {
    losses.insert(c.loss);
    const auto curve = dir / ("curves_" + c.id() + ".csv");
    std::ifstream cin(curve);
    r.require(fs::exists(curve) && read_curve_csv(cin).size() == c.record.total_epochs_run,
              curve.filename().string() + " incomplete");
  }
  r.require(losses == std::set<std::string>{"sq", "sq:k=1,M=15"}, "expected both square variants");
  r.require(cells.size() == 2 * cfg.seeds.size(), "cell count");
  const auto md = test::read_file(dir / (cfg.name + ".md"));
  r.require(md.find("Train with square loss") != std::string::npos &&
                md.find("`sq:k=1,M=15`") != std::string::npos && md.find("`sq`") != std::string::npos,
            "markdown table incomplete");
  for (const auto& svg_name : {cfg.name + "_deltas.svg", cfg.name + "_curves.svg"}) {
    const auto svg = test::read_file(dir / svg_name);
    r.require(svg.rfind("<svg", 0) == 0 && svg.find("</svg>") != std::string::npos,
              svg_name + " malformed");
  }
  const auto curves = test::read_file(dir / (cfg.name + "_curves.svg"));
  std::size_t lines = 0;
  for (auto p = curves.find("class=\"curve\""); p != std::string::npos;
       p = curves.find("class=\"curve\"", p + 1)) {
    ++lines;
  }
  r.require(lines >= cells.size(), "curves svg has " + std::to_string(lines) + " polylines");

  std::string acc;
  for (const auto& g : aggregate(cells).groups) {
    if (!g.metrics.contains("accuracy")) continue;
    acc += (acc.empty() ? "" : ", ") + g.loss + fmt(" %.1f%%", 100.0 * g.metrics.at("accuracy").mean);
  }
  r.detail = std::to_string(cells.size()) + " runs, curves + table + 2 svgs present (reported: " +
             acc + ")" + (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient correctness", gradient_correctness},
      {"loss reduction identity", loss_reduction},
      {"rescaling heuristic table", rescaling_table},
      {"MNIST desk-scale reproduction", mnist_reproduction},
      {"protocol mechanics", protocol_mechanics},
      {"separable sanity", separable_sanity},
      {"aggregation oracle", aggregation_oracle},
      {"determinism", determinism},
      {"no-softmax structure", no_softmax},
      {"rescaling experiment artifacts", rescaling_artifacts},
  };
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.contains(i + 1)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": "
              << o.detail << fmt(" (%.1f s)", seconds_since(t0)) << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
