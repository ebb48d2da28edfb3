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

#include "brier/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "brier/error.hpp"

namespace brier {
namespace {

std::string slug(const std::string& loss) {
  std::string out;
  for (char ch : loss) {
    if (ch == ':' || ch == ',') {
      out += '-';
    } else if (ch == '=') {
      continue;
    } else if (ch == '.') {
      out += 'p';
    } else {
      out += ch;
    }
  }
  return out;
}

void run_parallel(std::size_t tasks, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, tasks);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < tasks; i = next++) fn(i);
    });
  }
}

}  // namespace

void ExperimentSpec::validate() const {
  if (!train || !val || !test) throw InvalidArgument("experiment needs train, val and test sets");
  if (arms.empty()) throw InvalidArgument("experiment needs at least one loss");
  if (seeds.empty()) throw InvalidArgument("experiment needs at least one seed");
  std::vector<std::uint64_t> sorted = seeds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("seeds must be distinct");
  }
  std::size_t ce_arms = 0;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    arms[i].validate();
    if (!std::holds_alternative<EarlyStop>(arms[i].protocol)) {
      throw InvalidArgument("arm " + std::to_string(i) + " must use early stopping");
    }
    if (arms[i].loss.is_cross_entropy()) ++ce_arms;
    names.push_back(arms[i].loss.to_string());
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw InvalidArgument("each loss may appear only once");
  }
  if (ce_arms > 1) throw InvalidArgument("at most one cross-entropy arm");
  if (protocols == ProtocolSet::kP1P2 && ce_arms == 0) {
    throw InvalidArgument("protocol 2 needs a cross-entropy arm to take epochs from");
  }
  for (const auto* ds : {train.get(), val.get(), test.get()}) {
    ds->validate();
    if (ds->dim() != model.input_dim() || ds->num_classes != model.output_dim()) {
      throw InvalidArgument("dataset '" + ds->name + "' does not fit model " +
                            model.describe());
    }
  }
}

std::string Cell::id() const {
  return slug(loss) + "_" + protocol + "_seed" + std::to_string(seed);
}

std::string params_digest(const Params& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const Tensor& t) {
    for (double v : t.data()) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      for (int i = 0; i < 8; ++i) {
        h ^= bits & 0xffu;
        h *= 0x100000001b3ULL;
        bits >>= 8;
      }
    }
  };
  for (const auto& p : params) {
    feed(p.weight);
    feed(p.bias);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> metric_names(std::span<const Cell> cells) {
  std::vector<std::string> names = {"accuracy", "error_rate"};
  std::vector<std::size_t> ks;
  bool f1 = false;
  for (const auto& c : cells) {
    if (!c.ok || !c.record.test) continue;
    for (const auto& [k, v] : c.record.test->topk) {
      if (k != 1 && std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
    }
    f1 = f1 || c.record.test->f1.has_value();
  }
  std::sort(ks.begin(), ks.end());
  for (auto k : ks) names.push_back("top" + std::to_string(k));
  if (f1) names.push_back("f1");
  return names;
}

MetricDirection metric_direction(const std::string& metric) {
  return metric == "error_rate" ? MetricDirection::kLowerIsBetter
                                : MetricDirection::kHigherIsBetter;
}

std::optional<double> metric_value(const Cell& cell, const std::string& metric) {
  if (!cell.ok || !cell.record.test) return std::nullopt;
  const auto& t = *cell.record.test;
  if (metric == "accuracy") return t.accuracy;
  if (metric == "error_rate") return t.error_rate;
  if (metric == "f1") return t.f1;
  if (metric.starts_with("top")) {
    const auto k = static_cast<std::size_t>(std::stoull(metric.substr(3)));
    if (auto it = t.topk.find(k); it != t.topk.end()) return it->second;
  }
  return std::nullopt;
}

double seed_delta(MetricDirection direction, double square, double cross_entropy) {
  return direction == MetricDirection::kHigherIsBetter ? square - cross_entropy
                                                       : cross_entropy - square;
}

MetricStats summarize(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("cannot summarize an empty group");
  MetricStats s;
  s.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

const GroupSummary* Aggregate::find(const std::string& loss,
                                    const std::string& protocol) const {
  for (const auto& g : groups) {
    if (g.loss == loss && g.protocol == protocol) return &g;
  }
  return nullptr;
}

Aggregate aggregate(std::span<const Cell> cells) {
  Aggregate agg;
  const auto metrics = metric_names(cells);

  for (const auto& c : cells) {
    if (agg.find(c.loss, c.protocol) == nullptr) agg.groups.push_back({.loss = c.loss, .protocol = c.protocol});
  }
  for (auto& g : agg.groups) {
    std::map<std::string, std::vector<double>> values;
    for (const auto& c : cells) {
      if (c.loss != g.loss || c.protocol != g.protocol) continue;
      if (!c.ok) {
        ++g.n_failed;
        continue;
      }
      ++g.n_ok;
      for (const auto& m : metrics) {
        if (auto v = metric_value(c, m)) values[m].push_back(*v);
      }
    }
    for (const auto& [m, vs] : values) g.metrics[m] = summarize(vs);
  }

  auto baseline = [&](std::uint64_t seed) -> const Cell* {
    for (const auto& c : cells) {
      if (c.loss == "ce" && c.protocol == "p1" && c.seed == seed) return &c;
    }
    return nullptr;
  };
  for (const auto& g : agg.groups) {
    if (g.loss == "ce") continue;
    for (const auto& m : metrics) {
      std::vector<double> ds;
      for (const auto& c : cells) {
        if (c.loss != g.loss || c.protocol != g.protocol) continue;
        const Cell* ce = baseline(c.seed);
        if (ce == nullptr) continue;
        const auto sq_v = metric_value(c, m);
        const auto ce_v = metric_value(*ce, m);
        if (!sq_v || !ce_v) continue;
        const double d = seed_delta(metric_direction(m), *sq_v, *ce_v);
        agg.deltas.push_back({g.loss, g.protocol, c.seed, m, d});
        ds.push_back(d);
      }
      if (!ds.empty()) agg.delta_stats.push_back({g.loss, g.protocol, m, summarize(ds)});
    }
  }
  return agg;
}

const Cell* ComparisonReport::find(const std::string& loss, const std::string& protocol,
                                   std::uint64_t seed) const {
  for (const auto& c : cells) {
    if (c.loss == loss && c.protocol == protocol && c.seed == seed) return &c;
  }
  return nullptr;
}

bool ComparisonReport::any_group_failed() const {
  return std::any_of(summary.groups.begin(), summary.groups.end(),
                     [](const GroupSummary& g) { return g.n_ok == 0; });
}

ComparisonReport run_experiment(const ExperimentSpec& spec, const CellCallback& on_cell) {
  spec.validate();

  ComparisonReport report;
  report.name = spec.name;
  report.model_label = spec.model_label.empty() ? spec.model.describe() : spec.model_label;
  report.task_label = spec.task_label.empty() ? spec.train->name : spec.task_label;
  report.selection = spec.selection;

  struct Task {
    std::size_t arm;
    bool p2;
  };
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < spec.arms.size(); ++a) {
    for (auto seed : spec.seeds) {
      tasks.push_back({a, false});
      report.cells.push_back({.loss = spec.arms[a].loss.to_string(), .protocol = "p1", .seed = seed});
    }
  }
  const std::size_t p1_count = tasks.size();
  if (spec.protocols == ProtocolSet::kP1P2) {
    for (std::size_t a = 0; a < spec.arms.size(); ++a) {
      if (spec.arms[a].loss.is_cross_entropy()) continue;
      for (auto seed : spec.seeds) {
        tasks.push_back({a, true});
        report.cells.push_back({.loss = spec.arms[a].loss.to_string(), .protocol = "p2", .seed = seed});
      }
    }
  }

  std::mutex callback_mutex;
  auto run_cell = [&](std::size_t i) {
    Cell& cell = report.cells[i];
    TrainConfig config = spec.arms[tasks[i].arm];
    config.seed = cell.seed;
    cell.init_digest = params_digest(init_params(spec.model, cell.seed));
    try {
      const Dataset* val = spec.val.get();
      if (tasks[i].p2) {
        const Cell* ce = report.find("ce", "p1", cell.seed);
        if (ce == nullptr || !ce->ok) {
          throw Error("no successful cross-entropy run for seed " +
                      std::to_string(cell.seed) + " to take the epoch count from");
        }
        const std::size_t epochs = selected_epochs(ce->record, spec.selection);
        config.protocol = FixedEpochs{epochs};
        config.max_epochs = std::max(config.max_epochs, epochs);
      }
      auto result = train_run(spec.model, *spec.train, val, config);
      result.record.test = evaluate(spec.model, result.params, *spec.test, spec.eval);
      cell.record = std::move(result.record);
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
    if (on_cell) {
      std::lock_guard lock(callback_mutex);
      on_cell(cell);
    }
  };

  // Protocol-2 cells read the finished protocol-1 cross-entropy cells, so
  // the two phases run one after the other.
  run_parallel(p1_count, spec.jobs, run_cell);
  run_parallel(tasks.size() - p1_count, spec.jobs,
               [&](std::size_t i) { run_cell(p1_count + i); });

  report.summary = aggregate(report.cells);
  return report;
}

}  // namespace brier
