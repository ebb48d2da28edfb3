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

#include <gtest/gtest.h>

#include <cmath>

#include "brier/error.hpp"
#include "brier/instrument.hpp"
#include "brier/metrics.hpp"
#include "brier/training.hpp"
#include "support.hpp"

namespace brier {
namespace {

Params one_layer(std::initializer_list<double> w, std::initializer_list<double> b) {
  return {{Tensor({b.size(), w.size() / b.size()}, w), Tensor({b.size()}, b)}};
}

TEST(Sgd, PlainStep) {
  const auto p = one_layer({1, 2}, {3});
  const auto g = one_layer({0.5, -1}, {2});
  const auto s = sgd_step(p, g, zeros_like(p), 1.0, 0.0);
  EXPECT_EQ(s.params, one_layer({0.5, 3}, {1}));
}

TEST(Sgd, ZeroGradDecaysVelocity) {
  const auto p = one_layer({1, 2}, {3});
  const auto v = one_layer({1, -2}, {4});
  const auto s = sgd_step(p, zeros_like(p), v, 0.1, 0.5);
  EXPECT_EQ(s.velocity, one_layer({0.5, -1}, {2}));
  // Parameters still move along the decayed velocity.
  EXPECT_EQ(s.params, one_layer({1 - 0.1 * 0.5, 2 + 0.1 * 1}, {3 - 0.1 * 2}));
  const auto still = sgd_step(p, zeros_like(p), zeros_like(p), 0.1, 0.9);
  EXPECT_EQ(still.params, p);
}

TEST(Sgd, MomentumUnrolled) {
  // v1 = g, v2 = 0.9 g + g: total displacement g + 1.9 g.
  const auto p = one_layer({0}, {0});
  const auto g = one_layer({1}, {-2});
  auto s = sgd_step(p, g, zeros_like(p), 1.0, 0.9);
  s = sgd_step(s.params, g, s.velocity, 1.0, 0.9);
  EXPECT_DOUBLE_EQ(s.params[0].weight[0], -2.9);
  EXPECT_DOUBLE_EQ(s.params[0].bias[0], 5.8);
}

TEST(Sgd, DivergenceThrows) {
  const auto p = one_layer({1e308}, {0});
  const auto g = one_layer({-1e308}, {0});
  EXPECT_THROW(sgd_step(p, g, zeros_like(p), 10.0, 0.0), DivergenceError);
}

std::vector<EarlyStopper::Decision> feed(EarlyStopper& es, const std::vector<double>& accs) {
  std::vector<EarlyStopper::Decision> out;
  for (double a : accs) out.push_back(es.update(a));
  return out;
}

TEST(EarlyStopper, PlateauStopsAtSeven) {
  EarlyStopper es(5);
  const auto d = feed(es, {0.5, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6});
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(d[i], EarlyStopper::Decision::kContinue) << i;
  EXPECT_EQ(d[6], EarlyStopper::Decision::kStop);
  EXPECT_EQ(es.best_epoch(), 2u);
  EXPECT_EQ(es.best(), 0.6);
}

TEST(EarlyStopper, StrictlyIncreasingNeverStops) {
  EarlyStopper es(5);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(es.update(i * 1e-3), EarlyStopper::Decision::kContinue);
  }
  EXPECT_EQ(es.best_epoch(), 1000u);
}

TEST(EarlyStopper, CounterResetsOnImprovement) {
  EarlyStopper es(5);
  feed(es, {0.7, 0.65, 0.66});
  EXPECT_EQ(es.since_improvement(), 2u);
  es.update(0.71);
  EXPECT_TRUE(es.improved());
  EXPECT_EQ(es.since_improvement(), 0u);
  EXPECT_EQ(es.best_epoch(), 4u);
  es.update(0.70);
  EXPECT_EQ(es.since_improvement(), 1u);
}

TEST(EarlyStopper, PropertyAgainstReference) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t patience = 1 + rng.below(6);
    EarlyStopper es(patience);
    double best = -1;
    std::size_t best_epoch = 0, counter = 0;
    for (std::size_t e = 1; e <= 60; ++e) {
      const double acc = static_cast<double>(rng.below(10)) / 10.0;
      if (acc > best) {
        best = acc;
        best_epoch = e;
        counter = 0;
      } else {
        ++counter;
      }
      const bool stop = counter >= patience;
      ASSERT_EQ(es.update(acc) == EarlyStopper::Decision::kStop, stop);
      ASSERT_EQ(es.best_epoch(), best_epoch);
      if (stop) break;
    }
  }
}

struct Fixture {
  Dataset train;
  Dataset val;
  ModelSpec model = ModelSpec::mlp({2, 8, 2});
};

Fixture gaussians(std::uint64_t seed = 3) {
  const auto all = synth_gaussians(
      {.num_classes = 2, .dim = 2, .per_class = 100, .separation = 4, .noise = 1, .seed = seed});
  auto [tr, va] = split(all, SplitSpec{.val_fraction = 0.25, .seed = 1,
                                       .policy = SplitPolicy::kShuffled});
  return {std::move(tr), std::move(va)};
}

TrainConfig config(const LossSpec& loss, Protocol protocol = EarlyStop{}) {
  TrainConfig c;
  c.loss = loss;
  c.learning_rate = 0.05;
  c.batch_size = 16;
  c.max_epochs = 30;
  c.protocol = protocol;
  c.seed = 4;
  return c;
}

TEST(TrainConfig, Validate) {
  auto c = config(LossSpec::cross_entropy());
  EXPECT_NO_THROW(c.validate());
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = config(LossSpec::cross_entropy(), FixedEpochs{50});
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = config(LossSpec::cross_entropy());
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = config(LossSpec::cross_entropy());
  c.momentum = 1.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  EXPECT_NE(config(LossSpec::cross_entropy()).fingerprint(),
            config(LossSpec::rescaled_square()).fingerprint());
}

TEST(DefaultLearningRate, PerLoss) {
  EXPECT_EQ(default_learning_rate(LossSpec::cross_entropy()), 0.1);
  EXPECT_EQ(default_learning_rate(LossSpec::rescaled_square(1, 15)), 0.3);
}

TEST(TrainRun, FixedEpochsRunsExactly) {
  const auto f = gaussians();
  const auto r = train_run(f.model, f.train, &f.val,
                           config(LossSpec::rescaled_square(), FixedEpochs{3}));
  EXPECT_EQ(r.record.total_epochs_run, 3u);
  EXPECT_EQ(r.record.selected_epoch, 3u);
  EXPECT_EQ(r.record.history.size(), 3u);
  EXPECT_EQ(r.record.protocol, ProtocolKind::kFixedEpochs);
}

TEST(TrainRun, Deterministic) {
  const auto f = gaussians();
  for (const auto& loss : {LossSpec::cross_entropy(), LossSpec::rescaled_square()}) {
    const auto a = train_run(f.model, f.train, &f.val, config(loss));
    const auto b = train_run(f.model, f.train, &f.val, config(loss));
    EXPECT_EQ(a.params, b.params);
    ASSERT_EQ(a.record.history.size(), b.record.history.size());
    for (std::size_t i = 0; i < a.record.history.size(); ++i) {
      EXPECT_EQ(a.record.history[i].train_loss, b.record.history[i].train_loss);
      EXPECT_EQ(a.record.history[i].val_accuracy, b.record.history[i].val_accuracy);
    }
    EXPECT_EQ(a.record.config_fingerprint, b.record.config_fingerprint);
  }
}

TEST(TrainRun, CheckpointReproducesSelectedAccuracy) {
  const auto f = gaussians(8);
  for (const auto& loss : {LossSpec::cross_entropy(), LossSpec::rescaled_square()}) {
    const auto r = train_run(f.model, f.train, &f.val, config(loss));
    if (r.record.total_epochs_run < 30) {
      EXPECT_EQ(r.record.total_epochs_run, r.record.selected_epoch + 5);
    }
    EXPECT_EQ(accuracy(f.model, r.params, f.val), r.record.selected_val_accuracy);
    EXPECT_EQ(r.record.history[r.record.selected_epoch - 1].val_accuracy,
              r.record.selected_val_accuracy);
  }
}

TEST(TrainRun, SeparableReachesFullTrainAccuracy) {
  const auto all = synth_gaussians(
      {.num_classes = 2, .dim = 2, .per_class = 200, .separation = 10, .noise = 1, .seed = 2});
  const auto [tr, va] = split(all, SplitSpec{.val_fraction = 0.2, .policy = SplitPolicy::kShuffled});
  const auto model = ModelSpec::mlp({2, 16, 2});
  for (const auto& loss : {LossSpec::cross_entropy(), LossSpec::rescaled_square()}) {
    auto c = config(loss, FixedEpochs{20});
    c.max_epochs = 20;
    const auto r = train_run(model, tr, &va, c);
    double best = 0.0;
    for (const auto& e : r.record.history) best = std::max(best, e.train_accuracy);
    EXPECT_EQ(best, 1.0) << loss.to_string();
  }
}

TEST(TrainRun, SquarePathNeverUsesSoftmax) {
  const auto f = gaussians();
  reset_counters();
  train_run(f.model, f.train, &f.val, config(LossSpec::rescaled_square(1, 15), FixedEpochs{2}));
  EXPECT_EQ(counters().softmax_rows, 0u);
  EXPECT_EQ(counters().fused_lse_rows, 0u);
  EXPECT_GT(counters().square_batches, 0u);
}

TEST(TrainRun, DivergenceIsReported) {
  const auto f = gaussians();
  auto c = config(LossSpec::rescaled_square(15, 30), FixedEpochs{20});
  c.learning_rate = 1e6;
  try {
    train_run(f.model, f.train, &f.val, c);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GE(e.epoch(), 1u);
  }
}

TEST(TrainRun, EarlyStopNeedsValidation) {
  const auto f = gaussians();
  EXPECT_THROW(train_run(f.model, f.train, nullptr, config(LossSpec::cross_entropy())),
               InvalidArgument);
  const auto r = train_run(f.model, f.train, nullptr,
                           config(LossSpec::cross_entropy(), FixedEpochs{2}));
  EXPECT_TRUE(std::isnan(r.record.history[0].val_accuracy));
}

TEST(SelectedEpochs, Rules) {
  RunRecord r;
  r.protocol = ProtocolKind::kEarlyStop;
  r.selected_epoch = 2;
  r.total_epochs_run = 7;
  EXPECT_EQ(selected_epochs(r), 2u);
  EXPECT_EQ(selected_epochs(r, EpochSelection::kTotalEpochs), 7u);
  r.selected_epoch = r.total_epochs_run = 100;
  EXPECT_EQ(selected_epochs(r), 100u);
  r.protocol = ProtocolKind::kFixedEpochs;
  EXPECT_THROW(selected_epochs(r), InvalidArgument);
}

}  // namespace
}  // namespace brier
