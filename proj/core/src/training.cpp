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

#include "brier/training.hpp"

#include <charconv>
#include <cmath>
#include <utility>

#include "brier/error.hpp"

namespace brier {
namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Tensor step_tensor(const Tensor& p, const Tensor& g, const Tensor& v, double lr,
                   double momentum, Tensor& v_out) {
  if (p.shape() != g.shape() || p.shape() != v.shape()) {
    throw ShapeError("sgd_step: shape mismatch " + to_string(p.shape()) + " / " +
                     to_string(g.shape()) + " / " + to_string(v.shape()));
  }
  const auto pd = p.data();
  const auto gd = g.data();
  const auto vd = v.data();
  std::vector<double> np(p.size());
  std::vector<double> nv(p.size());
  for (std::size_t i = 0; i < np.size(); ++i) {
    nv[i] = momentum * vd[i] + gd[i];
    np[i] = pd[i] - lr * nv[i];
    if (!std::isfinite(np[i]) || !std::isfinite(nv[i])) {
      throw DivergenceError(0, "non-finite parameter update");
    }
  }
  v_out = Tensor(p.shape(), std::move(nv));
  return Tensor(p.shape(), std::move(np));
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw InvalidArgument("momentum must lie in [0, 1)");
  }
  if (batch_size == 0) throw InvalidArgument("batch_size must be >= 1");
  if (max_epochs == 0) throw InvalidArgument("max_epochs must be >= 1");
  if (const auto* es = std::get_if<EarlyStop>(&protocol)) {
    if (es->patience == 0) throw InvalidArgument("patience must be >= 1");
  } else {
    const auto& fe = std::get<FixedEpochs>(protocol);
    if (fe.epochs == 0) throw InvalidArgument("fixed epoch count must be >= 1");
    if (fe.epochs > max_epochs) {
      throw InvalidArgument("fixed epoch count " + std::to_string(fe.epochs) +
                            " exceeds max_epochs " + std::to_string(max_epochs));
    }
  }
}

std::string TrainConfig::fingerprint() const {
  std::string proto;
  if (const auto* es = std::get_if<EarlyStop>(&protocol)) {
    proto = "early_stop(" + std::to_string(es->patience) + ")";
  } else {
    proto = "fixed(" + std::to_string(std::get<FixedEpochs>(protocol).epochs) + ")";
  }
  return "loss=" + loss.to_string() + ";lr=" + num(learning_rate) +
         ";momentum=" + num(momentum) + ";batch=" + std::to_string(batch_size) +
         ";max_epochs=" + std::to_string(max_epochs) + ";protocol=" + proto +
         ";seed=" + std::to_string(seed);
}

double default_learning_rate(const LossSpec& loss) {
  return loss.is_cross_entropy() ? 0.1 : 0.3;
}

Params zeros_like(const Params& params) {
  Params out;
  out.reserve(params.size());
  for (const auto& p : params) {
    out.push_back({Tensor::zeros(p.weight.shape()), Tensor::zeros(p.bias.shape())});
  }
  return out;
}

SgdState sgd_step(const Params& params, const Params& grads, const Params& velocity,
                  double learning_rate, double momentum) {
  if (params.size() != grads.size() || params.size() != velocity.size()) {
    throw ShapeError("sgd_step: layer count mismatch");
  }
  SgdState next;
  next.params.reserve(params.size());
  next.velocity.reserve(params.size());
  for (std::size_t l = 0; l < params.size(); ++l) {
    LinearParams v;
    LinearParams p;
    p.weight = step_tensor(params[l].weight, grads[l].weight, velocity[l].weight,
                           learning_rate, momentum, v.weight);
    p.bias = step_tensor(params[l].bias, grads[l].bias, velocity[l].bias, learning_rate,
                         momentum, v.bias);
    next.params.push_back(std::move(p));
    next.velocity.push_back(std::move(v));
  }
  return next;
}

EarlyStopper::EarlyStopper(std::size_t patience) : patience_(patience) {
  if (patience == 0) throw InvalidArgument("patience must be >= 1");
}

EarlyStopper::Decision EarlyStopper::update(double val_accuracy) {
  ++epoch_;
  improved_ = val_accuracy > best_;
  if (improved_) {
    best_ = val_accuracy;
    best_epoch_ = epoch_;
    counter_ = 0;
  } else {
    ++counter_;
  }
  return counter_ >= patience_ ? Decision::kStop : Decision::kContinue;
}

TrainResult train_run(const ModelSpec& model, const Dataset& train, const Dataset* val,
                      const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  train.validate();
  if (train.dim() != model.input_dim() || train.num_classes != model.output_dim()) {
    throw InvalidArgument("training data (" + std::to_string(train.dim()) + " features, " +
                          std::to_string(train.num_classes) +
                          " classes) does not fit model " + model.describe());
  }
  const bool early_stop = std::holds_alternative<EarlyStop>(config.protocol);
  if (early_stop && (val == nullptr || val->size() == 0)) {
    throw InvalidArgument("early stopping needs a nonempty validation set");
  }
  if (val != nullptr) val->validate();

  const std::size_t epochs_cap =
      early_stop ? config.max_epochs : std::get<FixedEpochs>(config.protocol).epochs;
  std::optional<EarlyStopper> stopper;
  if (early_stop) stopper.emplace(std::get<EarlyStop>(config.protocol).patience);

  Params params = init_params(model, config.seed);
  Params velocity = zeros_like(params);
  Params checkpoint;
  double checkpoint_acc = std::numeric_limits<double>::quiet_NaN();

  RunRecord record;
  record.protocol = early_stop ? ProtocolKind::kEarlyStop : ProtocolKind::kFixedEpochs;
  record.seed = config.seed;
  record.config_fingerprint = config.fingerprint() + ";model=" + model.fingerprint();

  const std::size_t n = train.size();
  for (std::size_t epoch = 1; epoch <= epochs_cap; ++epoch) {
    const BatchPlan plan(n, config.batch_size, config.seed, epoch);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    try {
      std::vector<std::size_t> labels;
      for (std::size_t b = 0; b < plan.num_batches(); ++b) {
        const auto idx = plan.batch(b);
        labels.resize(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = train.labels[idx[i]];
        const auto fwd = forward(model, params, train.gather(idx));
        for (std::size_t r = 0; r < idx.size(); ++r) {
          correct += argmax(fwd.outputs.row(r)) == labels[r] ? 1 : 0;
        }
        const auto bl = batch_loss(config.loss, fwd.outputs, labels);
        loss_sum += bl.mean * static_cast<double>(idx.size());
        const Params grads = backward(model, params, fwd.cache, bl.grad);
        auto next = sgd_step(params, grads, velocity, config.learning_rate, config.momentum);
        params = std::move(next.params);
        velocity = std::move(next.velocity);
      }
    } catch (const NonFiniteError& e) {
      throw DivergenceError(epoch, std::string(e.what()) + " [" + record.config_fingerprint + "]");
    } catch (const DivergenceError&) {
      throw DivergenceError(epoch, "non-finite parameter update [" +
                                       record.config_fingerprint + "]");
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(n);
    stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(n);
    if (val != nullptr) stats.val_accuracy = accuracy(model, params, *val);
    record.history.push_back(stats);
    if (on_epoch) on_epoch(stats);

    if (stopper) {
      const auto decision = stopper->update(stats.val_accuracy);
      if (stopper->improved()) {
        checkpoint = params;
        checkpoint_acc = stats.val_accuracy;
      }
      if (decision == EarlyStopper::Decision::kStop) break;
    }
  }

  record.total_epochs_run = record.history.size();
  if (stopper) {
    record.selected_epoch = stopper->best_epoch();
    record.selected_val_accuracy = checkpoint_acc;
    return {std::move(checkpoint), std::move(record)};
  }
  record.selected_epoch = record.total_epochs_run;
  if (!record.history.empty()) record.selected_val_accuracy = record.history.back().val_accuracy;
  return {std::move(params), std::move(record)};
}

std::size_t selected_epochs(const RunRecord& record, EpochSelection rule) {
  if (record.protocol != ProtocolKind::kEarlyStop) {
    throw InvalidArgument("selected_epochs needs a record from an early-stopping run");
  }
  return rule == EpochSelection::kBestEpoch ? record.selected_epoch
                                            : record.total_epochs_run;
}

}  // namespace brier
