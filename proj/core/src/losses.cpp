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

#include "brier/losses.hpp"

#include <charconv>
#include <cmath>
#include <system_error>
#include <vector>

#include "brier/error.hpp"
#include "brier/instrument.hpp"

namespace brier {
namespace {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void check_label(Label label, std::size_t num_classes) {
  if (label.index >= num_classes) {
    throw InvalidArgument("label " + std::to_string(label.index) +
                          " out of range for " + std::to_string(num_classes) +
                          " classes");
  }
}

void check_outputs(std::span<const double> outputs, std::size_t num_classes) {
  if (num_classes == 0) throw InvalidArgument("class count must be positive");
  if (outputs.size() != num_classes) {
    throw ShapeError("loss expects " + std::to_string(num_classes) +
                     " outputs, got " + std::to_string(outputs.size()));
  }
  for (double v : outputs) {
    if (!std::isfinite(v)) throw NonFiniteError("non-finite model output in loss");
  }
}

double square_value(const RescaledSquare& sq, std::span<const double> f,
                    std::size_t c) {
  const double d = f[c] - sq.m;
  double others = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i != c) others += f[i] * f[i];
  }
  return (1.0 / static_cast<double>(f.size())) * (sq.k * (d * d) + others);
}

// Writes scale * dl/df into `out`.
void square_grad(const RescaledSquare& sq, std::span<const double> f, std::size_t c,
                 double scale, double* out) {
  const double two_over_c = 2.0 / static_cast<double>(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double g = i == c ? sq.k * (f[i] - sq.m) : f[i];
    out[i] = (two_over_c * g) * scale;
  }
}

// Fused cross-entropy row: returns the loss and writes
// scale * (softmax(f) - onehot(c)) into `out`.
double ce_row(std::span<const double> f, std::size_t c, double scale, double* out) {
  double m = f[0];
  for (double v : f) m = v > m ? v : m;
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = std::exp(f[i] - m);
    sum += out[i];
  }
  const double lse = m + std::log(sum);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double p = out[i] / sum;
    out[i] = (i == c ? p - 1.0 : p) * scale;
  }
  return lse - f[c];
}

}  // namespace

LossSpec LossSpec::rescaled_square(double k, double m) {
  if (!std::isfinite(k) || k < 1.0) {
    throw InvalidArgument("rescaled square loss needs k >= 1, got " + format_number(k));
  }
  if (!std::isfinite(m) || m < 1.0) {
    throw InvalidArgument("rescaled square loss needs M >= 1, got " + format_number(m));
  }
  return LossSpec(RescaledSquare{k, m});
}

LossSpec LossSpec::parse(std::string_view text) {
  if (text == "ce") return cross_entropy();
  if (text == "sq") return rescaled_square(1.0, 1.0);
  if (!text.starts_with("sq:")) {
    throw InvalidArgument("unknown loss '" + std::string(text) +
                          "' (expected ce, sq or sq:k=<k>,M=<M>)");
  }
  double k = 1.0;
  double m = 1.0;
  bool seen_k = false;
  bool seen_m = false;
  std::string_view rest = text.substr(3);
  if (rest.empty()) throw InvalidArgument("loss '" + std::string(text) + "': empty parameter list");
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("loss '" + std::string(text) + "': expected key=value, got '" +
                            std::string(item) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view val = item.substr(eq + 1);
    double parsed = 0.0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), parsed);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size()) {
      throw InvalidArgument("loss '" + std::string(text) + "': bad number '" +
                            std::string(val) + "'");
    }
    if (key == "k" && !seen_k) {
      k = parsed;
      seen_k = true;
    } else if ((key == "M" || key == "m") && !seen_m) {
      m = parsed;
      seen_m = true;
    } else {
      throw InvalidArgument("loss '" + std::string(text) + "': unknown or repeated key '" +
                            std::string(key) + "'");
    }
  }
  return rescaled_square(k, m);
}

std::string LossSpec::to_string() const {
  if (is_cross_entropy()) return "ce";
  const auto& sq = square();
  if (sq.k == 1.0 && sq.m == 1.0) return "sq";
  return "sq:k=" + format_number(sq.k) + ",M=" + format_number(sq.m);
}

double loss_value(const LossSpec& spec, std::span<const double> outputs,
                  Label label, std::size_t num_classes) {
  check_outputs(outputs, num_classes);
  check_label(label, num_classes);
  if (spec.is_square()) return square_value(spec.square(), outputs, label.index);
  ++counters().fused_lse_rows;
  return log_sum_exp(outputs) - outputs[label.index];
}

Tensor loss_grad(const LossSpec& spec, std::span<const double> outputs, Label label,
                 std::size_t num_classes) {
  check_outputs(outputs, num_classes);
  check_label(label, num_classes);
  std::vector<double> g(num_classes);
  if (spec.is_square()) {
    square_grad(spec.square(), outputs, label.index, 1.0, g.data());
  } else {
    ++counters().softmax_rows;
    ++counters().fused_lse_rows;
    ce_row(outputs, label.index, 1.0, g.data());
  }
  return Tensor({num_classes}, std::move(g));
}

Tensor encode_onehot(Label label, std::size_t num_classes, double m) {
  check_label(label, num_classes);
  if (!std::isfinite(m) || m < 1.0) throw InvalidArgument("one-hot scale M must be >= 1");
  std::vector<double> v(num_classes, 0.0);
  v[label.index] = m;
  return Tensor({num_classes}, std::move(v));
}

Rescaling default_rescaling(std::size_t num_classes) {
  if (num_classes < 2) {
    throw InvalidArgument("rescaling needs at least 2 classes, got " +
                          std::to_string(num_classes));
  }
  if (num_classes < 42) return {1.0, 1.0};
  if (num_classes < 1000) return {1.0, 15.0};
  return {15.0, 30.0};
}

BatchLoss batch_loss(const LossSpec& spec, const Tensor& outputs,
                     std::span<const std::size_t> labels) {
  if (outputs.rank() != 2 || outputs.rows() == 0) {
    throw ShapeError("batch_loss expects a nonempty [B x C] batch, got " +
                     to_string(outputs.shape()));
  }
  const std::size_t rows = outputs.rows();
  const std::size_t classes = outputs.cols();
  if (labels.size() != rows) {
    throw ShapeError("batch has " + std::to_string(rows) + " rows but " +
                     std::to_string(labels.size()) + " labels");
  }
  for (std::size_t r = 0; r < rows; ++r) check_label(Label{labels[r]}, classes);

  const double inv_b = 1.0 / static_cast<double>(rows);
  std::vector<double> grad(rows * classes);
  double sum = 0.0;
  auto& ctr = counters();
  if (spec.is_square()) {
    ++ctr.square_batches;
    for (std::size_t r = 0; r < rows; ++r) {
      const auto f = outputs.row(r);
      sum += square_value(spec.square(), f, labels[r]);
      square_grad(spec.square(), f, labels[r], inv_b, grad.data() + r * classes);
    }
  } else {
    ++ctr.fused_ce_batches;
    ctr.fused_lse_rows += rows;
    ctr.softmax_rows += rows;
    for (std::size_t r = 0; r < rows; ++r) {
      sum += ce_row(outputs.row(r), labels[r], inv_b, grad.data() + r * classes);
    }
  }
  const double mean = sum / static_cast<double>(rows);
  if (!std::isfinite(mean)) throw NonFiniteError("batch loss is not finite");
  return {mean, Tensor({rows, classes}, std::move(grad))};
}

}  // namespace brier
