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
#include <sstream>

#include "brier/error.hpp"
#include "brier/nn.hpp"
#include "support.hpp"

namespace brier {
namespace {

using test::random_matrix;

TEST(ModelSpec, Validation) {
  EXPECT_THROW(ModelSpec({}, 2), InvalidArgument);
  EXPECT_THROW(ModelSpec({Linear{2, 3}, Activation{}, Linear{4, 2}}, 2), InvalidArgument);
  EXPECT_THROW(ModelSpec({Linear{2, 3}, Activation{}}, 3), InvalidArgument);
  EXPECT_THROW(ModelSpec({Linear{2, 3}}, 4), InvalidArgument);
  EXPECT_THROW(ModelSpec({Activation{}, Linear{2, 3}}, 3), InvalidArgument);
  EXPECT_THROW(ModelSpec::mlp({5}), InvalidArgument);
  const auto m = ModelSpec::mlp({784, 256, 10});
  EXPECT_EQ(m.describe(), "linear(784,256)|relu|linear(256,10)");
  EXPECT_EQ(m.input_dim(), 784u);
  EXPECT_EQ(m.output_dim(), 10u);
  EXPECT_EQ(m.num_linear(), 2u);
  EXPECT_EQ(m.num_params(), 784u * 256 + 256 + 256 * 10 + 10);
  EXPECT_NE(m.fingerprint(), ModelSpec::mlp({784, 256, 10}, ActivationKind::kTanh).fingerprint());
}

TEST(InitParams, DeterministicAndBounded) {
  const auto spec = ModelSpec::mlp({6, 9, 4});
  const auto a = init_params(spec, 17);
  EXPECT_EQ(a, init_params(spec, 17));
  EXPECT_NE(a, init_params(spec, 18));
  EXPECT_EQ(count_params(a), spec.num_params());
  const double lim0 = std::sqrt(6.0 / (6 + 9));
  for (double w : a[0].weight.data()) {
    EXPECT_LE(std::abs(w), lim0);
  }
  for (double b : a[1].bias.data()) EXPECT_EQ(b, 0.0);
  EXPECT_NO_THROW(check_params(spec, a));
  EXPECT_THROW(check_params(ModelSpec::mlp({6, 8, 4}), a), ShapeError);
}

TEST(Forward, IdentityNetwork) {
  const ModelSpec spec({Linear{3, 3}}, 3);
  const Params p = {{Tensor::identity(3), Tensor::zeros({3})}};
  const auto x = Tensor::matrix({{1, -2, 3}, {0.5, 0, -1}});
  EXPECT_EQ(forward(spec, p, x).outputs, x);
}

TEST(Forward, ScalarAffine) {
  const ModelSpec spec({Linear{1, 1}}, 1);
  const Params p = {{Tensor::matrix({{2}}), Tensor::vector({1})}};
  EXPECT_EQ(predict(spec, p, Tensor::matrix({{3}})), Tensor::matrix({{7}}));
}

// Straight-line forward for a two-layer net.
std::vector<double> hand_forward(const Params& p, std::span<const double> x, bool tanh_act) {
  const auto& w1 = p[0].weight;
  const auto& b1 = p[0].bias;
  const auto& w2 = p[1].weight;
  const auto& b2 = p[1].bias;
  std::vector<double> h(w1.rows());
  for (std::size_t j = 0; j < w1.rows(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * w1.at(j, i);
    s += b1[j];
    h[j] = tanh_act ? std::tanh(s) : (s > 0 ? s : 0.0);
  }
  std::vector<double> out(w2.rows());
  for (std::size_t k = 0; k < w2.rows(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) s += h[j] * w2.at(k, j);
    out[k] = s + b2[k];
  }
  return out;
}

TEST(Forward, MatchesHandRolledOracle) {
  Rng rng(21);
  for (bool use_tanh : {false, true}) {
    const auto spec = ModelSpec::mlp({5, 7, 3}, use_tanh ? ActivationKind::kTanh
                                                         : ActivationKind::kRelu);
    const auto p = init_params(spec, 3);
    const auto x = random_matrix(4, 5, rng);
    const auto out = predict(spec, p, x);
    for (std::size_t r = 0; r < 4; ++r) {
      const auto expect = hand_forward(p, x.row(r), use_tanh);
      for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(out.at(r, c), expect[c], 1e-14);
    }
  }
}

TEST(Forward, ShapeErrors) {
  const auto spec = ModelSpec::mlp({3, 2});
  const auto p = init_params(spec, 0);
  EXPECT_THROW(forward(spec, p, Tensor::zeros({2, 4})), ShapeError);
  EXPECT_THROW(forward(spec, p, Tensor::zeros({3})), ShapeError);
}

TEST(Backward, ZeroUpstreamGivesZeroGrads) {
  const auto spec = ModelSpec::mlp({4, 6, 3});
  const auto p = init_params(spec, 1);
  Rng rng(2);
  const auto fr = forward(spec, p, random_matrix(5, 4, rng));
  const auto g = backward(spec, p, fr.cache, Tensor::zeros({5, 3}));
  for (const auto& layer : g) {
    for (double v : layer.weight.data()) EXPECT_EQ(v, 0.0);
    for (double v : layer.bias.data()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Backward, HandDifferentiatedSquare) {
  // L = f(x)^2, x = 1, W = 1, b = 0: dL/dW = 2 f x = 2.
  const ModelSpec spec({Linear{1, 1}}, 1);
  const Params p = {{Tensor::matrix({{1}}), Tensor::vector({0})}};
  const auto fr = forward(spec, p, Tensor::matrix({{1}}));
  const double f = fr.outputs.at(0, 0);
  const auto g = backward(spec, p, fr.cache, Tensor::matrix({{2 * f}}));
  EXPECT_EQ(g[0].weight.at(0, 0), 2.0);
  EXPECT_EQ(g[0].bias[0], 2.0);
}

TEST(Backward, FiniteDifferenceOnLinearFunctional) {
  // L = sum(R * f) for a fixed random R, so dL/df = R.
  Rng rng(33);
  const auto spec = ModelSpec::mlp({3, 5, 4, 2}, ActivationKind::kTanh);
  const auto p = init_params(spec, 8);
  const auto x = random_matrix(3, 3, rng);
  const auto r = random_matrix(3, 2, rng);
  auto functional = [&](const Params& q) {
    const auto out = predict(spec, q, x);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += out[i] * r[i];
    return s;
  };
  const auto fr = forward(spec, p, x);
  const auto g = backward(spec, p, fr.cache, r);
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    for (int which = 0; which < 2; ++which) {
      const auto& t = which == 0 ? p[l].weight : p[l].bias;
      const auto& gt = which == 0 ? g[l].weight : g[l].bias;
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto perturbed = [&](double delta) {
          Params q = p;
          auto v = std::vector<double>(t.data().begin(), t.data().end());
          v[i] += delta;
          (which == 0 ? q[l].weight : q[l].bias) = Tensor(t.shape(), std::move(v));
          return functional(q);
        };
        const double num = (perturbed(h) - perturbed(-h)) / (2 * h);
        const double err = std::abs(num - gt[i]) / std::max({1.0, std::abs(num), std::abs(gt[i])});
        worst = std::max(worst, err);
      }
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Backward, CacheMismatch) {
  const auto a = ModelSpec::mlp({3, 2});
  const auto b = ModelSpec::mlp({3, 4, 2});
  const auto fr = forward(a, init_params(a, 0), Tensor::zeros({1, 3}));
  EXPECT_THROW(backward(b, init_params(b, 0), fr.cache, Tensor::zeros({1, 2})), ShapeError);
  EXPECT_THROW(backward(a, init_params(a, 0), fr.cache, Tensor::zeros({2, 2})), ShapeError);
}

TEST(Checkpoint, RoundTripBitExact) {
  const auto spec = ModelSpec::mlp({5, 4, 3});
  const auto p = init_params(spec, 99);
  std::stringstream ss;
  save_params(ss, spec, p);
  EXPECT_EQ(load_params(ss, spec), p);
}

TEST(Checkpoint, RejectsWrongModelAndGarbage) {
  const auto spec = ModelSpec::mlp({5, 4, 3});
  std::stringstream ss;
  save_params(ss, spec, init_params(spec, 1));
  EXPECT_THROW(load_params(ss, ModelSpec::mlp({5, 6, 3})), DataError);
  std::stringstream junk("not a checkpoint at all");
  EXPECT_THROW(load_params(junk, spec), DataError);
  std::stringstream full;
  save_params(full, spec, init_params(spec, 1));
  std::stringstream cut(full.str().substr(0, full.str().size() - 5));
  EXPECT_THROW(load_params(cut, spec), DataError);
  EXPECT_THROW(load_params("/nonexistent/dir/ckpt.bin", spec), IoError);
}

}  // namespace
}  // namespace brier
