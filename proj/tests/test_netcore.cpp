// Copyright 2026 The coevo-skill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <random>

#include "coevo/errors.hpp"
#include "coevo/netcore.hpp"
#include "support/gradcheck.hpp"

using namespace coevo;
using netcore::Activation;
using netcore::NetworkParams;

namespace {

// Builds a layer with the given weights and zeroed Adam state.
netcore::DenseLayer layer_with(std::size_t in, std::size_t out, std::vector<double> w,
                               std::vector<double> b, Activation act) {
  Rng rng(0);
  netcore::DenseLayer l = netcore::make_layer(in, out, act, rng);
  l.weights = Matrix(out, in, std::move(w));
  l.bias = std::move(b);
  return l;
}

class ConstantSampler : public netcore::DataSampler {
 public:
  std::size_t dim() const override { return 2; }
  Batch sample(std::size_t n) override {
    Batch b(n, 2);
    for (std::size_t r = 0; r < n; ++r) {
      b(r, 0) = 1.0;
      b(r, 1) = -1.0;
    }
    return b;
  }
};

}  // namespace

TEST_SUITE("netcore") {
  TEST_CASE("identity layer passes input through") {
    NetworkParams net;
    net.layers.push_back(layer_with(2, 2, {1, 0, 0, 1}, {0, 0}, Activation::Linear));
    const Matrix x(3, 2, {1.5, -2, 0, 4, 7, 7});
    CHECK(netcore::forward(net, x) == x);
  }

  TEST_CASE("sigmoid head stays inside (0, 1)") {
    std::mt19937_64 rng(3);
    const auto net = testing::random_network(rng, 3, 1, Activation::Sigmoid);
    Matrix x = testing::random_batch(rng, 50, 3);
    for (double& v : x.values()) v *= 5.0;
    const Matrix probs = netcore::forward(net, x);
    for (double p : probs.values()) {
      CHECK(p > 0.0);
      CHECK(p < 1.0);
    }
  }

  TEST_CASE("two-layer network matches hand evaluation") {
    // h = relu([[1,2],[3,4]] x + [0.5,-1]); y = [1,-1] h + 0.25
    NetworkParams net;
    net.layers.push_back(layer_with(2, 2, {1, 2, 3, 4}, {0.5, -1}, Activation::ReLU));
    net.layers.push_back(layer_with(2, 1, {1, -1}, {0.25}, Activation::Linear));
    const Matrix y = netcore::forward(net, Matrix(2, 2, {1, 1, -1, 0}));
    CHECK(y(0, 0) == doctest::Approx(-2.25));  // h = [3.5, 6]
    CHECK(y(1, 0) == doctest::Approx(0.25));   // h = [0, 0]
  }

  TEST_CASE("forward rejects mismatched width") {
    NetworkParams net;
    net.layers.push_back(layer_with(2, 1, {1, 1}, {0}, Activation::Linear));
    CHECK_THROWS_AS(netcore::forward(net, Matrix(1, 3)), ShapeError);
    CHECK_THROWS_AS(netcore::backward(net, Matrix(1, 2), Matrix(1, 2)), ShapeError);
  }

  TEST_CASE("validate catches broken chains") {
    NetworkParams net;
    net.layers.push_back(layer_with(2, 3, std::vector<double>(6, 0.1), {0, 0, 0}, Activation::Tanh));
    net.layers.push_back(layer_with(2, 1, {1, 1}, {0}, Activation::Linear));
    CHECK_THROWS_AS(net.validate(), ShapeError);
  }

  TEST_CASE("discriminator loss values") {
    CHECK(netcore::discriminator_loss(Matrix(4, 1, 0.5), Matrix(4, 1, 0.5)) ==
          doctest::Approx(2.0 * std::log(2.0)));
    CHECK(netcore::discriminator_loss(Matrix(1, 1, 0.9), Matrix(1, 1, 0.2)) ==
          doctest::Approx(-std::log(0.9) - std::log(0.8)));
    CHECK(netcore::discriminator_loss(Matrix(1, 1, 0.9), Matrix(1, 1, 0.2)) ==
          doctest::Approx(0.3285).epsilon(1e-4));
    // Perfect discriminator: clamped logs leave only ~2e-7.
    const double perfect = netcore::discriminator_loss(Matrix(3, 1, 1.0), Matrix(3, 1, 0.0));
    CHECK(perfect >= 0.0);
    CHECK(perfect < 1e-6);
  }

  TEST_CASE("generator loss values") {
    CHECK(netcore::generator_loss(Matrix(2, 1, 1.0 - 1e-7)) < 1e-6);
    CHECK(netcore::generator_loss(Matrix(5, 1, 0.5)) == doctest::Approx(std::log(2.0)));
    CHECK(netcore::generator_loss(Matrix(2, 1, {0.25, 0.75})) == doctest::Approx(0.8370).epsilon(1e-4));
  }

  TEST_CASE("losses reject values outside [0, 1]") {
    CHECK_THROWS_AS(netcore::discriminator_loss(Matrix(1, 1, 1.5), Matrix(1, 1, 0.5)), DomainError);
    CHECK_THROWS_AS(netcore::generator_loss(Matrix(1, 1, -0.1)), DomainError);
    CHECK_THROWS_AS(netcore::generator_loss(Matrix(1, 1, std::nan(""))), DomainError);
  }

  TEST_CASE("losses are nonnegative") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      Matrix a(4, 1), b(4, 1);
      for (double& v : a.values()) v = u(rng);
      for (double& v : b.values()) v = u(rng);
      CHECK(netcore::discriminator_loss(a, b) >= 0.0);
      CHECK(netcore::generator_loss(b) >= 0.0);
    }
  }

  TEST_CASE("zero upstream gives zero gradients") {
    std::mt19937_64 rng(5);
    const auto net = testing::random_network(rng, 3, 2, Activation::Linear);
    const auto g = netcore::backward(net, testing::random_batch(rng, 4, 3), Matrix(4, 2));
    for (const auto& l : g.layers) {
      for (double v : l.weights.values()) CHECK(v == 0.0);
      for (double v : l.bias) CHECK(v == 0.0);
    }
  }

  TEST_CASE("single weight with squared output has gradient 2w") {
    for (double w : {-1.5, 0.3, 2.0}) {
      NetworkParams net;
      net.layers.push_back(layer_with(1, 1, {w}, {0.0}, Activation::Linear));
      const Matrix x(1, 1, 1.0);
      const Matrix y = netcore::forward(net, x);
      const auto g = netcore::backward(net, x, Matrix(1, 1, 2.0 * y(0, 0)));
      CHECK(g.layers[0].weights(0, 0) == doctest::Approx(2.0 * w));
    }
  }

  TEST_CASE("analytic gradients agree with finite differences") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 20; ++t) {
      const auto c = testing::check_random_pair(rng);
      CHECK(c.discriminator_error < 1e-4);
      CHECK(c.generator_error < 1e-4);
    }
  }

  TEST_CASE("adam leaves parameters alone for zero gradients") {
    std::mt19937_64 rng(9);
    NetworkParams net = testing::random_network(rng, 2, 1, Activation::Sigmoid);
    const NetworkParams before = net;
    netcore::Gradients zero;
    for (const auto& l : net.layers)
      zero.layers.push_back({Matrix(l.out_dim(), l.in_dim()), std::vector<double>(l.out_dim(), 0.0)});
    netcore::adam_step(net, zero, netcore::TrainConfig{});
    CHECK(net.adam_step == 1);
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
      CHECK(net.layers[k].weights == before.layers[k].weights);
      CHECK(net.layers[k].bias == before.layers[k].bias);
    }

    // A single nonzero entry moves exactly that parameter.
    NetworkParams moved = before;
    zero.layers[0].weights(0, 0) = 0.7;
    netcore::adam_step(moved, zero, netcore::TrainConfig{});
    CHECK(moved.layers[0].weights(0, 0) != before.layers[0].weights(0, 0));
    CHECK(moved.layers[0].bias == before.layers[0].bias);
  }

  TEST_CASE("first adam step moves by the learning rate") {
    netcore::TrainConfig cfg;
    for (double g : {3.0, -0.02}) {
      NetworkParams net;
      net.layers.push_back(layer_with(1, 1, {0.5}, {0.0}, Activation::Linear));
      netcore::Gradients grads;
      grads.layers.push_back({Matrix(1, 1, g), {0.0}});
      netcore::adam_step(net, grads, cfg);
      const double step = net.layers[0].weights(0, 0) - 0.5;
      CHECK(std::abs(step) == doctest::Approx(cfg.learning_rate).epsilon(1e-6));
      CHECK((step < 0) == (g > 0));
    }
  }

  TEST_CASE("two adam steps follow the recurrence") {
    // g = 1: m1 = 0.5, v1 = 0.001, m_hat = v_hat = 1; m2 = 0.75, v2 = 0.001999,
    // m_hat = v_hat = 1 again. Each step is lr / (1 + eps).
    netcore::TrainConfig cfg;
    NetworkParams net;
    net.layers.push_back(layer_with(1, 1, {0.0}, {0.0}, Activation::Linear));
    netcore::Gradients grads;
    grads.layers.push_back({Matrix(1, 1, 1.0), {0.0}});
    netcore::adam_step(net, grads, cfg);
    CHECK(net.layers[0].adam.first_w(0, 0) == doctest::Approx(0.5));
    CHECK(net.layers[0].adam.second_w(0, 0) == doctest::Approx(0.001));
    netcore::adam_step(net, grads, cfg);
    CHECK(net.layers[0].adam.first_w(0, 0) == doctest::Approx(0.75));
    CHECK(net.layers[0].adam.second_w(0, 0) == doctest::Approx(0.001999));
    CHECK(net.layers[0].weights(0, 0) == doctest::Approx(-2.0 * 0.001 / (1.0 + 1e-8)));
    CHECK(net.adam_step == 2);
  }

  TEST_CASE("adam rejects non-finite gradients") {
    NetworkParams net;
    net.layers.push_back(layer_with(1, 1, {0.0}, {0.0}, Activation::Linear));
    netcore::Gradients grads;
    grads.layers.push_back({Matrix(1, 1, INFINITY), {0.0}});
    CHECK_THROWS_AS(netcore::adam_step(net, grads, netcore::TrainConfig{}), NumericalError);
  }

  TEST_CASE("train_pair counts steps and is reproducible") {
    netcore::TrainConfig cfg;
    cfg.batch_size = 8;
    cfg.latent_dim = 3;
    std::mt19937_64 init(4);
    const auto g0 = netcore::make_network(3, {6, 2}, {Activation::Tanh, Activation::Linear}, init);
    const auto d0 = netcore::make_network(2, {5, 1}, {Activation::LeakyReLU, Activation::Sigmoid}, init);

    auto run = [&](int batches) {
      NetworkParams g = g0, d = d0;
      ConstantSampler data;
      Rng rng(123);
      const auto stats = netcore::train_pair(g, d, data, cfg, batches, rng);
      return std::make_tuple(g, d, stats);
    };
    const auto [g1, d1, s1] = run(1);
    CHECK(s1.discriminator_steps == 1);
    CHECK(s1.generator_steps == 1);
    CHECK(g1.adam_step == 1);
    CHECK(d1.adam_step == 1);

    const auto [ga, da, sa] = run(20);
    const auto [gb, db, sb] = run(20);
    CHECK(ga.adam_step == 20);
    for (std::size_t k = 0; k < ga.layers.size(); ++k) CHECK(ga.layers[k].weights == gb.layers[k].weights);
    for (std::size_t k = 0; k < da.layers.size(); ++k) CHECK(da.layers[k].weights == db.layers[k].weights);

    NetworkParams g = g0, d = d0;
    ConstantSampler data;
    Rng rng(1);
    CHECK_THROWS_AS(netcore::train_pair(g, d, data, cfg, 0, rng), InvalidInput);
  }
}
