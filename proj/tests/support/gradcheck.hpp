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

// Test-only helpers: random networks and a central finite-difference
// gradient oracle that uses nothing but forward passes.

#ifndef COEVO_TESTS_SUPPORT_GRADCHECK_HPP_
#define COEVO_TESTS_SUPPORT_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "coevo/netcore.hpp"

namespace coevo::testing {

inline constexpr double kFiniteDifferenceStep = 1e-5;
// Gradients smaller than this are compared absolutely.
inline constexpr double kRelativeFloor = 1e-6;

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), kRelativeFloor});
}

// Random network with at most `max_params` parameters.
inline netcore::NetworkParams random_network(std::mt19937_64& rng, std::size_t input_dim,
                                             std::size_t output_dim, netcore::Activation head,
                                             std::size_t max_params = 500) {
  using netcore::Activation;
  const Activation hidden_acts[] = {Activation::Tanh, Activation::Sigmoid, Activation::LeakyReLU,
                                    Activation::ReLU, Activation::Linear};
  while (true) {
    const int depth = std::uniform_int_distribution<int>(0, 3)(rng);
    std::vector<std::size_t> widths;
    std::vector<Activation> acts;
    for (int k = 0; k < depth; ++k) {
      widths.push_back(std::uniform_int_distribution<std::size_t>(2, 12)(rng));
      acts.push_back(hidden_acts[std::uniform_int_distribution<int>(0, 4)(rng)]);
    }
    widths.push_back(output_dim);
    acts.push_back(head);
    netcore::NetworkParams net = netcore::make_network(input_dim, widths, acts, rng);
    std::size_t count = 0;
    for (const auto& l : net.layers) count += l.weights.size() + l.bias.size();
    if (count > max_params) continue;
    // Nonzero biases so every parameter path is exercised.
    std::normal_distribution<double> noise(0.0, 0.3);
    for (auto& l : net.layers)
      for (double& b : l.bias) b = noise(rng);
    return net;
  }
}

inline Matrix random_batch(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = d(rng);
  return m;
}

// Largest relative error between `analytic` and central differences of
// `loss` with respect to every parameter of `net`.
inline double max_gradient_error(netcore::NetworkParams net, const netcore::Gradients& analytic,
                                 const std::function<double(const netcore::NetworkParams&)>& loss) {
  double worst = 0.0;
  const double h = kFiniteDifferenceStep;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    auto probe = [&](double& param, double grad) {
      const double saved = param;
      param = saved + h;
      const double up = loss(net);
      param = saved - h;
      const double down = loss(net);
      param = saved;
      worst = std::max(worst, relative_error(grad, (up - down) / (2.0 * h)));
    };
    auto& layer = net.layers[k];
    for (std::size_t i = 0; i < layer.weights.size(); ++i)
      probe(layer.weights.data()[i], analytic.layers[k].weights.data()[i]);
    for (std::size_t i = 0; i < layer.bias.size(); ++i)
      probe(layer.bias[i], analytic.layers[k].bias[i]);
  }
  return worst;
}

struct GradientCase {
  double discriminator_error = 0.0;
  double generator_error = 0.0;
};

// One random generator/discriminator pair; checks dLossD/dD and dLossG/dG.
inline GradientCase check_random_pair(std::mt19937_64& rng) {
  const std::size_t data_dim = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  const std::size_t latent = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
  const std::size_t batch = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
  const auto g = random_network(rng, latent, data_dim, netcore::Activation::Linear);
  const auto d = random_network(rng, data_dim, 1, netcore::Activation::Sigmoid);
  const Matrix real = random_batch(rng, batch, data_dim);
  const Matrix z = random_batch(rng, batch, latent);
  const Matrix fake = netcore::forward(g, z);

  GradientCase out;
  {
    const Matrix p_real = netcore::forward(d, real);
    const Matrix p_fake = netcore::forward(d, fake);
    const auto up = netcore::discriminator_loss_grad(p_real, p_fake);
    netcore::Gradients grad = netcore::backward(d, real, up.real);
    const netcore::Gradients grad_fake = netcore::backward(d, fake, up.fake);
    for (std::size_t k = 0; k < grad.layers.size(); ++k) {
      for (std::size_t i = 0; i < grad.layers[k].weights.size(); ++i)
        grad.layers[k].weights.data()[i] += grad_fake.layers[k].weights.data()[i];
      for (std::size_t i = 0; i < grad.layers[k].bias.size(); ++i)
        grad.layers[k].bias[i] += grad_fake.layers[k].bias[i];
    }
    out.discriminator_error = max_gradient_error(d, grad, [&](const netcore::NetworkParams& net) {
      return netcore::discriminator_loss(netcore::forward(net, real), netcore::forward(net, fake));
    });
  }
  {
    const netcore::ForwardTrace g_trace = netcore::forward_trace(g, z);
    const netcore::ForwardTrace d_trace = netcore::forward_trace(d, g_trace.result());
    const auto through_d =
        netcore::backward(d, d_trace, netcore::generator_loss_grad(d_trace.result()));
    const auto g_grad = netcore::backward(g, g_trace, through_d.input_gradient);
    out.generator_error = max_gradient_error(g, g_grad.params, [&](const netcore::NetworkParams& net) {
      return netcore::generator_loss(netcore::forward(d, netcore::forward(net, z)));
    });
  }
  return out;
}

}  // namespace coevo::testing

#endif  // COEVO_TESTS_SUPPORT_GRADCHECK_HPP_
