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

// Dense networks with reverse-mode gradients and Adam, plus the classical
// GAN losses.

#ifndef COEVO_NETCORE_HPP_
#define COEVO_NETCORE_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "coevo/matrix.hpp"
#include "coevo/random.hpp"

namespace coevo::netcore {

enum class Activation { ReLU, LeakyReLU, Tanh, Sigmoid, Linear };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

inline constexpr double kLeakySlope = 0.2;
// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] before logs.
inline constexpr double kProbEpsilon = 1e-7;

struct AdamMoments {
  Matrix first_w, second_w;
  std::vector<double> first_b, second_b;
};

struct DenseLayer {
  Matrix weights;  // out x in
  std::vector<double> bias;
  Activation activation = Activation::Linear;
  AdamMoments adam;
  // Identifies the genome gene this layer was decoded from (0 for heads).
  std::uint64_t origin = 0;

  std::size_t in_dim() const { return weights.cols(); }
  std::size_t out_dim() const { return weights.rows(); }
};

struct NetworkParams {
  std::vector<DenseLayer> layers;
  std::int64_t adam_step = 0;

  std::size_t input_dim() const { return layers.front().in_dim(); }
  std::size_t output_dim() const { return layers.back().out_dim(); }

  // Throws ShapeError if layers do not chain or Adam state is misshapen,
  // NumericalError on non-finite values.
  void validate() const;
};

struct TrainConfig {
  std::size_t batch_size = 64;
  double learning_rate = 0.001;
  double beta1 = 0.5;
  double beta2 = 0.999;
  std::size_t latent_dim = 8;
  double adam_epsilon = 1e-8;

  void validate() const;
};

struct LayerGradients {
  Matrix weights;
  std::vector<double> bias;
};

struct Gradients {
  std::vector<LayerGradients> layers;
};

// Activations recorded during a forward pass: inputs[k] feeds layer k,
// outputs[k] is its post-activation result.
struct ForwardTrace {
  std::vector<Matrix> inputs;
  std::vector<Matrix> outputs;

  const Matrix& result() const { return outputs.back(); }
};

struct Backprop {
  Gradients params;
  Matrix input_gradient;
};

// Glorot-uniform weights, zero bias, zeroed Adam moments.
DenseLayer make_layer(std::size_t in, std::size_t out, Activation act, Rng& rng,
                      std::uint64_t origin = 0);

NetworkParams make_network(std::size_t input_dim, const std::vector<std::size_t>& widths,
                           const std::vector<Activation>& activations, Rng& rng);

Matrix forward(const NetworkParams& net, const Batch& input);
ForwardTrace forward_trace(const NetworkParams& net, const Batch& input);

// `upstream` is dLoss/dOutput of the network (post-activation).
Backprop backward(const NetworkParams& net, const ForwardTrace& trace, const Matrix& upstream);
Gradients backward(const NetworkParams& net, const Batch& input, const Matrix& upstream);

// -mean(log D(x)) - mean(log(1 - D(G(z)))).
double discriminator_loss(const Batch& d_real, const Batch& d_fake);
// Non-saturating generator loss, -mean(log D(G(z))).
double generator_loss(const Batch& d_fake);

// dLoss/dOutput for the two losses, derived from the clamped probabilities.
struct DiscriminatorLossGrad {
  Matrix real;
  Matrix fake;
};
DiscriminatorLossGrad discriminator_loss_grad(const Batch& d_real, const Batch& d_fake);
Matrix generator_loss_grad(const Batch& d_fake);

// Bias-corrected Adam step applied in place; increments adam_step.
void adam_step(NetworkParams& net, const Gradients& grads, const TrainConfig& config);

// Stream of samples from the data distribution. Sampling consumes the
// sampler's own engine, so a seeded sampler yields a reproducible sequence.
class DataSampler {
 public:
  virtual ~DataSampler() = default;
  virtual std::size_t dim() const = 0;
  virtual Batch sample(std::size_t n) = 0;
};

Batch latent_batch(std::size_t n, std::size_t latent_dim, Rng& rng);

struct PairTrainingStats {
  double last_discriminator_loss = 0.0;
  double last_generator_loss = 0.0;
  int discriminator_steps = 0;
  int generator_steps = 0;
};

// Alternates one discriminator step and one generator step per batch.
PairTrainingStats train_pair(NetworkParams& generator, NetworkParams& discriminator,
                             DataSampler& data, const TrainConfig& config, int n_batches,
                             Rng& rng);

}  // namespace coevo::netcore

#endif  // COEVO_NETCORE_HPP_
