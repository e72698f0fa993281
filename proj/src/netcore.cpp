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

#include "coevo/netcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coevo/errors.hpp"
#include "coevo/kernels.hpp"

namespace coevo::netcore {
namespace {

double activate(Activation a, double x) {
  switch (a) {
    case Activation::ReLU:
      return x > 0.0 ? x : 0.0;
    case Activation::LeakyReLU:
      return x > 0.0 ? x : kLeakySlope * x;
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Sigmoid:
      return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    case Activation::Linear:
      return x;
  }
  return x;
}

// Derivative expressed through the activation's output.
double activation_slope(Activation a, double y) {
  switch (a) {
    case Activation::ReLU:
      return y > 0.0 ? 1.0 : 0.0;
    case Activation::LeakyReLU:
      return y > 0.0 ? 1.0 : kLeakySlope;
    case Activation::Tanh:
      return 1.0 - y * y;
    case Activation::Sigmoid:
      return y * (1.0 - y);
    case Activation::Linear:
      return 1.0;
  }
  return 1.0;
}

double clamp_prob(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }

void check_probabilities(const Batch& b, const char* what) {
  if (b.empty()) throw InvalidInput(std::string(what) + ": empty batch");
  for (double p : b.values())
    if (!(p >= 0.0 && p <= 1.0))
      throw DomainError(std::string(what) + ": probability outside [0, 1]");
}

double mean_neg_log(const Batch& b, bool complement) {
  double s = 0.0;
  for (double p : b.values()) {
    const double q = clamp_prob(p);
    s -= std::log(complement ? 1.0 - q : q);
  }
  return s / static_cast<double>(b.size());
}

Backprop backward_impl(const NetworkParams& net, const ForwardTrace& trace, const Matrix& upstream,
                       bool want_params, bool want_input) {
  if (trace.outputs.size() != net.layers.size())
    throw ShapeError("backward: trace does not match network depth");
  const Matrix& out = trace.result();
  if (upstream.rows() != out.rows() || upstream.cols() != out.cols())
    throw ShapeError("backward: upstream gradient shape differs from network output");

  Backprop result;
  if (want_params) result.params.layers.resize(net.layers.size());

  Matrix grad = upstream;
  for (std::size_t k = net.layers.size(); k-- > 0;) {
    const DenseLayer& layer = net.layers[k];
    const Matrix& y = trace.outputs[k];
    // Through the activation: grad becomes dLoss/dPreactivation.
    double* g = grad.data();
    const double* yv = y.data();
    for (std::size_t i = 0; i < grad.size(); ++i) g[i] *= activation_slope(layer.activation, yv[i]);

    if (want_params) {
      LayerGradients& lg = result.params.layers[k];
      lg.weights = Matrix(layer.out_dim(), layer.in_dim());
      lg.bias.assign(layer.out_dim(), 0.0);
      kernels::affine_grad_params(grad, trace.inputs[k], lg.weights, lg.bias);
    }
    if (k > 0 || want_input) {
      Matrix next(grad.rows(), layer.in_dim());
      kernels::affine_grad_input(grad, layer.weights, next);
      grad = std::move(next);
    }
  }
  if (want_input) result.input_gradient = std::move(grad);
  return result;
}

Batch stack_rows(const Batch& top, const Batch& bottom) {
  Batch out(top.rows() + bottom.rows(), top.cols());
  std::copy(top.values().begin(), top.values().end(), out.values().begin());
  std::copy(bottom.values().begin(), bottom.values().end(),
            out.values().begin() + static_cast<std::ptrdiff_t>(top.size()));
  return out;
}

Batch slice_rows(const Batch& b, std::size_t begin, std::size_t end) {
  Batch out(end - begin, b.cols());
  std::copy(b.values().begin() + static_cast<std::ptrdiff_t>(begin * b.cols()),
            b.values().begin() + static_cast<std::ptrdiff_t>(end * b.cols()),
            out.values().begin());
  return out;
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::ReLU:
      return "relu";
    case Activation::LeakyReLU:
      return "leaky_relu";
    case Activation::Tanh:
      return "tanh";
    case Activation::Sigmoid:
      return "sigmoid";
    case Activation::Linear:
      return "linear";
  }
  return "linear";
}

Activation parse_activation(std::string_view name) {
  for (Activation a : {Activation::ReLU, Activation::LeakyReLU, Activation::Tanh,
                       Activation::Sigmoid, Activation::Linear})
    if (to_string(a) == name) return a;
  throw InvalidInput("unknown activation '" + std::string(name) + "'");
}

void NetworkParams::validate() const {
  if (layers.empty()) throw ShapeError("network has no layers");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const DenseLayer& l = layers[k];
    if (l.weights.empty() || l.bias.size() != l.out_dim())
      throw ShapeError("layer " + std::to_string(k) + ": bias size != out-dimension");
    if (k + 1 < layers.size() && l.out_dim() != layers[k + 1].in_dim())
      throw ShapeError("layer " + std::to_string(k) + " does not chain into the next");
    const AdamMoments& m = l.adam;
    if (m.first_w.rows() != l.out_dim() || m.first_w.cols() != l.in_dim() ||
        m.second_w.rows() != l.out_dim() || m.second_w.cols() != l.in_dim() ||
        m.first_b.size() != l.out_dim() || m.second_b.size() != l.out_dim())
      throw ShapeError("layer " + std::to_string(k) + ": Adam state misshapen");
    if (!l.weights.all_finite() ||
        !std::all_of(l.bias.begin(), l.bias.end(), [](double v) { return std::isfinite(v); }))
      throw NumericalError("layer " + std::to_string(k) + ": non-finite parameters");
  }
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw InvalidInput("batch_size must be positive");
  if (!(learning_rate > 0.0)) throw InvalidInput("learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw InvalidInput("beta1 must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw InvalidInput("beta2 must be in [0, 1)");
  if (latent_dim == 0) throw InvalidInput("latent_dim must be positive");
  if (!(adam_epsilon > 0.0)) throw InvalidInput("adam_epsilon must be > 0");
}

DenseLayer make_layer(std::size_t in, std::size_t out, Activation act, Rng& rng,
                      std::uint64_t origin) {
  if (in == 0 || out == 0) throw ShapeError("make_layer: zero dimension");
  DenseLayer layer;
  layer.weights = Matrix(out, in);
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& w : layer.weights.values()) w = dist(rng);
  layer.bias.assign(out, 0.0);
  layer.activation = act;
  layer.adam.first_w = Matrix(out, in);
  layer.adam.second_w = Matrix(out, in);
  layer.adam.first_b.assign(out, 0.0);
  layer.adam.second_b.assign(out, 0.0);
  layer.origin = origin;
  return layer;
}

NetworkParams make_network(std::size_t input_dim, const std::vector<std::size_t>& widths,
                           const std::vector<Activation>& activations, Rng& rng) {
  if (widths.empty() || widths.size() != activations.size())
    throw ShapeError("make_network: widths and activations must be nonempty and equal length");
  NetworkParams net;
  std::size_t in = input_dim;
  for (std::size_t k = 0; k < widths.size(); ++k) {
    net.layers.push_back(make_layer(in, widths[k], activations[k], rng));
    in = widths[k];
  }
  return net;
}

ForwardTrace forward_trace(const NetworkParams& net, const Batch& input) {
  if (net.layers.empty()) throw ShapeError("forward: network has no layers");
  if (input.cols() != net.input_dim())
    throw ShapeError("forward: input width " + std::to_string(input.cols()) +
                     " != network input " + std::to_string(net.input_dim()));
  ForwardTrace trace;
  trace.inputs.reserve(net.layers.size());
  trace.outputs.reserve(net.layers.size());
  const Matrix* x = &input;
  for (const DenseLayer& layer : net.layers) {
    trace.inputs.push_back(*x);
    Matrix y(x->rows(), layer.out_dim());
    kernels::affine_forward(*x, layer.weights, layer.bias, y);
    for (double& v : y.values()) v = activate(layer.activation, v);
    trace.outputs.push_back(std::move(y));
    x = &trace.outputs.back();
  }
  return trace;
}

Matrix forward(const NetworkParams& net, const Batch& input) {
  if (net.layers.empty()) throw ShapeError("forward: network has no layers");
  if (input.cols() != net.input_dim())
    throw ShapeError("forward: input width " + std::to_string(input.cols()) +
                     " != network input " + std::to_string(net.input_dim()));
  Matrix x = input;
  for (const DenseLayer& layer : net.layers) {
    Matrix y(x.rows(), layer.out_dim());
    kernels::affine_forward(x, layer.weights, layer.bias, y);
    for (double& v : y.values()) v = activate(layer.activation, v);
    x = std::move(y);
  }
  return x;
}

Backprop backward(const NetworkParams& net, const ForwardTrace& trace, const Matrix& upstream) {
  return backward_impl(net, trace, upstream, true, true);
}

Gradients backward(const NetworkParams& net, const Batch& input, const Matrix& upstream) {
  return backward_impl(net, forward_trace(net, input), upstream, true, false).params;
}

double discriminator_loss(const Batch& d_real, const Batch& d_fake) {
  check_probabilities(d_real, "discriminator_loss(real)");
  check_probabilities(d_fake, "discriminator_loss(fake)");
  return mean_neg_log(d_real, false) + mean_neg_log(d_fake, true);
}

double generator_loss(const Batch& d_fake) {
  check_probabilities(d_fake, "generator_loss");
  return mean_neg_log(d_fake, false);
}

DiscriminatorLossGrad discriminator_loss_grad(const Batch& d_real, const Batch& d_fake) {
  check_probabilities(d_real, "discriminator_loss_grad(real)");
  check_probabilities(d_fake, "discriminator_loss_grad(fake)");
  DiscriminatorLossGrad g{Matrix(d_real.rows(), d_real.cols()),
                          Matrix(d_fake.rows(), d_fake.cols())};
  const double nr = static_cast<double>(d_real.size());
  const double nf = static_cast<double>(d_fake.size());
  for (std::size_t i = 0; i < d_real.size(); ++i)
    g.real.data()[i] = -1.0 / (nr * clamp_prob(d_real.data()[i]));
  for (std::size_t i = 0; i < d_fake.size(); ++i)
    g.fake.data()[i] = 1.0 / (nf * (1.0 - clamp_prob(d_fake.data()[i])));
  return g;
}

Matrix generator_loss_grad(const Batch& d_fake) {
  check_probabilities(d_fake, "generator_loss_grad");
  Matrix g(d_fake.rows(), d_fake.cols());
  const double n = static_cast<double>(d_fake.size());
  for (std::size_t i = 0; i < d_fake.size(); ++i)
    g.data()[i] = -1.0 / (n * clamp_prob(d_fake.data()[i]));
  return g;
}

void adam_step(NetworkParams& net, const Gradients& grads, const TrainConfig& config) {
  if (grads.layers.size() != net.layers.size())
    throw ShapeError("adam_step: gradient depth != network depth");
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const LayerGradients& g = grads.layers[k];
    const DenseLayer& l = net.layers[k];
    if (g.weights.rows() != l.out_dim() || g.weights.cols() != l.in_dim() ||
        g.bias.size() != l.out_dim())
      throw ShapeError("adam_step: gradient shape mismatch at layer " + std::to_string(k));
    if (!g.weights.all_finite() ||
        !std::all_of(g.bias.begin(), g.bias.end(), [](double v) { return std::isfinite(v); }))
      throw NumericalError("adam_step: non-finite gradient at layer " + std::to_string(k));
  }

  ++net.adam_step;
  const double t = static_cast<double>(net.adam_step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  const double lr = config.learning_rate;
  const double eps = config.adam_epsilon;
  const double b1 = config.beta1;
  const double b2 = config.beta2;

  auto update = [&](double* __restrict param, double* __restrict m, double* __restrict v,
                    const double* __restrict g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      param[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  };

  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    DenseLayer& l = net.layers[k];
    const LayerGradients& g = grads.layers[k];
    update(l.weights.data(), l.adam.first_w.data(), l.adam.second_w.data(), g.weights.data(),
           l.weights.size());
    update(l.bias.data(), l.adam.first_b.data(), l.adam.second_b.data(), g.bias.data(),
           l.bias.size());
  }
}

Batch latent_batch(std::size_t n, std::size_t latent_dim, Rng& rng) {
  Batch z(n, latent_dim);
  for (double& v : z.values()) v = standard_normal(rng);
  return z;
}

PairTrainingStats train_pair(NetworkParams& generator, NetworkParams& discriminator,
                             DataSampler& data, const TrainConfig& config, int n_batches,
                             Rng& rng) {
  config.validate();
  if (n_batches < 1) throw InvalidInput("train_pair: n_batches must be >= 1");
  if (generator.input_dim() != config.latent_dim)
    throw ShapeError("train_pair: generator input != latent_dim");
  if (generator.output_dim() != discriminator.input_dim() || data.dim() != generator.output_dim())
    throw ShapeError("train_pair: generator, discriminator and data widths disagree");
  if (discriminator.output_dim() != 1) throw ShapeError("train_pair: discriminator must emit 1 value");

  PairTrainingStats stats;
  const std::size_t b = config.batch_size;
  for (int step = 0; step < n_batches; ++step) {
    const Batch real = data.sample(b);
    const Batch z = latent_batch(b, config.latent_dim, rng);

    // Discriminator step on stacked [real; fake].
    const ForwardTrace g_trace = forward_trace(generator, z);
    const ForwardTrace d_trace = forward_trace(discriminator, stack_rows(real, g_trace.result()));
    const Batch d_real = slice_rows(d_trace.result(), 0, b);
    const Batch d_fake = slice_rows(d_trace.result(), b, 2 * b);
    stats.last_discriminator_loss = discriminator_loss(d_real, d_fake);
    const DiscriminatorLossGrad dg = discriminator_loss_grad(d_real, d_fake);
    const Backprop d_back =
        backward_impl(discriminator, d_trace, stack_rows(dg.real, dg.fake), true, false);
    adam_step(discriminator, d_back.params, config);
    ++stats.discriminator_steps;

    // Generator step through the updated discriminator.
    const ForwardTrace d_on_fake = forward_trace(discriminator, g_trace.result());
    stats.last_generator_loss = generator_loss(d_on_fake.result());
    const Backprop through_d = backward_impl(
        discriminator, d_on_fake, generator_loss_grad(d_on_fake.result()), false, true);
    const Backprop g_back = backward_impl(generator, g_trace, through_d.input_gradient, true, false);
    adam_step(generator, g_back.params, config);
    ++stats.generator_steps;
  }
  return stats;
}

}  // namespace coevo::netcore
