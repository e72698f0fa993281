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

#include "coevo/genome.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "coevo/errors.hpp"

namespace coevo::genome {
namespace {

using netcore::Activation;
using netcore::DenseLayer;
using netcore::NetworkParams;

std::uint64_t fresh_id(Rng& rng) {
  std::uint64_t id = rng();
  return id == 0 ? 1 : id;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidInput("parse_genome: bad number '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidInput("parse_genome: bad integer '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Hidden layers plus the role's output head, all freshly initialized.
NetworkParams build(const Genome& g, const NetworkShape& shape, Rng& rng) {
  if (shape.data_dim == 0 || shape.latent_dim == 0)
    throw InvalidInput("decode: dimensions must be positive");
  if (g.genes.empty()) throw InvalidInput("decode: genome has no genes");
  NetworkParams net;
  std::size_t in = g.role == Role::Generator ? shape.latent_dim : shape.data_dim;
  for (const Gene& gene : g.genes) {
    const auto units = static_cast<std::size_t>(gene.units);
    net.layers.push_back(netcore::make_layer(in, units, gene.activation, rng, gene.id));
    in = units;
  }
  if (g.role == Role::Generator)
    net.layers.push_back(netcore::make_layer(in, shape.data_dim, Activation::Linear, rng));
  else
    net.layers.push_back(netcore::make_layer(in, 1, Activation::Sigmoid, rng));
  return net;
}

bool same_shape(const DenseLayer& a, const DenseLayer& b) {
  return a.in_dim() == b.in_dim() && a.out_dim() == b.out_dim() && a.activation == b.activation;
}

void reset_adam(DenseLayer& l) {
  l.adam.first_w.fill(0.0);
  l.adam.second_w.fill(0.0);
  std::fill(l.adam.first_b.begin(), l.adam.first_b.end(), 0.0);
  std::fill(l.adam.second_b.begin(), l.adam.second_b.end(), 0.0);
}

}  // namespace

std::string_view to_string(Role r) { return r == Role::Generator ? "G" : "D"; }

void MutationConfig::validate() const {
  for (double p : {add_rate, remove_rate, change_rate})
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("mutation rates must lie in [0, 1]");
  if (min_units < 1 || max_units < min_units) throw InvalidInput("invalid units range");
  if (genome_limit < 1) throw InvalidInput("genome_limit must be >= 1");
}

Gene random_gene(const MutationConfig& config, Rng& rng) {
  Gene gene;
  gene.units = uniform_int(rng, config.min_units, config.max_units);
  gene.activation = kGeneActivations[uniform_index(rng, std::size(kGeneActivations))];
  gene.id = fresh_id(rng);
  return gene;
}

void validate(const Genome& g, const MutationConfig& config) {
  if (g.genes.empty() || g.genes.size() > config.genome_limit)
    throw InvalidInput("genome length " + std::to_string(g.genes.size()) + " outside [1, " +
                       std::to_string(config.genome_limit) + "]");
  for (const Gene& gene : g.genes)
    if (gene.units < config.min_units || gene.units > config.max_units)
      throw InvalidInput("gene units " + std::to_string(gene.units) + " outside range");
}

NetworkParams decode(const Genome& g, const NetworkShape& shape, Rng& rng) {
  return build(g, shape, rng);
}

NetworkParams decode_inheriting(const Genome& g, const NetworkShape& shape,
                                const NetworkParams& parent, Rng& rng) {
  NetworkParams net = build(g, shape, rng);

  bool identical = net.layers.size() == parent.layers.size();
  for (std::size_t k = 0; identical && k < net.layers.size(); ++k)
    identical = net.layers[k].origin == parent.layers[k].origin &&
                same_shape(net.layers[k], parent.layers[k]);
  if (identical) return parent;

  const std::size_t hidden = net.layers.size() - 1;
  for (std::size_t k = 0; k < hidden; ++k) {
    DenseLayer& layer = net.layers[k];
    for (std::size_t p = 0; p + 1 < parent.layers.size(); ++p) {
      const DenseLayer& from = parent.layers[p];
      if (from.origin == layer.origin && same_shape(from, layer)) {
        layer.weights = from.weights;
        layer.bias = from.bias;
        break;
      }
    }
  }
  DenseLayer& head = net.layers.back();
  if (!parent.layers.empty() && same_shape(parent.layers.back(), head)) {
    head.weights = parent.layers.back().weights;
    head.bias = parent.layers.back().bias;
  }
  for (DenseLayer& l : net.layers) reset_adam(l);
  net.adam_step = 0;
  return net;
}

Genome mutate(const Genome& g, const MutationConfig& config, Rng& rng, MutationEvents* events) {
  Genome child = g;
  MutationEvents ev;

  if (uniform01(rng) < config.add_rate && child.genes.size() < config.genome_limit) {
    const std::size_t pos = uniform_index(rng, child.genes.size() + 1);
    child.genes.insert(child.genes.begin() + static_cast<std::ptrdiff_t>(pos),
                       random_gene(config, rng));
    ev.added = true;
  }
  if (uniform01(rng) < config.remove_rate && child.genes.size() > 1) {
    const std::size_t pos = uniform_index(rng, child.genes.size());
    child.genes.erase(child.genes.begin() + static_cast<std::ptrdiff_t>(pos));
    ev.removed = true;
  }
  if (uniform01(rng) < config.change_rate) {
    const std::size_t pos = uniform_index(rng, child.genes.size());
    child.genes[pos] = random_gene(config, rng);
    ev.changed = true;
  }

  child.skill = g.skill;
  if (events) *events = ev;
  return child;
}

double genome_distance(const Genome& a, const Genome& b) {
  if (a.role != b.role) throw InvalidInput("genome_distance: genomes have different roles");
  const std::size_t na = a.genes.size();
  const std::size_t nb = b.genes.size();
  double structural = static_cast<double>(na > nb ? na - nb : nb - na);
  double units = 0.0;
  for (std::size_t k = 0; k < std::min(na, nb); ++k) {
    // Every gene is Dense, so the kind always matches.
    if (a.genes[k].activation != b.genes[k].activation) structural += 1.0;
    units += std::abs(a.genes[k].units - b.genes[k].units);
  }
  return structural + 0.001 * units;
}

std::string serialize(const Genome& g) {
  std::ostringstream out;
  out << to_string(g.role) << " id=" << g.lineage_id << " parent=" << g.parent_id << " genes=";
  for (std::size_t k = 0; k < g.genes.size(); ++k) {
    if (k) out << ',';
    out << g.genes[k].units << ':' << netcore::to_string(g.genes[k].activation);
  }
  out << " skill=" << format_double(g.skill.rating) << ',' << format_double(g.skill.deviation)
      << ',' << format_double(g.skill.volatility);
  return out.str();
}

Genome parse_genome(std::string_view line) {
  const auto fields = split(line, ' ');
  if (fields.size() != 5) throw InvalidInput("parse_genome: expected 5 fields");
  Genome g;
  if (fields[0] == "G")
    g.role = Role::Generator;
  else if (fields[0] == "D")
    g.role = Role::Discriminator;
  else
    throw InvalidInput("parse_genome: unknown role '" + std::string(fields[0]) + "'");

  auto value_of = [&](std::string_view field, std::string_view key) {
    if (field.substr(0, key.size()) != key)
      throw InvalidInput("parse_genome: expected '" + std::string(key) + "'");
    return field.substr(key.size());
  };
  g.lineage_id = parse_u64(value_of(fields[1], "id="));
  g.parent_id = parse_u64(value_of(fields[2], "parent="));
  for (std::string_view item : split(value_of(fields[3], "genes="), ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw InvalidInput("parse_genome: gene must be units:activation");
    Gene gene;
    gene.units = static_cast<int>(parse_u64(parts[0]));
    gene.activation = netcore::parse_activation(parts[1]);
    g.genes.push_back(gene);
  }
  const auto skill = split(value_of(fields[4], "skill="), ',');
  if (skill.size() != 3) throw InvalidInput("parse_genome: skill needs three values");
  g.skill = {parse_double(skill[0]), parse_double(skill[1]), parse_double(skill[2])};
  return g;
}

}  // namespace coevo::genome
