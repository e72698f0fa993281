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

#ifndef COEVO_GENOME_HPP_
#define COEVO_GENOME_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/netcore.hpp"
#include "coevo/random.hpp"
#include "coevo/rating.hpp"

namespace coevo::genome {

enum class Role { Generator, Discriminator };

std::string_view to_string(Role r);

// One hidden dense layer.
struct Gene {
  int units = 32;
  netcore::Activation activation = netcore::Activation::ReLU;
  // Fresh random tag whenever the gene is created or its parameters change;
  // lets decode() recognise layers it can carry over from a parent network.
  std::uint64_t id = 0;
};

struct Genome {
  std::vector<Gene> genes;
  Role role = Role::Generator;
  rating::SkillRating skill;
  std::uint64_t lineage_id = 0;
  std::uint64_t parent_id = 0;  // 0 for founders
};

struct MutationConfig {
  double add_rate = 0.20;
  double remove_rate = 0.10;
  double change_rate = 0.10;
  int min_units = 32;
  int max_units = 256;
  std::size_t genome_limit = 4;

  void validate() const;
};

// Activations a gene may carry.
inline constexpr netcore::Activation kGeneActivations[] = {
    netcore::Activation::ReLU, netcore::Activation::LeakyReLU, netcore::Activation::Tanh};

struct NetworkShape {
  std::size_t data_dim = 2;
  std::size_t latent_dim = 8;
};

Gene random_gene(const MutationConfig& config, Rng& rng);

// Throws InvalidInput when the genome breaks its length or unit bounds.
void validate(const Genome& g, const MutationConfig& config);

// Generators map latent_dim -> hidden genes -> data_dim (linear head);
// discriminators map data_dim -> hidden genes -> 1 (sigmoid head).
// Freshly initialized parameters, zeroed Adam state.
netcore::NetworkParams decode(const Genome& g, const NetworkShape& shape, Rng& rng);

// As decode(), but carries trained parameters over from `parent`. A genome
// whose genes all match the parent's layers gets an exact copy of the parent
// network, Adam state included. Otherwise layers whose gene id and shape
// match a parent layer (and the output head, when its input width matches)
// copy the parent's weights, and the Adam state starts over.
netcore::NetworkParams decode_inheriting(const Genome& g, const NetworkShape& shape,
                                         const netcore::NetworkParams& parent, Rng& rng);

struct MutationEvents {
  bool added = false;
  bool removed = false;
  bool changed = false;
};

// The three operators fire independently, insertion first and the gene
// re-sample last. The offspring keeps the parent's skill rating.
Genome mutate(const Genome& g, const MutationConfig& config, Rng& rng,
              MutationEvents* events = nullptr);

// |len(a) - len(b)| + structural mismatches over aligned genes
// + 0.001 * unit differences over aligned genes. Throws InvalidInput for
// genomes of different roles.
double genome_distance(const Genome& a, const Genome& b);

// One-line log form, e.g.
//   G id=7 parent=3 genes=64:relu,32:tanh skill=1500,350,0.06
std::string serialize(const Genome& g);
Genome parse_genome(std::string_view line);

}  // namespace coevo::genome

#endif  // COEVO_GENOME_HPP_
