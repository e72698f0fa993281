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

// Two-population coevolution of generators and discriminators.
//
// Each generation pairs every generator with every discriminator. Pairings
// run in lexicographic (i, j) order and train the individuals' own networks,
// so an individual accumulates pop_size * batches_per_pairing batches per
// generation. Fitness comes from skill ratings, from Fréchet distance and
// discriminator loss, or from noise; selection happens inside species with
// fitness sharing, and offspring are produced by mutation only.

#ifndef COEVO_COEVOLUTION_HPP_
#define COEVO_COEVOLUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "coevo/genome.hpp"
#include "coevo/match.hpp"
#include "coevo/metrics.hpp"
#include "coevo/netcore.hpp"
#include "coevo/rating.hpp"

namespace coevo::coevolution {

enum class FitnessMode { SkillRating, FidAndLoss, Random };

std::string_view to_string(FitnessMode m);

struct EvolutionConfig {
  int generations = 50;
  std::size_t pop_size = 10;
  std::size_t species_target = 3;
  std::size_t tournament_k = 2;
  int batches_per_pairing = 20;
  FitnessMode fitness_mode = FitnessMode::SkillRating;
  std::size_t fid_samples = 2048;
  double initial_threshold = 1.0;
  // Every generation re-decodes fresh networks unless this is set, in which
  // case offspring start from the parent's trained weights wherever a layer
  // survived mutation.
  bool inherit_weights = false;

  void validate() const;
};

struct CoevolutionConfig {
  EvolutionConfig evolution;
  netcore::TrainConfig train;
  rating::RatingSystemConfig rating;
  genome::MutationConfig mutation;
  genome::NetworkShape shape;

  void validate() const;
};

struct Species {
  genome::Genome representative;
  std::vector<std::size_t> members;  // indices into the population
  // Sum of members' shared fitness, i.e. the species' mean raw fitness.
  double shared_fitness = 0.0;
};

// Greedy assignment: each genome joins the first species whose
// representative lies within `threshold`, otherwise it founds a new species
// and becomes its representative. Existing representatives are tried first,
// in order; those left without members are dropped.
std::vector<Species> speciate(std::span<const genome::Genome> population, double threshold,
                              std::span<const genome::Genome> representatives = {});

inline constexpr double kMinThreshold = 0.05;

// x1.1 above target, x0.9 below, floored at kMinThreshold.
double adjust_threshold(double current, std::size_t species_count, std::size_t target = 3);

// Largest-remainder apportionment of `total` slots proportional to `scores`
// (nonnegative). All-zero scores fall back to an even split.
std::vector<std::size_t> allocate_offspring(std::span<const double> scores, std::size_t total);

struct SharedFitness {
  std::vector<double> individual;  // raw / species size
  std::vector<std::size_t> quotas;  // per species, sums to pop_size
};

// `raw` must be nonnegative and higher-is-better. Fills each species'
// shared_fitness.
SharedFitness fitness_sharing(std::vector<Species>& species, std::span<const double> raw,
                              std::size_t pop_size);

// Draws min(k, |species|) distinct members and returns the population index
// of the one with the highest shared fitness; ties are broken uniformly.
std::size_t tournament_select(const Species& species, std::span<const double> shared,
                              std::size_t k, Rng& rng);

struct Individual {
  genome::Genome genome;
  netcore::NetworkParams network;
};

struct PopulationState {
  std::vector<Individual> members;
  std::vector<genome::Genome> representatives;
  double threshold = 1.0;
};

struct CoevolutionState {
  PopulationState generators;
  PopulationState discriminators;
  int generation = 0;
  std::uint64_t next_id = 1;
};

// What the run is measured against: the data stream used for training and
// evaluation, and Gaussian statistics of a fixed real reference sample.
struct Environment {
  netcore::DataSampler& data;
  metrics::GaussianStats reference;
};

struct PopulationSummary {
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double mean_rating = 0.0;
  double max_rating = 0.0;
  double mean_parameters = 0.0;
  std::size_t species_count = 0;
  std::vector<std::size_t> species_sizes;
};

struct GenerationReport {
  int generation = 0;
  PopulationSummary generators;
  PopulationSummary discriminators;
  double best_fid = 0.0;
  // Post-update skill rating of the generator with the best Fréchet distance.
  double best_fid_rating = 0.0;
  std::uint64_t best_fid_id = 0;
  double wall_seconds = 0.0;
};

struct PairRecord {
  int generation = 0;
  std::uint64_t g_id = 0;
  std::uint64_t d_id = 0;
  match::PairOutcome outcome;
};

struct GenerationResult {
  CoevolutionState next;
  GenerationReport report;
  std::vector<PairRecord> pairs;
  // Populations of this generation after training and the rating update,
  // before reproduction.
  std::vector<genome::Genome> rated_generators;
  std::vector<genome::Genome> rated_discriminators;
  std::vector<double> generator_fid;
};

// Single-gene founders with initial ratings and freshly decoded networks.
CoevolutionState initialize(const CoevolutionConfig& config, Rng& rng);

// Fréchet distance of `generator` against the environment's reference.
double generator_fid(const netcore::NetworkParams& generator, const CoevolutionConfig& config,
                     const Environment& env, Rng& rng);

GenerationResult run_generation(const CoevolutionState& state, const CoevolutionConfig& config,
                                Environment& env, Rng& rng);

// Report for a population that has not been trained, used when a run asks
// for zero generations.
GenerationReport initial_report(const CoevolutionState& state, const CoevolutionConfig& config,
                                const Environment& env, Rng& rng);

// Fixed-architecture baseline: one generator and one discriminator with four
// hidden layers each, never mutated.
inline constexpr int kFixedHiddenUnits = 128;
CoevolutionState initialize_fixed(const CoevolutionConfig& config, Rng& rng);

// Trains the pair for pop_size * batches_per_pairing batches, then evaluates
// and rates it once.
GenerationResult run_fixed_generation(const CoevolutionState& state,
                                      const CoevolutionConfig& config, Environment& env, Rng& rng);

}  // namespace coevo::coevolution

#endif  // COEVO_COEVOLUTION_HPP_
