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

#include "coevo/coevolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "coevo/errors.hpp"

namespace coevo::coevolution {
namespace {

using genome::Genome;
using genome::Role;

std::vector<Genome> genomes_of(const PopulationState& pop) {
  std::vector<Genome> out;
  out.reserve(pop.members.size());
  for (const Individual& ind : pop.members) out.push_back(ind.genome);
  return out;
}

std::vector<rating::SkillRating> skills_of(const PopulationState& pop) {
  std::vector<rating::SkillRating> out;
  out.reserve(pop.members.size());
  for (const Individual& ind : pop.members) out.push_back(ind.genome.skill);
  return out;
}

double mean(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Shifts fitness so the worst individual sits at zero.
std::vector<double> shift_nonnegative(std::span<const double> raw) {
  const double lo = *std::min_element(raw.begin(), raw.end());
  std::vector<double> out(raw.begin(), raw.end());
  for (double& f : out) f -= lo;
  return out;
}

PopulationSummary summarize(const std::vector<Genome>& rated, const PopulationState& pop,
                            std::span<const double> fitness, const std::vector<Species>& species) {
  PopulationSummary s;
  s.best_fitness = *std::max_element(fitness.begin(), fitness.end());
  s.mean_fitness = mean(fitness);
  std::vector<double> ratings;
  std::vector<double> params;
  for (const Genome& g : rated) ratings.push_back(g.skill.rating);
  for (const Individual& ind : pop.members)
    params.push_back(static_cast<double>(metrics::parameter_count(ind.network)));
  s.mean_rating = mean(ratings);
  s.max_rating = *std::max_element(ratings.begin(), ratings.end());
  s.mean_parameters = mean(params);
  s.species_count = species.size();
  for (const Species& sp : species) s.species_sizes.push_back(sp.members.size());
  return s;
}

// Index of the member with the highest shared fitness; first wins ties.
std::size_t species_champion(const Species& sp, std::span<const double> shared) {
  std::size_t best = sp.members.front();
  for (std::size_t idx : sp.members)
    if (shared[idx] > shared[best]) best = idx;
  return best;
}

struct Reproduction {
  PopulationState next;
  std::vector<Species> species;
};

Reproduction reproduce(const PopulationState& pop, const std::vector<Genome>& rated,
                       std::span<const double> raw_fitness, const CoevolutionConfig& config,
                       std::uint64_t& next_id, Rng& rng) {
  const EvolutionConfig& evo = config.evolution;
  Reproduction out;
  out.species = speciate(rated, pop.threshold, pop.representatives);
  const std::vector<double> oriented = shift_nonnegative(raw_fitness);
  const SharedFitness sharing = fitness_sharing(out.species, oriented, evo.pop_size);

  out.next.threshold = adjust_threshold(pop.threshold, out.species.size(), evo.species_target);
  for (const Species& sp : out.species) out.next.representatives.push_back(sp.representative);

  for (std::size_t s = 0; s < out.species.size(); ++s) {
    const Species& sp = out.species[s];
    for (std::size_t slot = 0; slot < sharing.quotas[s]; ++slot) {
      Individual child;
      std::size_t parent;
      if (slot == 0) {
        // Elite: the champion survives unmutated.
        parent = species_champion(sp, sharing.individual);
        child.genome = rated[parent];
      } else {
        parent = tournament_select(sp, sharing.individual, evo.tournament_k, rng);
        child.genome = genome::mutate(rated[parent], config.mutation, rng);
      }
      child.network = evo.inherit_weights
                          ? genome::decode_inheriting(child.genome, config.shape,
                                                      pop.members[parent].network, rng)
                          : genome::decode(child.genome, config.shape, rng);
      child.genome.parent_id = rated[parent].lineage_id;
      child.genome.lineage_id = next_id++;
      out.next.members.push_back(std::move(child));
    }
  }
  return out;
}

Individual make_founder(Role role, const CoevolutionConfig& config, std::uint64_t id, Rng& rng) {
  Individual ind;
  ind.genome.role = role;
  ind.genome.genes.push_back(genome::random_gene(config.mutation, rng));
  ind.genome.skill = config.rating.initial;
  ind.genome.lineage_id = id;
  ind.network = genome::decode(ind.genome, config.shape, rng);
  return ind;
}

Individual make_fixed(Role role, const CoevolutionConfig& config, std::uint64_t id, Rng& rng) {
  Individual ind;
  ind.genome.role = role;
  const auto act =
      role == Role::Generator ? netcore::Activation::ReLU : netcore::Activation::LeakyReLU;
  for (int k = 0; k < 4; ++k) {
    genome::Gene gene;
    gene.units = kFixedHiddenUnits;
    gene.activation = act;
    gene.id = static_cast<std::uint64_t>(k + 1);
    ind.genome.genes.push_back(gene);
  }
  ind.genome.skill = config.rating.initial;
  ind.genome.lineage_id = id;
  ind.network = genome::decode(ind.genome, config.shape, rng);
  return ind;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(FitnessMode m) {
  switch (m) {
    case FitnessMode::SkillRating:
      return "skill";
    case FitnessMode::FidAndLoss:
      return "fid";
    case FitnessMode::Random:
      return "random";
  }
  return "skill";
}

void EvolutionConfig::validate() const {
  if (generations < 0) throw InvalidInput("generations must be >= 0");
  if (pop_size < 2) throw InvalidInput("pop_size must be >= 2");
  if (species_target < 1) throw InvalidInput("species_target must be >= 1");
  if (tournament_k < 1) throw InvalidInput("tournament_k must be >= 1");
  if (batches_per_pairing < 1) throw InvalidInput("batches_per_pairing must be >= 1");
  if (fid_samples < 2) throw InvalidInput("fid_samples must be >= 2");
  if (!(initial_threshold > 0.0)) throw InvalidInput("initial_threshold must be > 0");
}

void CoevolutionConfig::validate() const {
  evolution.validate();
  train.validate();
  rating.validate();
  mutation.validate();
  if (shape.data_dim == 0) throw InvalidInput("data_dim must be positive");
  if (shape.latent_dim != train.latent_dim)
    throw InvalidInput("network latent_dim must equal the training latent_dim");
}

std::vector<Species> speciate(std::span<const Genome> population, double threshold,
                              std::span<const Genome> representatives) {
  if (population.empty()) throw InvalidInput("speciate: empty population");
  std::vector<Species> species;
  for (const Genome& rep : representatives) species.push_back(Species{rep, {}, 0.0});
  for (std::size_t i = 0; i < population.size(); ++i) {
    bool placed = false;
    for (Species& sp : species) {
      if (genome::genome_distance(sp.representative, population[i]) <= threshold) {
        sp.members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) species.push_back(Species{population[i], {i}, 0.0});
  }
  std::erase_if(species, [](const Species& sp) { return sp.members.empty(); });
  return species;
}

double adjust_threshold(double current, std::size_t species_count, std::size_t target) {
  double next = current;
  if (species_count > target)
    next = current * 1.1;
  else if (species_count < target)
    next = current * 0.9;
  return std::max(next, kMinThreshold);
}

std::vector<std::size_t> allocate_offspring(std::span<const double> scores, std::size_t total) {
  if (scores.empty()) throw InvalidInput("allocate_offspring: no species");
  for (double s : scores)
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidInput("allocate_offspring: negative score");
  double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
  std::vector<double> weights(scores.begin(), scores.end());
  if (sum <= 0.0) {
    std::fill(weights.begin(), weights.end(), 1.0);
    sum = static_cast<double>(weights.size());
  }

  std::vector<std::size_t> quotas(weights.size());
  std::vector<double> remainders(weights.size());
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < weights.size(); ++s) {
    const double exact = static_cast<double>(total) * weights[s] / sum;
    quotas[s] = static_cast<std::size_t>(std::floor(exact));
    remainders[s] = exact - static_cast<double>(quotas[s]);
    assigned += quotas[s];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size(), ++assigned)
    ++quotas[order[k]];
  return quotas;
}

SharedFitness fitness_sharing(std::vector<Species>& species, std::span<const double> raw,
                              std::size_t pop_size) {
  SharedFitness out;
  out.individual.assign(raw.size(), 0.0);
  std::vector<double> scores;
  for (Species& sp : species) {
    const double size = static_cast<double>(sp.members.size());
    sp.shared_fitness = 0.0;
    for (std::size_t idx : sp.members) {
      if (raw[idx] < 0.0) throw InvalidInput("fitness_sharing: raw fitness must be nonnegative");
      out.individual[idx] = raw[idx] / size;
      sp.shared_fitness += out.individual[idx];
    }
    scores.push_back(sp.shared_fitness);
  }
  out.quotas = allocate_offspring(scores, pop_size);
  return out;
}

std::size_t tournament_select(const Species& species, std::span<const double> shared,
                              std::size_t k, Rng& rng) {
  if (species.members.empty()) throw InvalidInput("tournament_select: empty species");
  std::vector<std::size_t> pool = species.members;
  const std::size_t draws = std::clamp<std::size_t>(k, 1, pool.size());
  // Partial Fisher-Yates: the first `draws` entries become the sample.
  for (std::size_t t = 0; t < draws; ++t) {
    const std::size_t pick = t + uniform_index(rng, pool.size() - t);
    std::swap(pool[t], pool[pick]);
  }
  double best = shared[pool[0]];
  for (std::size_t t = 1; t < draws; ++t) best = std::max(best, shared[pool[t]]);
  std::vector<std::size_t> tied;
  for (std::size_t t = 0; t < draws; ++t)
    if (shared[pool[t]] == best) tied.push_back(pool[t]);
  return tied.size() == 1 ? tied.front() : tied[uniform_index(rng, tied.size())];
}

CoevolutionState initialize(const CoevolutionConfig& config, Rng& rng) {
  config.validate();
  CoevolutionState state;
  for (std::size_t i = 0; i < config.evolution.pop_size; ++i)
    state.generators.members.push_back(make_founder(Role::Generator, config, state.next_id++, rng));
  for (std::size_t j = 0; j < config.evolution.pop_size; ++j)
    state.discriminators.members.push_back(
        make_founder(Role::Discriminator, config, state.next_id++, rng));
  state.generators.threshold = config.evolution.initial_threshold;
  state.discriminators.threshold = config.evolution.initial_threshold;
  return state;
}

CoevolutionState initialize_fixed(const CoevolutionConfig& config, Rng& rng) {
  config.validate();
  CoevolutionState state;
  state.generators.members.push_back(make_fixed(Role::Generator, config, state.next_id++, rng));
  state.discriminators.members.push_back(
      make_fixed(Role::Discriminator, config, state.next_id++, rng));
  return state;
}

double generator_fid(const netcore::NetworkParams& generator, const CoevolutionConfig& config,
                     const Environment& env, Rng& rng) {
  const Batch z =
      netcore::latent_batch(config.evolution.fid_samples, config.train.latent_dim, rng);
  return metrics::frechet_distance(env.reference, metrics::fit_gaussian(netcore::forward(generator, z)));
}

GenerationResult run_generation(const CoevolutionState& state, const CoevolutionConfig& config,
                                Environment& env, Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  const EvolutionConfig& evo = config.evolution;
  PopulationState gens = state.generators;
  PopulationState discs = state.discriminators;
  const std::size_t ng = gens.members.size();
  const std::size_t nd = discs.members.size();

  GenerationResult result;
  std::vector<std::vector<match::PairOutcome>> outcomes(ng, std::vector<match::PairOutcome>(nd));
  std::vector<double> d_loss(nd, 0.0);
  for (std::size_t i = 0; i < ng; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      netcore::NetworkParams& g = gens.members[i].network;
      netcore::NetworkParams& d = discs.members[j].network;
      netcore::train_pair(g, d, env.data, config.train, evo.batches_per_pairing, rng);
      const match::PairEvaluation eval = match::evaluate_pair(g, d, env.data, config.train, rng);
      outcomes[i][j] = eval.outcome;
      d_loss[j] += eval.discriminator_loss / static_cast<double>(ng);
      result.pairs.push_back({state.generation, gens.members[i].genome.lineage_id,
                              discs.members[j].genome.lineage_id, eval.outcome});
    }
  }

  // Ratings are tracked in every fitness mode.
  const match::RoundRecords records =
      match::collect_records(outcomes, skills_of(gens), skills_of(discs));
  result.rated_generators = genomes_of(gens);
  result.rated_discriminators = genomes_of(discs);
  const std::vector<double> g_ratings =
      match::assign_skill_fitness(result.rated_generators, records.generators, config.rating);
  const std::vector<double> d_ratings =
      match::assign_skill_fitness(result.rated_discriminators, records.discriminators, config.rating);

  for (const Individual& ind : gens.members)
    result.generator_fid.push_back(generator_fid(ind.network, config, env, rng));

  std::vector<double> g_fitness;
  std::vector<double> d_fitness;
  switch (evo.fitness_mode) {
    case FitnessMode::SkillRating:
      g_fitness = g_ratings;
      d_fitness = d_ratings;
      break;
    case FitnessMode::FidAndLoss:
      for (double f : result.generator_fid) g_fitness.push_back(-f);
      for (double l : d_loss) d_fitness.push_back(-l);
      break;
    case FitnessMode::Random:
      for (std::size_t i = 0; i < ng; ++i) g_fitness.push_back(uniform01(rng));
      for (std::size_t j = 0; j < nd; ++j) d_fitness.push_back(uniform01(rng));
      break;
  }

  result.next.generation = state.generation + 1;
  result.next.next_id = state.next_id;
  Reproduction g_next =
      reproduce(gens, result.rated_generators, g_fitness, config, result.next.next_id, rng);
  Reproduction d_next =
      reproduce(discs, result.rated_discriminators, d_fitness, config, result.next.next_id, rng);

  GenerationReport& report = result.report;
  report.generation = state.generation;
  report.generators = summarize(result.rated_generators, gens, g_fitness, g_next.species);
  report.discriminators = summarize(result.rated_discriminators, discs, d_fitness, d_next.species);
  const auto best = static_cast<std::size_t>(
      std::min_element(result.generator_fid.begin(), result.generator_fid.end()) -
      result.generator_fid.begin());
  report.best_fid = result.generator_fid[best];
  report.best_fid_rating = result.rated_generators[best].skill.rating;
  report.best_fid_id = result.rated_generators[best].lineage_id;

  result.next.generators = std::move(g_next.next);
  result.next.discriminators = std::move(d_next.next);
  report.wall_seconds = seconds_since(start);
  return result;
}

GenerationReport initial_report(const CoevolutionState& state, const CoevolutionConfig& config,
                                const Environment& env, Rng& rng) {
  GenerationReport report;
  report.generation = state.generation;
  auto fill = [](const PopulationState& pop) {
    PopulationSummary s;
    std::vector<double> ratings;
    std::vector<double> params;
    for (const Individual& ind : pop.members) {
      ratings.push_back(ind.genome.skill.rating);
      params.push_back(static_cast<double>(metrics::parameter_count(ind.network)));
    }
    s.mean_rating = mean(ratings);
    s.max_rating = *std::max_element(ratings.begin(), ratings.end());
    s.mean_parameters = mean(params);
    return s;
  };
  report.generators = fill(state.generators);
  report.discriminators = fill(state.discriminators);
  report.best_fid = INFINITY;
  for (const Individual& ind : state.generators.members) {
    const double f = generator_fid(ind.network, config, env, rng);
    if (f < report.best_fid) {
      report.best_fid = f;
      report.best_fid_rating = ind.genome.skill.rating;
      report.best_fid_id = ind.genome.lineage_id;
    }
  }
  return report;
}

GenerationResult run_fixed_generation(const CoevolutionState& state,
                                      const CoevolutionConfig& config, Environment& env, Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  const EvolutionConfig& evo = config.evolution;
  GenerationResult result;
  result.next = state;
  result.next.generation = state.generation + 1;
  Individual& g = result.next.generators.members.at(0);
  Individual& d = result.next.discriminators.members.at(0);

  const int batches = evo.batches_per_pairing * static_cast<int>(evo.pop_size);
  netcore::train_pair(g.network, d.network, env.data, config.train, batches, rng);
  const match::PairEvaluation eval = match::evaluate_pair(g.network, d.network, env.data,
                                                          config.train, rng);
  result.pairs.push_back({state.generation, g.genome.lineage_id, d.genome.lineage_id, eval.outcome});

  const std::vector<rating::MatchRecord> g_records{{eval.outcome.g_win_rate, d.genome.skill}};
  const std::vector<rating::MatchRecord> d_records{{eval.outcome.d_win_rate, g.genome.skill}};
  const rating::SkillRating g_skill = rating::update_rating(g.genome.skill, g_records, config.rating);
  const rating::SkillRating d_skill = rating::update_rating(d.genome.skill, d_records, config.rating);
  g.genome.skill = g_skill;
  d.genome.skill = d_skill;
  result.rated_generators = {g.genome};
  result.rated_discriminators = {d.genome};
  result.generator_fid = {generator_fid(g.network, config, env, rng)};

  const double g_fit = -result.generator_fid[0];
  const double d_fit = -eval.discriminator_loss;
  GenerationReport& report = result.report;
  report.generation = state.generation;
  report.generators = summarize(result.rated_generators, result.next.generators,
                                std::span<const double>(&g_fit, 1), {});
  report.discriminators = summarize(result.rated_discriminators, result.next.discriminators,
                                    std::span<const double>(&d_fit, 1), {});
  report.best_fid = result.generator_fid[0];
  report.best_fid_rating = g_skill.rating;
  report.best_fid_id = g.genome.lineage_id;
  report.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace coevo::coevolution
