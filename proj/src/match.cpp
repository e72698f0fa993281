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

#include "coevo/match.hpp"

#include <string>

#include "coevo/errors.hpp"

namespace coevo::match {

PairOutcome discriminator_win_rate(std::span<const double> d_real_outputs,
                                   std::span<const double> d_fake_outputs) {
  if (d_real_outputs.empty() || d_fake_outputs.empty())
    throw InvalidInput("discriminator_win_rate: empty output array");
  std::size_t real_hits = 0;
  for (double p : d_real_outputs) real_hits += p > kDecisionThreshold ? 1 : 0;
  std::size_t fake_hits = 0;
  for (double p : d_fake_outputs) fake_hits += p < kDecisionThreshold ? 1 : 0;

  PairOutcome out;
  out.m = d_real_outputs.size();
  out.n = d_fake_outputs.size();
  out.correct = real_hits + fake_hits;
  out.d_win_rate = static_cast<double>(out.correct) / static_cast<double>(out.m + out.n);
  out.g_win_rate = 1.0 - out.d_win_rate;
  return out;
}

PairEvaluation evaluate_pair(const netcore::NetworkParams& generator,
                             const netcore::NetworkParams& discriminator,
                             netcore::DataSampler& data, const netcore::TrainConfig& config,
                             Rng& rng) {
  const Batch real = data.sample(config.batch_size);
  const Batch fake =
      netcore::forward(generator, netcore::latent_batch(config.batch_size, config.latent_dim, rng));
  const Batch d_real = netcore::forward(discriminator, real);
  const Batch d_fake = netcore::forward(discriminator, fake);
  PairEvaluation eval;
  eval.outcome = discriminator_win_rate(d_real.values(), d_fake.values());
  eval.discriminator_loss = netcore::discriminator_loss(d_real, d_fake);
  return eval;
}

RoundRecords collect_records(const std::vector<std::vector<PairOutcome>>& outcomes,
                             std::span<const rating::SkillRating> generator_skills,
                             std::span<const rating::SkillRating> discriminator_skills) {
  if (outcomes.size() != generator_skills.size())
    throw InvalidInput("collect_records: outcome rows != generator count");
  RoundRecords records;
  records.generators.resize(generator_skills.size());
  records.discriminators.resize(discriminator_skills.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].size() != discriminator_skills.size())
      throw InvalidInput("collect_records: outcome columns != discriminator count");
    for (std::size_t j = 0; j < outcomes[i].size(); ++j) {
      const PairOutcome& o = outcomes[i][j];
      records.generators[i].push_back({o.g_win_rate, discriminator_skills[j]});
      records.discriminators[j].push_back({o.d_win_rate, generator_skills[i]});
    }
  }
  return records;
}

std::vector<double> assign_skill_fitness(std::vector<genome::Genome>& population,
                                         const std::vector<std::vector<rating::MatchRecord>>& records,
                                         const rating::RatingSystemConfig& config) {
  if (records.size() != population.size())
    throw InvalidInput("assign_skill_fitness: one record list per individual required");
  std::vector<rating::SkillRating> updated;
  updated.reserve(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (records[i].empty())
      throw InvalidInput("assign_skill_fitness: individual " + std::to_string(i) +
                         " played no matches");
    updated.push_back(rating::update_rating(population[i].skill, records[i], config));
  }
  std::vector<double> fitness;
  fitness.reserve(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    population[i].skill = updated[i];
    fitness.push_back(updated[i].rating);
  }
  return fitness;
}

}  // namespace coevo::match
