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

// Match outcomes between generators and discriminators, and skill-rating
// fitness.

#ifndef COEVO_MATCH_HPP_
#define COEVO_MATCH_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "coevo/genome.hpp"
#include "coevo/netcore.hpp"
#include "coevo/rating.hpp"

namespace coevo::match {

// Outputs above this count as "real", below as "fake".
inline constexpr double kDecisionThreshold = 0.5;

struct PairOutcome {
  double d_win_rate = 0.0;
  double g_win_rate = 1.0;  // always 1 - d_win_rate
  std::size_t m = 0;        // real samples
  std::size_t n = 0;        // fake samples
  std::size_t correct = 0;  // correct threshold decisions
};

// Fraction of correct threshold decisions: reals scored strictly above 0.5
// plus fakes scored strictly below 0.5, over m + n. An output of exactly 0.5
// is a mistake on either side.
PairOutcome discriminator_win_rate(std::span<const double> d_real_outputs,
                                   std::span<const double> d_fake_outputs);

struct PairEvaluation {
  PairOutcome outcome;
  // Discriminator loss on the evaluation batches.
  double discriminator_loss = 0.0;
};

// One fresh real batch and one fresh generated batch of config.batch_size
// rows each, scored by the discriminator.
PairEvaluation evaluate_pair(const netcore::NetworkParams& generator,
                             const netcore::NetworkParams& discriminator,
                             netcore::DataSampler& data, const netcore::TrainConfig& config,
                             Rng& rng);

// Match records of an all-vs-all round. outcomes[i][j] is generator i
// against discriminator j. Opponent snapshots come from the given skills,
// which must be the ratings at the start of the period.
struct RoundRecords {
  std::vector<std::vector<rating::MatchRecord>> generators;
  std::vector<std::vector<rating::MatchRecord>> discriminators;
};

RoundRecords collect_records(const std::vector<std::vector<PairOutcome>>& outcomes,
                             std::span<const rating::SkillRating> generator_skills,
                             std::span<const rating::SkillRating> discriminator_skills);

// Replaces every individual's skill by its end-of-period update and returns
// the new ratings as fitness values. All updates are computed before any is
// committed.
std::vector<double> assign_skill_fitness(std::vector<genome::Genome>& population,
                                         const std::vector<std::vector<rating::MatchRecord>>& records,
                                         const rating::RatingSystemConfig& config);

}  // namespace coevo::match

#endif  // COEVO_MATCH_HPP_
