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

// Glicko-2 skill ratings.
//
// Ratings are presented on the Glicko scale (1500-centered) and converted to
// the Glicko-2 scale internally. A rating period collects every match a player
// took part in; the update reads opponent snapshots taken at the start of the
// period, so all players of a period can be updated independently and
// committed together.

#ifndef COEVO_RATING_HPP_
#define COEVO_RATING_HPP_

#include <span>

namespace coevo::rating {

// Converts between the Glicko and Glicko-2 scales.
inline constexpr double kGlickoScale = 173.7178;
inline constexpr double kBaseRating = 1500.0;

struct SkillRating {
  double rating = kBaseRating;
  double deviation = 350.0;
  double volatility = 0.06;

  friend bool operator==(const SkillRating&, const SkillRating&) = default;
};

struct RatingSystemConfig {
  // Constrains the change in volatility over time.
  double tau = 1.0;
  double convergence_tolerance = 1e-6;
  int max_iterations = 100;
  // Rating given to founders of a run.
  SkillRating initial;

  void validate() const;
};

// One game of a rating period: the player's fractional score in [0, 1] and
// the opponent's rating as it stood when the period began.
struct MatchRecord {
  double score = 0.5;
  SkillRating opponent;
};

SkillRating initial_rating();

// Expected score of a player with Glicko-2 mean `mu` against an opponent with
// mean `opponent_mu` and deviation `opponent_phi`.
double expected_score(double mu, double opponent_mu, double opponent_phi);

// Glickman's g(phi) weighting of an opponent's deviation.
double deviation_weight(double phi);

// End-of-period update. An empty period only inflates the deviation.
// Throws InvalidInput on non-finite or out-of-range values and
// ConvergenceError when the volatility iteration exceeds its cap.
SkillRating update_rating(const SkillRating& player, std::span<const MatchRecord> matches,
                          const RatingSystemConfig& config);

}  // namespace coevo::rating

#endif  // COEVO_RATING_HPP_
