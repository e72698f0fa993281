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

#include "coevo/rating.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "coevo/errors.hpp"

namespace coevo::rating {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string("non-finite ") + what);
}

void check_rating(const SkillRating& s, const char* who) {
  require_finite(s.rating, who);
  require_finite(s.deviation, who);
  require_finite(s.volatility, who);
  if (s.deviation < 0.0) throw InvalidInput(std::string(who) + ": negative deviation");
  if (s.volatility <= 0.0) throw InvalidInput(std::string(who) + ": volatility must be > 0");
}

double to_mu(double rating) { return (rating - kBaseRating) / kGlickoScale; }
double to_phi(double deviation) { return deviation / kGlickoScale; }

// Solves f(x) = 0 for x = ln(sigma'^2) with the Illinois variant of
// regula falsi, following Glickman's step 5.
double solve_volatility(double sigma, double phi, double v, double delta,
                        const RatingSystemConfig& config) {
  const double a = std::log(sigma * sigma);
  const double tau2 = config.tau * config.tau;
  const double phi2 = phi * phi;
  auto f = [&](double x) {
    const double ex = std::exp(x);
    const double denom = phi2 + v + ex;
    return ex * (delta * delta - phi2 - v - ex) / (2.0 * denom * denom) - (x - a) / tau2;
  };

  double lo = a;
  double hi;
  if (delta * delta > phi2 + v) {
    hi = std::log(delta * delta - phi2 - v);
  } else {
    int k = 1;
    while (f(a - k * config.tau) < 0.0) {
      if (++k > config.max_iterations)
        throw ConvergenceError("volatility bracket not found");
    }
    hi = a - k * config.tau;
  }

  double f_lo = f(lo);
  double f_hi = f(hi);
  int iterations = 0;
  while (std::abs(hi - lo) > config.convergence_tolerance) {
    if (++iterations > config.max_iterations)
      throw ConvergenceError("volatility iteration exceeded " +
                             std::to_string(config.max_iterations) + " steps");
    const double c = lo + (lo - hi) * f_lo / (f_hi - f_lo);
    const double f_c = f(c);
    if (f_c * f_hi <= 0.0) {
      lo = hi;
      f_lo = f_hi;
    } else {
      f_lo /= 2.0;
    }
    hi = c;
    f_hi = f_c;
  }
  return std::exp(lo / 2.0);
}

}  // namespace

void RatingSystemConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("tau must be > 0");
  if (!(convergence_tolerance > 0.0)) throw InvalidInput("convergence_tolerance must be > 0");
  if (max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
  check_rating(initial, "initial rating");
}

SkillRating initial_rating() { return SkillRating{1500.0, 350.0, 0.06}; }

double deviation_weight(double phi) {
  return 1.0 / std::sqrt(1.0 + 3.0 * phi * phi / (std::numbers::pi * std::numbers::pi));
}

double expected_score(double mu, double opponent_mu, double opponent_phi) {
  return 1.0 / (1.0 + std::exp(-deviation_weight(opponent_phi) * (mu - opponent_mu)));
}

SkillRating update_rating(const SkillRating& player, std::span<const MatchRecord> matches,
                          const RatingSystemConfig& config) {
  config.validate();
  check_rating(player, "player");

  const double mu = to_mu(player.rating);
  const double phi = to_phi(player.deviation);
  const double sigma = player.volatility;

  if (matches.empty()) {
    return {player.rating, kGlickoScale * std::sqrt(phi * phi + sigma * sigma), sigma};
  }

  double inv_v = 0.0;
  double score_sum = 0.0;  // sum of g(phi_j) (s_j - E_j)
  for (const MatchRecord& m : matches) {
    check_rating(m.opponent, "opponent");
    require_finite(m.score, "score");
    if (m.score < 0.0 || m.score > 1.0) throw InvalidInput("score outside [0, 1]");
    const double opp_phi = to_phi(m.opponent.deviation);
    const double g = deviation_weight(opp_phi);
    const double e = expected_score(mu, to_mu(m.opponent.rating), opp_phi);
    inv_v += g * g * e * (1.0 - e);
    score_sum += g * (m.score - e);
  }
  // Opponents so far apart that every expected score saturates carry no
  // information; treat the period as empty.
  if (!(inv_v > 0.0)) {
    return {player.rating, kGlickoScale * std::sqrt(phi * phi + sigma * sigma), sigma};
  }
  const double v = 1.0 / inv_v;
  const double delta = v * score_sum;

  const double new_sigma = solve_volatility(sigma, phi, v, delta, config);
  const double phi_star = std::sqrt(phi * phi + new_sigma * new_sigma);
  const double new_phi = 1.0 / std::sqrt(1.0 / (phi_star * phi_star) + 1.0 / v);
  const double new_mu = mu + new_phi * new_phi * score_sum;

  SkillRating out{kGlickoScale * new_mu + kBaseRating, kGlickoScale * new_phi, new_sigma};
  if (!std::isfinite(out.rating) || !std::isfinite(out.deviation) || !std::isfinite(out.volatility))
    throw NumericalError("rating update produced non-finite values");
  return out;
}

}  // namespace coevo::rating
