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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "coevo/errors.hpp"
#include "coevo/harness.hpp"
#include "coevo/match.hpp"

using namespace coevo;
using rating::MatchRecord;
using rating::SkillRating;

TEST_SUITE("match") {
  TEST_CASE("perfect discriminator") {
    const std::vector<double> real(5, 0.9), fake(7, 0.1);
    const auto o = match::discriminator_win_rate(real, fake);
    CHECK(o.d_win_rate == 1.0);
    CHECK(o.g_win_rate == 0.0);
    CHECK(o.m == 5);
    CHECK(o.n == 7);
  }

  TEST_CASE("mixed outputs, 0.5 counts as a mistake") {
    const std::vector<double> real{0.9, 0.6, 0.4, 0.2}, fake{0.3, 0.7, 0.5, 0.1};
    const auto o = match::discriminator_win_rate(real, fake);
    CHECK(o.correct == 4);
    CHECK(o.d_win_rate == 0.5);
  }

  TEST_CASE("all outputs exactly at the threshold") {
    const std::vector<double> half(6, 0.5);
    const auto o = match::discriminator_win_rate(half, half);
    CHECK(o.d_win_rate == 0.0);
    CHECK(o.g_win_rate == 1.0);
  }

  TEST_CASE("empty arrays are rejected") {
    const std::vector<double> some{0.7};
    CHECK_THROWS_AS(match::discriminator_win_rate({}, some), InvalidInput);
    CHECK_THROWS_AS(match::discriminator_win_rate(some, {}), InvalidInput);
  }

  TEST_CASE("win rate is a multiple of 1/(m+n) and complements exactly") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 300; ++t) {
      std::vector<double> real(1 + t % 9), fake(1 + t % 5);
      for (double& v : real) v = u(rng);
      for (double& v : fake) v = u(rng);
      const auto o = match::discriminator_win_rate(real, fake);
      const double k = o.d_win_rate * static_cast<double>(o.m + o.n);
      CHECK(k == doctest::Approx(std::round(k)).epsilon(1e-12));
      CHECK(o.d_win_rate + o.g_win_rate == 1.0);
    }
  }

  TEST_CASE("evaluate_pair draws one batch of each kind") {
    Rng rng(9);
    auto data = harness::make_dataset(harness::DatasetKind::Ring2D, rng);
    netcore::TrainConfig cfg;
    const auto g = genome::decode(
        genome::Genome{{{64, netcore::Activation::ReLU, 1}}, genome::Role::Generator, {}, 1, 0},
        {2, cfg.latent_dim}, rng);
    const auto d = genome::decode(
        genome::Genome{{{64, netcore::Activation::ReLU, 2}}, genome::Role::Discriminator, {}, 2, 0},
        {2, cfg.latent_dim}, rng);
    const auto e1 = match::evaluate_pair(g, d, *data, cfg, rng);
    CHECK(e1.outcome.m + e1.outcome.n == 128);
    CHECK(e1.outcome.d_win_rate >= 0.0);
    CHECK(e1.outcome.d_win_rate <= 1.0);

    Rng r1(44), r2(44);
    harness::SyntheticDataset s1(harness::DatasetKind::Ring2D, Rng(3));
    harness::SyntheticDataset s2(harness::DatasetKind::Ring2D, Rng(3));
    const auto a = match::evaluate_pair(g, d, s1, cfg, r1);
    const auto b = match::evaluate_pair(g, d, s2, cfg, r2);
    CHECK(a.outcome.d_win_rate == b.outcome.d_win_rate);
    CHECK(a.discriminator_loss == b.discriminator_loss);
  }

  TEST_CASE("draw between equals leaves ratings unchanged") {
    std::vector<genome::Genome> pop(1);
    const std::vector<std::vector<MatchRecord>> records{{{0.5, pop[0].skill}}};
    const auto fitness = match::assign_skill_fitness(pop, records, rating::RatingSystemConfig{});
    CHECK(std::abs(pop[0].skill.rating - 1500.0) < 1e-9);
    CHECK(fitness[0] == pop[0].skill.rating);
  }

  TEST_CASE("all-vs-all round gives each individual pop_size records") {
    const std::size_t pop = 10;
    std::vector<std::vector<match::PairOutcome>> outcomes(pop, std::vector<match::PairOutcome>(pop));
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> k(0, 128);
    for (auto& row : outcomes)
      for (auto& o : row) {
        const std::vector<double> real(64, 0.9);
        std::vector<double> fake(64, 0.9);
        const int fooled = k(rng) / 2;
        for (int t = 0; t < fooled; ++t) fake[static_cast<std::size_t>(t)] = 0.1;
        o = match::discriminator_win_rate(real, fake);
      }
    const std::vector<SkillRating> skills(pop);
    const auto records = match::collect_records(outcomes, skills, skills);
    for (const auto& r : records.generators) CHECK(r.size() == pop);
    for (const auto& r : records.discriminators) CHECK(r.size() == pop);
    // Generator and discriminator scores of one match sum to 1.
    for (std::size_t i = 0; i < pop; ++i)
      for (std::size_t j = 0; j < pop; ++j)
        CHECK(records.generators[i][j].score + records.discriminators[j][i].score == 1.0);
  }

  TEST_CASE("winning everything beats losing everything") {
    std::vector<genome::Genome> pop(2);
    const std::vector<SkillRating> opponents(10);
    std::vector<std::vector<MatchRecord>> records(2);
    for (const auto& o : opponents) {
      records[0].push_back({1.0, o});
      records[1].push_back({0.0, o});
    }
    match::assign_skill_fitness(pop, records, rating::RatingSystemConfig{});
    CHECK(pop[0].skill.rating > pop[1].skill.rating);
  }

  TEST_CASE("updates use period-start snapshots: order does not matter") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0), r(1300.0, 1700.0);
    const std::size_t n = 6;
    std::vector<genome::Genome> pop(n);
    for (auto& g : pop) g.skill = {r(rng), 120.0, 0.06};
    std::vector<std::vector<MatchRecord>> records(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) records[i].push_back({u(rng), pop[j].skill});

    std::vector<genome::Genome> forward_pop = pop;
    match::assign_skill_fitness(forward_pop, records, rating::RatingSystemConfig{});

    std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    std::vector<genome::Genome> shuffled;
    std::vector<std::vector<MatchRecord>> shuffled_records;
    for (std::size_t p : perm) {
      shuffled.push_back(pop[p]);
      shuffled_records.push_back(records[p]);
    }
    match::assign_skill_fitness(shuffled, shuffled_records, rating::RatingSystemConfig{});
    for (std::size_t k = 0; k < n; ++k) CHECK(shuffled[k].skill == forward_pop[perm[k]].skill);
  }

  TEST_CASE("every individual must have played") {
    std::vector<genome::Genome> pop(2);
    std::vector<std::vector<MatchRecord>> records(2);
    records[0].push_back({1.0, SkillRating{}});
    CHECK_THROWS_AS(match::assign_skill_fitness(pop, records, rating::RatingSystemConfig{}),
                    InvalidInput);
    CHECK_THROWS_AS(match::assign_skill_fitness(pop, {records[0]}, rating::RatingSystemConfig{}),
                    InvalidInput);
  }
}
