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

// Experiment orchestration: the four arms, multi-seed runs, and CSV output.

#ifndef COEVO_HARNESS_HPP_
#define COEVO_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/coevolution.hpp"
#include "coevo/dataset.hpp"
#include "coevo/rating.hpp"

namespace coevo::harness {

enum class Arm { CoeganSkill, CoeganFid, FixedBaseline, RandomSearch };

inline constexpr Arm kAllArms[] = {Arm::CoeganSkill, Arm::CoeganFid, Arm::FixedBaseline,
                                   Arm::RandomSearch};

std::string_view to_string(Arm a);
Arm parse_arm(std::string_view name);

struct ExperimentConfig {
  Arm arm = Arm::CoeganSkill;
  DatasetKind dataset = DatasetKind::Ring2D;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  coevolution::CoevolutionConfig coevolution;
  std::filesystem::path output_dir = "results";
  // Seeds run concurrently on up to this many threads.
  int jobs = 1;

  void validate() const;
};

// Copies config.coevolution with the arm's fitness mode and the dataset's
// width filled in.
coevolution::CoevolutionConfig resolve(const ExperimentConfig& config);

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<coevolution::GenerationReport> reports;
  std::vector<coevolution::PairRecord> pairs;
};

// Called after every generation with the state it started from.
using GenerationObserver = std::function<void(const coevolution::CoevolutionState& before,
                                              const coevolution::GenerationResult& result)>;

SeedRun run_seed(const ExperimentConfig& config, std::uint64_t seed,
                 const GenerationObserver& observer = {});

struct CorrelationRow {
  std::uint64_t seed = 0;
  std::size_t generations = 0;
  // Unset when the correlation is undefined (fewer than two generations or
  // a constant series).
  std::optional<double> pearson;
  std::optional<double> spearman;
};

// Best Fréchet distance against the best generator's rating, across
// generations of one run.
CorrelationRow fid_skill_correlation(const SeedRun& run);

struct ExperimentResult {
  std::vector<SeedRun> runs;
  std::vector<CorrelationRow> correlations;
  std::vector<std::filesystem::path> files;
};

// Writes, under output_dir:
//   gen_report_<arm>_<seed>.csv, pair_outcomes_<arm>_<seed>.csv,
//   timing_<arm>_<seed>.csv, summary_<arm>.csv, correlation_<arm>.csv.
// Everything except the timing files is a pure function of the config.
// With jobs > 1 the observer is called from several threads at once.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const GenerationObserver& observer = {});

// Output directory from the command line, else $COEVO_SKILL_OUT, else
// "results".
std::filesystem::path default_output_dir(const std::string& from_flag);

struct CompareRow {
  std::string arm;
  std::size_t generation = 0;
  double best_fid_mean = 0.0;
  double best_fid_ci95 = 0.0;
  double skill_mean = 0.0;
};

// Final-generation row of each summary file, sorted by mean best Fréchet
// distance (ascending).
std::vector<CompareRow> compare_summaries(const std::vector<std::filesystem::path>& summaries);
void print_comparison(const std::vector<CompareRow>& rows, std::ostream& out);

struct RatedPlayer {
  std::string player;
  rating::SkillRating before;
  rating::SkillRating after;
  std::size_t matches = 0;
};

// Reads a match CSV with header
//   player,player_rating,player_deviation,player_volatility,score,
//   opponent_rating,opponent_deviation,opponent_volatility
// and applies one rating period per player (players in first-seen order).
std::vector<RatedPlayer> rate_matches(std::istream& in, const rating::RatingSystemConfig& config);
void print_ratings(const std::vector<RatedPlayer>& players, std::ostream& out);

}  // namespace coevo::harness

#endif  // COEVO_HARNESS_HPP_
