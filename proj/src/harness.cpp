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

#include "coevo/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <ostream>
#include <sstream>

#include "coevo/errors.hpp"
#include "coevo/metrics.hpp"
#include "csv.hpp"

namespace coevo::harness {
namespace {

using coevolution::GenerationReport;

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (k) out += ';';
    out += std::to_string(sizes[k]);
  }
  return out;
}

std::string seed_file(std::string_view stem, Arm arm, std::uint64_t seed) {
  return std::string(stem) + "_" + std::string(to_string(arm)) + "_" + std::to_string(seed) + ".csv";
}

std::vector<std::filesystem::path> write_seed_files(const ExperimentConfig& config,
                                                    const SeedRun& run) {
  const auto& dir = config.output_dir;
  std::vector<std::filesystem::path> files;

  const auto report_path = dir / seed_file("gen_report", config.arm, run.seed);
  csv::Writer reports(report_path,
                      {"generation", "g_best_fitness", "g_mean_fitness", "d_best_fitness",
                       "d_mean_fitness", "best_fid", "best_fid_rating", "best_fid_id",
                       "g_mean_rating", "g_max_rating", "d_mean_rating", "d_max_rating",
                       "g_species_count", "g_species_sizes", "d_species_count", "d_species_sizes",
                       "g_mean_params", "d_mean_params"});
  for (const GenerationReport& r : run.reports) {
    reports.write({csv::format(r.generation), csv::format(r.generators.best_fitness),
                   csv::format(r.generators.mean_fitness), csv::format(r.discriminators.best_fitness),
                   csv::format(r.discriminators.mean_fitness), csv::format(r.best_fid),
                   csv::format(r.best_fid_rating), csv::format(r.best_fid_id),
                   csv::format(r.generators.mean_rating), csv::format(r.generators.max_rating),
                   csv::format(r.discriminators.mean_rating),
                   csv::format(r.discriminators.max_rating),
                   csv::format(std::uint64_t{r.generators.species_count}),
                   join_sizes(r.generators.species_sizes),
                   csv::format(std::uint64_t{r.discriminators.species_count}),
                   join_sizes(r.discriminators.species_sizes),
                   csv::format(r.generators.mean_parameters),
                   csv::format(r.discriminators.mean_parameters)});
  }
  reports.close();
  files.push_back(report_path);

  const auto pairs_path = dir / seed_file("pair_outcomes", config.arm, run.seed);
  csv::Writer pairs(pairs_path, {"generation", "g_id", "d_id", "d_win_rate", "g_win_rate"});
  for (const auto& p : run.pairs)
    pairs.write({csv::format(p.generation), csv::format(p.g_id), csv::format(p.d_id),
                 csv::format(p.outcome.d_win_rate), csv::format(p.outcome.g_win_rate)});
  pairs.close();
  files.push_back(pairs_path);

  const auto timing_path = dir / seed_file("timing", config.arm, run.seed);
  csv::Writer timing(timing_path, {"generation", "wall_seconds"});
  for (const GenerationReport& r : run.reports)
    timing.write({csv::format(r.generation), csv::format(r.wall_seconds)});
  timing.close();
  files.push_back(timing_path);
  return files;
}

std::filesystem::path write_summary(const ExperimentConfig& config,
                                    const std::vector<SeedRun>& runs) {
  const auto path = config.output_dir / ("summary_" + std::string(to_string(config.arm)) + ".csv");
  csv::Writer out(path, {"generation", "seeds", "best_fid_mean", "best_fid_ci95", "skill_mean",
                         "skill_ci95", "g_params_mean", "d_params_mean"});
  const std::size_t generations = runs.front().reports.size();
  for (std::size_t g = 0; g < generations; ++g) {
    std::vector<double> fid, skill, g_params, d_params;
    for (const SeedRun& run : runs) {
      const GenerationReport& r = run.reports.at(g);
      fid.push_back(r.best_fid);
      skill.push_back(r.best_fid_rating);
      g_params.push_back(r.generators.mean_parameters);
      d_params.push_back(r.discriminators.mean_parameters);
    }
    const auto fid_ci = metrics::mean_confidence(fid);
    const auto skill_ci = metrics::mean_confidence(skill);
    out.write({csv::format(runs.front().reports[g].generation),
               csv::format(std::uint64_t{runs.size()}), csv::format(fid_ci.mean),
               csv::format(fid_ci.half_width), csv::format(skill_ci.mean),
               csv::format(skill_ci.half_width), csv::format(metrics::mean_confidence(g_params).mean),
               csv::format(metrics::mean_confidence(d_params).mean)});
  }
  out.close();
  return path;
}

std::filesystem::path write_correlations(const ExperimentConfig& config,
                                         const std::vector<CorrelationRow>& rows) {
  const auto path =
      config.output_dir / ("correlation_" + std::string(to_string(config.arm)) + ".csv");
  csv::Writer out(path, {"seed", "generations", "pearson", "spearman"});
  for (const CorrelationRow& r : rows)
    out.write({csv::format(r.seed), csv::format(std::uint64_t{r.generations}),
               r.pearson ? csv::format(*r.pearson) : std::string(),
               r.spearman ? csv::format(*r.spearman) : std::string()});
  out.close();
  return path;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::string_view to_string(Arm a) {
  switch (a) {
    case Arm::CoeganSkill:
      return "coegan-skill";
    case Arm::CoeganFid:
      return "coegan-fid";
    case Arm::FixedBaseline:
      return "fixed-baseline";
    case Arm::RandomSearch:
      return "random-search";
  }
  return "coegan-skill";
}

Arm parse_arm(std::string_view name) {
  for (Arm a : kAllArms)
    if (to_string(a) == name) return a;
  throw InvalidInput("unknown arm '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw InvalidInput("at least one seed is required");
  if (jobs < 1) throw InvalidInput("jobs must be >= 1");
  resolve(*this).validate();
}

coevolution::CoevolutionConfig resolve(const ExperimentConfig& config) {
  coevolution::CoevolutionConfig out = config.coevolution;
  switch (config.arm) {
    case Arm::CoeganSkill:
    case Arm::FixedBaseline:
      out.evolution.fitness_mode = coevolution::FitnessMode::SkillRating;
      break;
    case Arm::CoeganFid:
      out.evolution.fitness_mode = coevolution::FitnessMode::FidAndLoss;
      break;
    case Arm::RandomSearch:
      out.evolution.fitness_mode = coevolution::FitnessMode::Random;
      break;
  }
  out.shape.data_dim = config.dataset == DatasetKind::Gauss1D ? 1 : 2;
  out.shape.latent_dim = out.train.latent_dim;
  return out;
}

SeedRun run_seed(const ExperimentConfig& config, std::uint64_t seed,
                 const GenerationObserver& observer) {
  const coevolution::CoevolutionConfig cfg = resolve(config);
  cfg.validate();
  Rng master(seed);
  auto data = make_dataset(config.dataset, master);
  auto reference_source = make_dataset(config.dataset, master);
  coevolution::Environment env{
      *data, metrics::fit_gaussian(reference_source->sample(cfg.evolution.fid_samples))};

  const bool fixed_arm = config.arm == Arm::FixedBaseline;
  coevolution::CoevolutionState state =
      fixed_arm ? coevolution::initialize_fixed(cfg, master) : coevolution::initialize(cfg, master);

  SeedRun run;
  run.seed = seed;
  if (cfg.evolution.generations == 0) {
    run.reports.push_back(coevolution::initial_report(state, cfg, env, master));
    return run;
  }
  for (int g = 0; g < cfg.evolution.generations; ++g) {
    coevolution::GenerationResult result =
        fixed_arm ? coevolution::run_fixed_generation(state, cfg, env, master)
                  : coevolution::run_generation(state, cfg, env, master);
    if (observer) observer(state, result);
    run.reports.push_back(result.report);
    run.pairs.insert(run.pairs.end(), result.pairs.begin(), result.pairs.end());
    state = std::move(result.next);
  }
  return run;
}

CorrelationRow fid_skill_correlation(const SeedRun& run) {
  CorrelationRow row;
  row.seed = run.seed;
  row.generations = run.reports.size();
  std::vector<double> fid, skill;
  for (const GenerationReport& r : run.reports) {
    fid.push_back(r.best_fid);
    skill.push_back(r.best_fid_rating);
  }
  if (fid.size() < 2) return row;
  try {
    row.pearson = metrics::pearson(fid, skill);
    row.spearman = metrics::spearman(fid, skill);
  } catch (const DomainError&) {
    row.pearson.reset();
    row.spearman.reset();
  }
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const GenerationObserver& observer) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + config.output_dir.string() +
                             ": " + ec.message());

  const auto n = static_cast<std::ptrdiff_t>(config.seeds.size());
  ExperimentResult result;
  result.runs.resize(config.seeds.size());
  std::vector<std::vector<std::filesystem::path>> seed_files(config.seeds.size());
  std::vector<std::exception_ptr> errors(config.seeds.size());

#pragma omp parallel for schedule(dynamic) num_threads(config.jobs) if (config.jobs > 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      result.runs[idx] = run_seed(config, config.seeds[idx], observer);
      seed_files[idx] = write_seed_files(config, result.runs[idx]);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& files : seed_files) result.files.insert(result.files.end(), files.begin(), files.end());
  for (const SeedRun& run : result.runs) result.correlations.push_back(fid_skill_correlation(run));
  result.files.push_back(write_summary(config, result.runs));
  result.files.push_back(write_correlations(config, result.correlations));
  return result;
}

std::filesystem::path default_output_dir(const std::string& from_flag) {
  if (!from_flag.empty()) return from_flag;
  if (const char* env = std::getenv("COEVO_SKILL_OUT"); env && *env) return env;
  return "results";
}

std::vector<CompareRow> compare_summaries(const std::vector<std::filesystem::path>& summaries) {
  if (summaries.empty()) throw InvalidInput("compare: no summary files given");
  std::vector<CompareRow> rows;
  for (const auto& path : summaries) {
    const csv::Table t = csv::read(path);
    if (t.rows.empty()) throw InvalidInput(path.string() + ": summary has no rows");
    const auto& last = t.rows.back();
    const std::string ctx = path.string();
    CompareRow row;
    std::string stem = path.stem().string();
    row.arm = stem.rfind("summary_", 0) == 0 ? stem.substr(8) : stem;
    row.generation = static_cast<std::size_t>(csv::parse_double(last[t.column("generation")], ctx));
    row.best_fid_mean = csv::parse_double(last[t.column("best_fid_mean")], ctx);
    row.best_fid_ci95 = csv::parse_double(last[t.column("best_fid_ci95")], ctx);
    row.skill_mean = csv::parse_double(last[t.column("skill_mean")], ctx);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    return a.best_fid_mean < b.best_fid_mean;
  });
  return rows;
}

void print_comparison(const std::vector<CompareRow>& rows, std::ostream& out) {
  out << "arm,generation,best_fid,skill\n";
  for (const CompareRow& r : rows)
    out << r.arm << ',' << r.generation << ',' << fixed(r.best_fid_mean, 4) << " ± "
        << fixed(r.best_fid_ci95, 4) << ',' << fixed(r.skill_mean, 2) << '\n';
}

std::vector<RatedPlayer> rate_matches(std::istream& in, const rating::RatingSystemConfig& config) {
  const csv::Table t = csv::read(in, "match CSV");
  const std::size_t c_player = t.column("player");
  const std::size_t c_pr = t.column("player_rating");
  const std::size_t c_pd = t.column("player_deviation");
  const std::size_t c_pv = t.column("player_volatility");
  const std::size_t c_score = t.column("score");
  const std::size_t c_or = t.column("opponent_rating");
  const std::size_t c_od = t.column("opponent_deviation");
  const std::size_t c_ov = t.column("opponent_volatility");

  std::vector<RatedPlayer> players;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<rating::MatchRecord>> records;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string ctx = "match CSV row " + std::to_string(r + 2);
    const rating::SkillRating self{csv::parse_double(row[c_pr], ctx),
                                   csv::parse_double(row[c_pd], ctx),
                                   csv::parse_double(row[c_pv], ctx)};
    auto [it, inserted] = index.emplace(row[c_player], players.size());
    if (inserted) {
      players.push_back({row[c_player], self, self, 0});
      records.emplace_back();
    } else if (!(players[it->second].before == self)) {
      throw InvalidInput(ctx + ": player '" + row[c_player] + "' has inconsistent ratings");
    }
    records[it->second].push_back(
        {csv::parse_double(row[c_score], ctx),
         {csv::parse_double(row[c_or], ctx), csv::parse_double(row[c_od], ctx),
          csv::parse_double(row[c_ov], ctx)}});
  }
  for (std::size_t p = 0; p < players.size(); ++p) {
    players[p].after = rating::update_rating(players[p].before, records[p], config);
    players[p].matches = records[p].size();
  }
  return players;
}

void print_ratings(const std::vector<RatedPlayer>& players, std::ostream& out) {
  out << "player,matches,rating,deviation,volatility\n";
  for (const RatedPlayer& p : players)
    out << p.player << ',' << p.matches << ',' << fixed(p.after.rating, 2) << ','
        << fixed(p.after.deviation, 2) << ',' << fixed(p.after.volatility, 6) << '\n';
}

}  // namespace coevo::harness
