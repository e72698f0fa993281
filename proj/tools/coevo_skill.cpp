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

// coevo_skill: command-line front end.
//
//   coevo_skill run --arm coegan-skill --dataset ring2d --seeds 5 --out results
//   coevo_skill compare results/summary_*.csv
//   coevo_skill rate data/glicko_example.csv --tau 0.5

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "coevo/harness.hpp"

namespace {

using coevo::harness::ExperimentConfig;

struct RunOptions {
  std::string arm = "coegan-skill";
  std::string dataset = "ring2d";
  int seeds = 5;
  std::uint64_t seed_base = 1;
  std::vector<std::uint64_t> seed_list;
  std::string out;
  bool inherit_weights = false;
};

void add_run_options(CLI::App& run, RunOptions& opt, ExperimentConfig& cfg) {
  auto& evo = cfg.coevolution.evolution;
  auto& train = cfg.coevolution.train;
  auto& rate = cfg.coevolution.rating;
  auto& mut = cfg.coevolution.mutation;

  run.add_option("--arm", opt.arm, "coegan-skill | coegan-fid | fixed-baseline | random-search")
      ->capture_default_str();
  run.add_option("--dataset", opt.dataset, "ring2d | grid2d | gauss1d")->capture_default_str();
  run.add_option("--seeds", opt.seeds, "number of seeds, counted from --seed-base")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run.add_option("--seed-base", opt.seed_base, "first seed")->capture_default_str();
  run.add_option("--seed-list", opt.seed_list, "explicit seeds (overrides --seeds)")
      ->delimiter(',');
  run.add_option("--out", opt.out, "output directory (default $COEVO_SKILL_OUT or results)");
  run.add_option("--jobs", cfg.jobs, "seeds run concurrently")->check(CLI::PositiveNumber);

  run.add_option("--generations", evo.generations)->capture_default_str();
  run.add_option("--pop-size", evo.pop_size)->capture_default_str();
  run.add_option("--species", evo.species_target)->capture_default_str();
  run.add_option("--tournament-k", evo.tournament_k)->capture_default_str();
  run.add_option("--batches-per-pairing", evo.batches_per_pairing)->capture_default_str();
  run.add_option("--fid-samples", evo.fid_samples)->capture_default_str();
  run.add_option("--initial-threshold", evo.initial_threshold)->capture_default_str();
  run.add_flag("--inherit-weights", opt.inherit_weights,
               "offspring keep the parent's trained weights for surviving layers");

  run.add_option("--batch-size", train.batch_size)->capture_default_str();
  run.add_option("--learning-rate", train.learning_rate)->capture_default_str();
  run.add_option("--beta1", train.beta1)->capture_default_str();
  run.add_option("--beta2", train.beta2)->capture_default_str();
  run.add_option("--latent-dim", train.latent_dim)->capture_default_str();
  run.add_option("--adam-epsilon", train.adam_epsilon)->capture_default_str();

  run.add_option("--tau", rate.tau)->capture_default_str();
  run.add_option("--initial-rating", rate.initial.rating)->capture_default_str();
  run.add_option("--initial-deviation", rate.initial.deviation)->capture_default_str();
  run.add_option("--initial-volatility", rate.initial.volatility)->capture_default_str();

  run.add_option("--add-rate", mut.add_rate)->capture_default_str();
  run.add_option("--remove-rate", mut.remove_rate)->capture_default_str();
  run.add_option("--change-rate", mut.change_rate)->capture_default_str();
  run.add_option("--min-units", mut.min_units)->capture_default_str();
  run.add_option("--max-units", mut.max_units)->capture_default_str();
  run.add_option("--genome-limit", mut.genome_limit)->capture_default_str();
}

int do_run(const RunOptions& opt, ExperimentConfig cfg) {
  cfg.arm = coevo::harness::parse_arm(opt.arm);
  cfg.dataset = coevo::harness::parse_dataset(opt.dataset);
  cfg.coevolution.evolution.inherit_weights = opt.inherit_weights;
  if (!opt.seed_list.empty()) {
    cfg.seeds = opt.seed_list;
  } else {
    cfg.seeds.clear();
    for (int k = 0; k < opt.seeds; ++k) cfg.seeds.push_back(opt.seed_base + static_cast<std::uint64_t>(k));
  }
  cfg.output_dir = coevo::harness::default_output_dir(opt.out);
  const auto result = coevo::harness::run_experiment(cfg);
  for (const auto& path : result.files) std::cout << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coevolutionary GAN training with skill-rating fitness"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "run one experimental arm over several seeds");
  run->set_config("--config", "", "flat key=value file; keys are long flag names");
  add_run_options(*run, run_opt, cfg);

  std::vector<std::string> summaries;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand("compare", "tabulate final results of several arms");
  compare->add_option("summaries", summaries, "summary_<arm>.csv files")->required()->check(CLI::ExistingFile);
  compare->add_option("--out", compare_out, "also write the table to this file");

  std::string match_file;
  coevo::rating::RatingSystemConfig rate_cfg;
  CLI::App* rate = app.add_subcommand("rate", "apply one Glicko-2 rating period to a match CSV");
  rate->add_option("matches", match_file, "match CSV ('-' for stdin)")->required();
  rate->add_option("--tau", rate_cfg.tau)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return do_run(run_opt, cfg);
    if (*compare) {
      std::vector<std::filesystem::path> paths(summaries.begin(), summaries.end());
      const auto rows = coevo::harness::compare_summaries(paths);
      coevo::harness::print_comparison(rows, std::cout);
      if (!compare_out.empty()) {
        std::ofstream out(compare_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + compare_out);
        coevo::harness::print_comparison(rows, out);
      }
      return 0;
    }
    if (*rate) {
      std::vector<coevo::harness::RatedPlayer> players;
      if (match_file == "-") {
        players = coevo::harness::rate_matches(std::cin, rate_cfg);
      } else {
        std::ifstream in(match_file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + match_file);
        players = coevo::harness::rate_matches(in, rate_cfg);
      }
      coevo::harness::print_ratings(players, std::cout);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
