// Copyright 2026 The Arena Authors
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

// arena: run, compare, sweep and verify regret-matching dynamics.
//
//   arena run --game stag_hunt --algo sorm --seeds 1-10 --out runs/
//   arena compare --preset fig4-small
//   arena sweep --game resource:50:3 --axis n_resources --values 3,5,8
//   arena verify --game resource_2x2 --profile 1,0

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arena/harness.h"

namespace {

using arena::ConfigError;
using arena::ExperimentConfig;

struct CommonFlags {
  std::string game;
  std::string algo;
  std::string seeds;
  std::string out;
  std::string config;
  std::string preset;
  std::optional<std::int64_t> iterations;
  std::optional<int> max_rounds;
  std::optional<std::int64_t> max_total_iterations;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--game", flags.game,
                  "fixture name, resource:N:M[:SEED], task:N:M[:SEED] or "
                  "instance file");
  cmd->add_option("--algo", flags.algo, "sorm, lurm, gurm or a comma list");
  cmd->add_option("--seeds", flags.seeds, "seed list, e.g. 1-20 or 1,4,9");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--config", flags.config, "JSON experiment config");
  cmd->add_option("--preset", flags.preset, "shipped preset name");
  cmd->add_option("--iterations,-T", flags.iterations,
                  "iterations per round");
  cmd->add_option("--max-rounds", flags.max_rounds, "threshold rounds");
  cmd->add_option("--max-total-iterations", flags.max_total_iterations,
                  "iteration budget across rounds (0 = none)");
}

// Preset, then config file, then individual flags; later sources win.
ExperimentConfig BuildConfig(const CommonFlags& flags) {
  ExperimentConfig config;
  config.algorithms = {arena::Algorithm::kSorm};
  config.seeds = {1};
  config.out_dir = arena::DefaultOutDir();
  if (!flags.preset.empty()) {
    config = arena::ConfigFromJson(arena::PresetJson(flags.preset), config);
  }
  if (!flags.config.empty()) {
    std::ifstream in(flags.config);
    if (!in) throw ConfigError("cannot read config '" + flags.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config '" + flags.config + "': " + e.what());
    }
    config = arena::ConfigFromJson(j, config);
  }
  if (!flags.game.empty()) config.game = flags.game;
  if (!flags.algo.empty()) {
    config.algorithms.clear();
    std::string_view rest(flags.algo);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      try {
        config.algorithms.push_back(
            arena::ParseAlgorithm(std::string(rest.substr(0, comma))));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      rest = comma == std::string_view::npos ? std::string_view{}
                                             : rest.substr(comma + 1);
    }
  }
  if (!flags.seeds.empty()) config.seeds = arena::ParseSeedList(flags.seeds);
  if (!flags.out.empty()) config.out_dir = flags.out;
  if (flags.iterations) config.dynamics.iterations = *flags.iterations;
  if (flags.max_rounds) config.dynamics.max_rounds = *flags.max_rounds;
  if (flags.max_total_iterations) {
    config.dynamics.max_total_iterations = *flags.max_total_iterations;
  }
  if (config.game.is_null()) throw ConfigError("no game given (use --game)");
  config.Validate();
  return config;
}

arena::ActionProfile ParseProfile(const std::string& text) {
  arena::ActionProfile profile;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string token(rest.substr(0, comma));
    try {
      std::size_t used = 0;
      profile.push_back(std::stoi(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ConfigError("bad profile entry '" + token + "'");
    }
    rest = comma == std::string_view::npos ? std::string_view{}
                                           : rest.substr(comma + 1);
  }
  return profile;
}

void PrintRuns(const std::vector<arena::RunRecord>& records) {
  for (const auto& record : records) {
    const auto& m = record.metrics;
    std::cout << arena::AlgorithmName(record.algorithm) << " seed "
              << record.seed << ": "
              << arena::RunStatusName(record.result.status) << ", W "
              << arena::FormatDouble(m.final_w) << ", profile "
              << arena::ProfileToString(record.result.final_profile)
              << ", pure at "
              << (m.iterations_to_convergence
                      ? std::to_string(*m.iterations_to_convergence)
                      : std::string("none"))
              << '\n';
  }
}

void PrintSummary(const arena::ComparisonSummary& summary) {
  std::cout << summary.game_label << " over " << summary.seeds.size()
            << " seeds\n";
  for (const auto& arm : summary.arms) {
    std::cout << "  #" << arm.rank << ' ' << arena::AlgorithmName(arm.algorithm)
              << ": mean W " << arena::FormatDouble(arm.mean_w)
              << ", median W " << arena::FormatDouble(arm.median_w)
              << ", converged " << arena::FormatDouble(arm.converged_fraction);
    if (arm.optimal_fraction) {
      std::cout << ", optimal " << arena::FormatDouble(*arm.optimal_fraction);
    }
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret-matching dynamics on repeated normal-form games"};
  app.require_subcommand(1);

  CommonFlags run_flags, compare_flags, sweep_flags;
  auto* run = app.add_subcommand("run", "run one or more algorithms per seed");
  AddCommonFlags(run, run_flags);
  auto* compare =
      app.add_subcommand("compare", "compare algorithms on one instance");
  AddCommonFlags(compare, compare_flags);
  auto* sweep = app.add_subcommand("sweep", "compare across a game-size axis");
  AddCommonFlags(sweep, sweep_flags);
  std::string axis, values;
  sweep->add_option("--axis", axis, "n_resources or n_players");
  sweep->add_option("--values", values, "axis values, e.g. 5,10,15");

  auto* verify = app.add_subcommand("verify", "equilibrium report as JSON");
  std::string verify_game, verify_profile, verify_trace;
  double burn_in = 0.0;
  verify->add_option("--game", verify_game, "game spec or file")->required();
  verify->add_option("--profile", verify_profile, "comma-separated actions");
  verify->add_option("--trace", verify_trace, "profiles CSV from a run");
  verify->add_option("--burn-in", burn_in, "fraction of the trace to skip")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      PrintRuns(arena::Run(BuildConfig(run_flags)));
    } else if (*compare) {
      PrintSummary(arena::Compare(BuildConfig(compare_flags)));
    } else if (*sweep) {
      ExperimentConfig config = BuildConfig(sweep_flags);
      if (!axis.empty() || !values.empty()) {
        arena::SweepAxis sweep_axis = config.sweep.value_or(arena::SweepAxis{});
        if (!axis.empty()) sweep_axis.axis = axis;
        if (!values.empty()) sweep_axis.values = arena::ParseIntList(values);
        config.sweep = sweep_axis;
        config.Validate();
      }
      for (const auto& row : arena::Sweep(config)) {
        std::cout << row.axis << " = " << row.value << ": ";
        PrintSummary(row.summary);
      }
    } else if (*verify) {
      const arena::GameInstance instance = arena::LoadGame(verify_game);
      std::optional<arena::ActionProfile> profile;
      if (!verify_profile.empty()) profile = ParseProfile(verify_profile);
      std::optional<std::string> trace;
      if (!verify_trace.empty()) trace = verify_trace;
      std::cout << arena::Verify(instance, profile, trace, burn_in).dump(2)
                << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "arena: " << e.what() << '\n';
    return 2;
  } catch (const arena::SizeLimitError& e) {
    std::cerr << "arena: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "arena: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
