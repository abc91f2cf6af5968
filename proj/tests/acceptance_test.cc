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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and runtime limits are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "arena/comms.h"
#include "arena/dynamics.h"
#include "arena/equilibria.h"
#include "arena/fixtures.h"
#include "arena/game.h"
#include "arena/harness.h"
#include "arena/models.h"

namespace arena {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double v) { return FormatDouble(v); }

DynamicsConfig Seeded(std::uint64_t seed) {
  DynamicsConfig config;
  config.seed = seed;
  config.record_profiles = true;
  return config;
}

// Earliest iteration at which the learners were pure on the final profile.
std::optional<std::int64_t> PureOnFinal(const RunResult& result) {
  const RunTrace& trace = result.trace;
  for (std::size_t r = 0; r < trace.rows.size(); ++r) {
    if (trace.rows[r].pure && trace.ProfileAt(r) == result.final_profile) {
      return trace.rows[r].iteration;
    }
  }
  return std::nullopt;
}

// SORM must settle on `target` with welfare `target_w` in every seed within
// `max_iterations`; LURM must end at each of `lurm_targets` at least once.
Outcome FixtureCriterion(const Game& game, const ActionProfile& target,
                         double target_w,
                         const std::vector<ActionProfile>& lurm_targets) {
  constexpr int kSeeds = 50;
  constexpr std::int64_t kMaxIterations = 5000;
  int sorm_hits = 0;
  std::int64_t slowest = 0;
  std::map<ActionProfile, int> lurm_finals;
  for (int s = 1; s <= kSeeds; ++s) {
    const RunResult sorm = SormRun(game, Seeded(s));
    const auto reached = PureOnFinal(sorm);
    if (sorm.final_profile == target && std::abs(sorm.final_w - target_w) <= 1e-9 &&
        reached && *reached <= kMaxIterations) {
      ++sorm_hits;
      slowest = std::max(slowest, *reached);
    }
    ++lurm_finals[LurmRun(game, Seeded(s)).final_profile];
  }
  bool lurm_ok = true;
  std::ostringstream lurm;
  for (const auto& p : lurm_targets) {
    lurm << ' ' << ProfileToString(p) << 'x' << lurm_finals[p];
    lurm_ok = lurm_ok && lurm_finals[p] > 0;
  }
  std::ostringstream detail;
  detail << "SORM " << ProfileToString(target) << " in " << sorm_hits << "/"
         << kSeeds << " (slowest at iteration " << slowest << "); LURM finals"
         << lurm.str();
  return {sorm_hits == kSeeds && lurm_ok, detail.str()};
}

Outcome Criterion1() {
  return FixtureCriterion(Resource2x2Fixture(), {kR2, kR1}, 10.0,
                          {{kR1, kR2}, {kR2, kR1}});
}

Outcome Criterion2() {
  return FixtureCriterion(StagHuntFixture(), {kStag, kStag}, 6.0,
                          {{kStag, kStag}, {kHare, kHare}});
}

Outcome Criterion3() {
  constexpr int kSeeds = 20;
  const Game game = GenResourceGame({.n_players = 20,
                                     .n_resources = 5,
                                     .rate_min = 1.0,
                                     .rate_max = 100.0,
                                     .seed = 1});
  // SORM and GURM learners both climb u_i = W, so their equilibria are
  // those of the welfare game.
  const Game aligned = MakeAligned(game);
  double sum_sorm = 0, sum_gurm = 0, sum_lurm = 0;
  int strict = 0;
  int sorm_psne = 0;
  int gurm_psne = 0;
  for (int s = 1; s <= kSeeds; ++s) {
    DynamicsConfig config = Seeded(s);
    config.record_profiles = false;
    const RunResult sorm = SormRun(game, config);
    const RunResult gurm = GurmRun(game, config);
    const RunResult lurm = LurmRun(game, config);
    sum_sorm += sorm.final_w;
    sum_gurm += gurm.final_w;
    sum_lurm += lurm.final_w;
    if (sorm.final_w > lurm.final_w) ++strict;
    sorm_psne += IsPsne(aligned, sorm.final_profile);
    gurm_psne += IsPsne(aligned, gurm.final_profile);
  }
  const double ms = sum_sorm / kSeeds, mg = sum_gurm / kSeeds,
               ml = sum_lurm / kSeeds;
  std::ostringstream detail;
  detail << "mean W SORM " << Fmt(ms) << ", GURM " << Fmt(mg) << ", LURM "
         << Fmt(ml) << "; SORM > LURM in " << strict << "/" << kSeeds
         << "; PSNE finals SORM " << sorm_psne << "/" << kSeeds << ", GURM "
         << gurm_psne << "/" << kSeeds;
  return {ms >= mg && mg >= ml && strict * 10 >= kSeeds * 9 &&
              sorm_psne == kSeeds && gurm_psne == kSeeds,
          detail.str()};
}

Game RandomMatrixGame(std::mt19937_64& rng, std::vector<int> counts) {
  MatrixGame m;
  m.n_players = static_cast<int>(counts.size());
  m.action_counts = std::move(counts);
  m.payoffs.resize(m.n_players * m.NumProfiles());
  for (double& p : m.payoffs) p = UniformReal(rng, 0.0, 1.0);
  return FromMatrix(std::move(m));
}

Outcome Criterion4() {
  constexpr int kGames = 100;
  int optimal = 0;
  int failures_in_psne = 0;
  for (int g = 1; g <= kGames; ++g) {
    std::mt19937_64 rng(g);
    const Game game = MakeAligned(RandomMatrixGame(rng, {3, 3, 3}));
    const double best = FindSocialOptimum(game).welfare;
    DynamicsConfig config = Seeded(g);
    config.max_rounds = 50;
    config.record_profiles = false;
    const RunResult result = SormRun(game, config);
    if (std::abs(result.final_w - best) <= 1e-9) {
      ++optimal;
    } else {
      const auto psne = PsneSet(game);
      failures_in_psne += std::find(psne.begin(), psne.end(),
                                    result.monitor.best_profile) != psne.end();
    }
  }
  const int failures = kGames - optimal;
  std::ostringstream detail;
  detail << "optimum in " << optimal << "/" << kGames << "; failures in PSNE set "
         << failures_in_psne << "/" << failures;
  return {optimal >= 95 && failures_in_psne == failures, detail.str()};
}

Outcome Criterion5() {
  constexpr int kGames = 200;
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> players(2, 4), actions(2, 4);
  int aligned = 0;
  for (int g = 0; g < kGames; ++g) {
    std::vector<int> counts(players(rng));
    for (int& c : counts) c = actions(rng);
    const Game game = RandomMatrixGame(rng, counts);
    aligned += AlignmentCheck(game, 64, rng());
  }
  return {aligned == kGames,
          "alignment holds on " + std::to_string(aligned) + "/" +
              std::to_string(kGames) + " games"};
}

double MaxAbsPayoff(const Game& game) {
  double m = 0.0;
  ActionProfile profile(game.NumPlayers(), 0);
  do {
    for (int i = 0; i < game.NumPlayers(); ++i) {
      m = std::max(m, std::abs(game.Payoff(profile, i)));
    }
  } while (NextProfile(profile, game.ActionCounts()));
  return m;
}

Outcome Criterion6() {
  constexpr std::int64_t kIterations = 20000;
  constexpr double kBurnIn = 0.1;
  bool pass = true;
  std::ostringstream detail;
  const std::vector<std::pair<std::string, Game>> fixtures = {
      {"resource_2x2", Resource2x2Fixture()}, {"stag_hunt", StagHuntFixture()}};
  for (const auto& [name, game] : fixtures) {
    for (Algorithm algorithm :
         {Algorithm::kLurm, Algorithm::kGurm, Algorithm::kSorm}) {
      DynamicsConfig config = Seeded(11);
      config.iterations = kIterations;
      config.max_rounds = 1;
      config.stop_on_convergence = false;
      const RunResult result = RunAlgorithm(algorithm, game, config);
      // Regrets are measured in the utility each learner is driven by.
      const Game signal =
          algorithm == Algorithm::kLurm ? game : MakeAligned(game);
      const double scale = MaxAbsPayoff(signal);
      double regret = 0.0;
      for (const auto& learner : result.learners) {
        for (double r : learner.avg_regret) regret = std::max(regret, r);
      }
      const double cce = CceRegret(
          signal, EmpiricalDistributionFromTrace(result.trace, kBurnIn));
      const bool ok = regret < 0.05 * scale && cce <= 0.05 * scale;
      pass = pass && ok;
      detail << ' ' << name << '/' << AlgorithmName(algorithm) << " regret "
             << Fmt(regret / scale) << "M cce " << Fmt(cce / scale) << "M"
             << (ok ? "" : " (over)") << ';';
    }
  }
  return {pass, detail.str()};
}

Outcome Criterion7() {
  constexpr int kSeeds = 10;
  constexpr std::int64_t kBudget = 500;
  int pure = 0;
  double sum_sorm = 0, sum_gurm = 0;
  for (int s = 1; s <= kSeeds; ++s) {
    const TaskGame task = GenTaskGame({.n_agents = 10,
                                       .n_targets = 20,
                                       .alpha = 2.0,
                                       .beta = 1.0,
                                       .value_min = 10.0,
                                       .value_max = 100.0,
                                       .seed = static_cast<std::uint64_t>(s)});
    DynamicsConfig config = Seeded(s);
    config.max_total_iterations = kBudget;
    config.record_profiles = false;
    const RunResult sorm = SormRun(task.game, config);
    const RunResult gurm = GurmRun(task.game, config);
    if (sorm.trace.first_convergence && *sorm.trace.first_convergence <= kBudget) {
      ++pure;
    }
    sum_sorm += sorm.final_w;
    sum_gurm += gurm.final_w;
  }
  std::ostringstream detail;
  detail << "SORM pure within " << kBudget << " in " << pure << "/" << kSeeds
         << "; mean W SORM " << Fmt(sum_sorm / kSeeds) << ", GURM "
         << Fmt(sum_gurm / kSeeds);
  return {pure >= 8 && sum_sorm >= sum_gurm, detail.str()};
}

Outcome Criterion8() {
  constexpr std::int64_t kPerIteration = 99000;
  bool pass = QueriesPerIteration(100, 10) == kPerIteration;

  // Ledger of a live SORM run on a 100-player, 10-resource game.
  const Game big = GenResourceGame({.n_players = 100, .n_resources = 10, .seed = 3});
  DynamicsConfig config = Seeded(3);
  config.iterations = 40;
  config.max_rounds = 1;
  config.stop_on_convergence = false;
  config.record_profiles = false;
  const RunResult run = SormRun(big, config);
  const std::int64_t t = run.ledger.iterations;
  pass = pass && t == 40 && run.ledger.cumulative_queries == kPerIteration * t;

  CommsLedger ledger;
  for (int i = 0; i < 1000; ++i) RecordIteration(ledger, 100, 10);
  pass = pass && ledger.cumulative_queries == kPerIteration * 1000;

  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> players(2, 6), actions(2, 5);
  double worst = 0.0;
  for (int sample = 0; sample < 1000; ++sample) {
    const int n = players(rng), m = actions(rng);
    const Game game =
        sample % 2 == 0
            ? GenResourceGame({.n_players = n, .n_resources = m, .seed = rng()})
            : GenTaskGame({.n_agents = n, .n_targets = m, .seed = rng()}).game;
    ActionProfile profile(n);
    for (int& a : profile) a = std::uniform_int_distribution<int>(0, m - 1)(rng);
    const int player = std::uniform_int_distribution<int>(0, n - 1)(rng);
    const int action = std::uniform_int_distribution<int>(0, m - 1)(rng);
    double total = game.CounterfactualPayoff(profile, player, action);
    for (int j = 0; j < n; ++j) {
      if (j != player) total += BuildMessage(game, profile, j, player)[action];
    }
    const double expected = game.CounterfactualGlobal(profile, player, action);
    worst = std::max(worst, std::abs(total - expected));
  }
  pass = pass && worst <= 1e-9;
  std::ostringstream detail;
  detail << "queries/iteration " << QueriesPerIteration(100, 10)
         << "; cumulative " << run.ledger.cumulative_queries << " after " << t
         << " iterations; max reconstruction error " << Fmt(worst);
  return {pass, detail.str()};
}

std::map<std::string, std::string> ReadCsvTree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.path().extension() != ".csv") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    files[fs::relative(entry.path(), root).string()] = bytes.str();
  }
  return files;
}

Outcome Criterion9() {
  const fs::path root = fs::temp_directory_path() / "arena_acceptance_c9";
  fs::remove_all(root);
  bool pass = true;
  std::size_t compared = 0;
  std::ostringstream detail;
  for (const std::string& preset : PresetNames()) {
    ExperimentConfig config = ConfigFromJson(PresetJson(preset));
    config.seeds = {config.seeds.front(), config.seeds.back()};
    std::map<std::string, std::string> outputs[2];
    for (int rerun = 0; rerun < 2; ++rerun) {
      config.out_dir = (root / preset / std::to_string(rerun)).string();
      if (config.sweep) {
        Sweep(config);
      } else if (config.algorithms.size() > 1) {
        Compare(config);
      } else {
        Run(config);
      }
      outputs[rerun] = ReadCsvTree(config.out_dir);
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    pass = pass && same;
    compared += outputs[0].size();
    if (!same) detail << preset << " differs; ";
  }
  fs::remove_all(root);
  detail << compared << " CSV files identical across reruns of "
         << PresetNames().size() << " presets";
  return {pass, detail.str()};
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace arena

int main() {
  using arena::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "2x2 resource fixture", 10, arena::Criterion1},
      {2, "stag hunt", 10, arena::Criterion2},
      {3, "welfare ordering on 20x5 resource game", 120, arena::Criterion3},
      {4, "oracle optimality on aligned 3x3x3 games", 180, arena::Criterion4},
      {5, "alignment property on random games", 60, arena::Criterion5},
      {6, "vanishing time-average regret", 30, arena::Criterion6},
      {7, "task game 10x20", 120, arena::Criterion7},
      {8, "communication accounting", 10, arena::Criterion8},
      {9, "preset determinism", 0, arena::Criterion9},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    arena::Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = c.limit_seconds <= 0 || seconds < c.limit_seconds;
    const bool pass = outcome.pass && in_time;
    failed += !pass;
    std::printf("[%s] C%d %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id,
                c.title, outcome.detail.c_str(), seconds,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
