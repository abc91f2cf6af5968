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

#include "arena/dynamics.h"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "arena/fixtures.h"
#include "arena/models.h"
#include "gtest/gtest.h"

namespace arena {
namespace {

DynamicsConfig Config(std::uint64_t seed) {
  DynamicsConfig config;
  config.seed = seed;
  return config;
}

std::string TraceCsv(const RunTrace& trace) {
  std::ostringstream out;
  WriteTraceCsv(trace, out);
  WriteProfilesCsv(trace, out);
  return out.str();
}

void ExpectDistribution(const std::vector<double>& p) {
  double sum = 0.0;
  for (double x : p) {
    EXPECT_GE(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(RegretUpdateTest, FirstStep) {
  LearnerState state = LearnerState::Uniform(2);
  RegretUpdate(state, 8.0, std::vector<double>{8.0, 10.0});
  EXPECT_EQ(state.t, 1);
  EXPECT_EQ(state.avg_regret, (std::vector<double>{0.0, 2.0}));
}

TEST(RegretUpdateTest, AveragesInstantRegrets) {
  LearnerState state = LearnerState::Uniform(2);
  RegretUpdate(state, 3.0, std::vector<double>{3.0, 5.0});
  RegretUpdate(state, 3.0, std::vector<double>{3.0, 3.0});
  EXPECT_DOUBLE_EQ(state.avg_regret[1], 1.0);
}

TEST(RegretUpdateTest, ZeroRegretDecays) {
  LearnerState state = LearnerState::Uniform(2);
  RegretUpdate(state, 0.0, std::vector<double>{0.0, 6.0});
  RegretUpdate(state, 4.0, std::vector<double>{4.0, 4.0});
  RegretUpdate(state, 4.0, std::vector<double>{4.0, 4.0});
  EXPECT_DOUBLE_EQ(state.avg_regret[1], 6.0 * 1.0 / 3.0);
}

TEST(RegretUpdateTest, LengthMismatchThrows) {
  LearnerState state = LearnerState::Uniform(3);
  EXPECT_THROW(RegretUpdate(state, 1.0, std::vector<double>{1.0, 2.0}),
               std::invalid_argument);
}

TEST(StrategyTest, LockStaysOnCurrentAction) {
  LearnerState state = LearnerState::Uniform(3);
  state.avg_regret = {5.0, -1.0, 2.0};
  const auto s = StrategyFromRegrets(state, 4, Config(0), true, 1);
  EXPECT_EQ(s, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(StrategyTest, NoPositiveRegretIsUniform) {
  LearnerState state = LearnerState::Uniform(2);
  state.avg_regret = {-1.0, -2.0};
  const auto s = StrategyFromRegrets(state, 7, Config(0), false, 0);
  EXPECT_EQ(s, (std::vector<double>{0.5, 0.5}));
}

TEST(StrategyTest, ExploratoryMix) {
  DynamicsConfig config;
  config.delta = 0.1;
  config.gamma = 1.0;
  EXPECT_DOUBLE_EQ(ExplorationRate(config, 1), 0.1);
  LearnerState state = LearnerState::Uniform(2);
  state.avg_regret = {2.0, 0.0};
  const auto s = StrategyFromRegrets(state, 1, config, false, 1);
  EXPECT_NEAR(s[0], 0.95, 1e-12);
  EXPECT_NEAR(s[1], 0.05, 1e-12);
  EXPECT_EQ(MatchRegrets(std::vector<double>{2.0, 0.0}, 0.1), s);
}

TEST(StrategyTest, ExplorationRateDecays) {
  const DynamicsConfig config;  // delta 0.5, gamma 0.5
  EXPECT_DOUBLE_EQ(ExplorationRate(config, 1), 0.5);
  EXPECT_DOUBLE_EQ(ExplorationRate(config, 4), 0.25);
}

TEST(PruneTest, Examples) {
  EXPECT_EQ(PruneStrategy(std::vector<double>{0.95, 0.05}, 0.03),
            (std::vector<double>{0.95, 0.05}));
  const auto pruned = PruneStrategy(std::vector<double>{0.97, 0.02, 0.01}, 0.03);
  EXPECT_EQ(pruned, (std::vector<double>{1.0, 0.0, 0.0}));
  EXPECT_EQ(PruneStrategy(std::vector<double>{0.5, 0.5}, 0.03),
            (std::vector<double>{0.5, 0.5}));
}

TEST(PruneTest, AllBelowThresholdKeepsLowestIndexMaximum) {
  EXPECT_EQ(PruneStrategy(std::vector<double>{0.2, 0.4, 0.4}, 0.5),
            (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(ThresholdTest, RaisesToBestCounterfactual) {
  const Game game = Resource2x2Fixture();
  ThresholdMonitor monitor;
  const ActionProfile both_first = {kR1, kR1};
  ThresholdUpdate(monitor, {game.CounterfactualGlobals(both_first, 0),
                            game.CounterfactualGlobals(both_first, 1)});
  EXPECT_EQ(monitor.threshold, 10.0);

  monitor.threshold = 5.0;
  ThresholdUpdate(monitor, {{3.0, 7.0}, {1.0}});
  EXPECT_EQ(monitor.threshold, 7.0);
  ThresholdUpdate(monitor, {{3.0, 6.0}, {1.0}});
  EXPECT_EQ(monitor.threshold, 7.0);
}

TEST(ThresholdTest, Satisfaction) {
  ThresholdMonitor monitor;
  EXPECT_EQ(Satisfaction(monitor, 4.0), 0.0);
  monitor.threshold = 10.0;
  EXPECT_EQ(Satisfaction(monitor, 10.0), 1.0);
  EXPECT_DOUBLE_EQ(Satisfaction(monitor, 8.0), 0.8);
}

TEST(ConvergenceTest, DetectPureConvergence) {
  const std::vector<std::vector<double>> pure = {{1.0, 0.0}, {0.0, 1.0}};
  const std::vector<ActionProfile> stable(3, ActionProfile{0, 1});
  EXPECT_TRUE(DetectPureConvergence(pure, stable, 3));
  EXPECT_FALSE(DetectPureConvergence({{0.8, 0.2}, {0.0, 1.0}}, stable, 3));
  std::vector<ActionProfile> changed = stable;
  changed[1] = {1, 1};
  EXPECT_FALSE(DetectPureConvergence(pure, changed, 3));
  // History holds the window - 1 profiles before the current one.
  EXPECT_TRUE(DetectPureConvergence(pure, stable, 4));
  EXPECT_FALSE(DetectPureConvergence(pure, stable, 5));
}

TEST(ConvergenceTest, TrackerNeedsFullWindow) {
  PureConvergenceTracker tracker(3);
  const std::vector<std::vector<double>> a = {{1.0, 0.0}};
  const std::vector<std::vector<double>> b = {{0.0, 1.0}};
  EXPECT_FALSE(tracker.Update(a));
  EXPECT_FALSE(tracker.Update(a));
  EXPECT_TRUE(tracker.Update(a));
  EXPECT_FALSE(tracker.Update(b));
  EXPECT_FALSE(tracker.Update({{0.5, 0.5}}));
}

TEST(SampleActionTest, FollowsSupport) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(SampleAction(std::vector<double>{0.0, 1.0, 0.0}, rng), 1);
  }
  int ones = 0;
  for (int k = 0; k < 10000; ++k) {
    ones += SampleAction(std::vector<double>{0.25, 0.75}, rng);
  }
  EXPECT_NEAR(ones / 10000.0, 0.75, 0.02);
}

TEST(ConfigTest, JsonRoundTripAndErrors) {
  DynamicsConfig config;
  config.delta = 0.3;
  config.iterations = 123;
  config.prune = false;
  const DynamicsConfig copy = DynamicsConfigFromJson(DynamicsConfigToJson(config));
  EXPECT_EQ(copy.delta, 0.3);
  EXPECT_EQ(copy.iterations, 123);
  EXPECT_FALSE(copy.prune);
  EXPECT_EQ(DynamicsConfigFromJson({{"T", 77}}).iterations, 77);
  EXPECT_THROW(DynamicsConfigFromJson({{"bogus", 1}}), std::invalid_argument);

  DynamicsConfig bad;
  bad.delta = 0.0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = DynamicsConfig{};
  bad.gamma = 1.5;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  EXPECT_THROW(ParseAlgorithm("fictitious"), std::invalid_argument);
  EXPECT_EQ(ParseAlgorithm("gurm"), Algorithm::kGurm);
}

TEST(TraceTest, CsvHeader) {
  const RunResult result = SormRun(StagHuntFixture(), Config(3));
  std::ostringstream out;
  WriteTraceCsv(result.trace, out);
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "round,t,global_utility,U,omega,max_avg_regret,pure_profile_flag,"
            "cumulative_messages");
  std::ostringstream profiles;
  WriteProfilesCsv(result.trace, profiles);
  EXPECT_EQ(profiles.str().substr(0, 15), "iteration,a0,a1");
}

TEST(SormTest, StagHuntReachesStagStag) {
  for (std::uint64_t seed : {7, 8, 9}) {
    const RunResult result = SormRun(StagHuntFixture(), Config(seed));
    EXPECT_EQ(result.final_profile, (ActionProfile{kStag, kStag}));
    EXPECT_EQ(result.final_w, 6.0);
  }
}

TEST(SormTest, ResourceFixtureReachesSocialOptimum) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const RunResult result = SormRun(Resource2x2Fixture(), Config(seed));
    EXPECT_EQ(result.final_profile, (ActionProfile{kR2, kR1}));
    EXPECT_EQ(result.final_w, 10.0);
  }
}

TEST(SormTest, SinglePlayerArgmax) {
  const std::vector<double> values = {1.0, 5.0, 2.0};
  const Game game({3}, [&](int, std::span<const int> p) { return values[p[0]]; });
  const RunResult result = SormRun(game, Config(4));
  EXPECT_EQ(result.final_profile, ActionProfile{1});
  EXPECT_EQ(result.final_w, 5.0);
}

TEST(SormTest, BudgetStopsRun) {
  DynamicsConfig config = Config(5);
  config.max_total_iterations = 30;
  const Game game = GenResourceGame({.n_players = 8, .n_resources = 4, .seed = 2});
  const RunResult result = SormRun(game, config);
  EXPECT_EQ(result.status, RunStatus::kBudgetExhausted);
  EXPECT_EQ(result.trace.rows.size(), 30u);
  EXPECT_EQ(result.ledger.iterations, 30);
}

TEST(SormTest, QueryCountsInTrace) {
  const RunResult result = SormRun(Resource2x2Fixture(), Config(6));
  for (const TraceRow& row : result.trace.rows) {
    EXPECT_EQ(row.cumulative_messages, 4 * row.iteration);
  }
}

TEST(LurmTest, DominantStrategyProfile) {
  // Prisoner's dilemma: action 1 strictly dominates for both players.
  const Game game = FromMatrix({2, {2, 2}, {3, 0, 5, 1, 3, 5, 0, 1}});
  for (std::uint64_t seed : {1, 2, 3}) {
    const RunResult result = LurmRun(game, Config(seed));
    EXPECT_EQ(result.final_profile, (ActionProfile{1, 1}));
    EXPECT_EQ(result.status, RunStatus::kConverged);
  }
}

TEST(LurmTest, ConvergesToAFixturePsne) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = LurmRun(Resource2x2Fixture(), Config(seed)).final_profile;
    EXPECT_TRUE(p == (ActionProfile{kR1, kR2}) || p == (ActionProfile{kR2, kR1}));
  }
}

TEST(LurmTest, CountsActionBroadcastsOnly) {
  DynamicsConfig config = Config(2);
  config.iterations = 10;
  const RunResult result = LurmRun(StagHuntFixture(), config);
  EXPECT_EQ(result.ledger.cumulative_messages, 20);
  EXPECT_EQ(result.trace.rows.back().threshold, 0.0);
}

TEST(GurmTest, SinglePlayerArgmax) {
  const std::vector<double> values = {1.0, 5.0, 2.0};
  const Game game({3}, [&](int, std::span<const int> p) { return values[p[0]]; });
  EXPECT_EQ(GurmRun(game, Config(4)).final_profile, ActionProfile{1});
}

TEST(GurmTest, GlobalRegretTowardStagFromHareHare) {
  const Game game = StagHuntFixture();
  const ActionProfile hares = {kHare, kHare};
  LearnerState state = LearnerState::Uniform(2);
  RegretUpdate(state, game.GlobalUtility(hares),
               game.CounterfactualGlobals(hares, 0));
  EXPECT_EQ(state.avg_regret[kStag], 1.0 - 2.0);
}

// Properties.

TEST(DynamicsPropertyTest, StrategiesAreDistributionsWithExplorationFloor) {
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> regret(-10.0, 10.0);
  const DynamicsConfig config;
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 6);
    LearnerState state = LearnerState::Uniform(m);
    for (double& r : state.avg_regret) r = trial % 3 == 0 ? -std::abs(regret(rng)) : regret(rng);
    const std::int64_t t = 1 + static_cast<std::int64_t>(rng() % 100000);
    const auto s = StrategyFromRegrets(state, t, config, false, 0);
    ExpectDistribution(s);
    bool any_positive = false;
    for (double r : state.avg_regret) any_positive = any_positive || r > 0.0;
    if (any_positive) {
      const double floor = ExplorationRate(config, t) / m;
      for (double p : s) EXPECT_GE(p, floor * (1.0 - 1e-12));
    }
    ExpectDistribution(PruneStrategy(s, config.prune_eps));
  }
}

TEST(DynamicsPropertyTest, IncrementalRegretMatchesBatch) {
  std::mt19937_64 rng(302);
  std::uniform_real_distribution<double> payoff(-50.0, 50.0);
  for (int run = 0; run < 10; ++run) {
    const int m = 2 + run % 4;
    LearnerState state = LearnerState::Uniform(m);
    std::vector<double> sums(m, 0.0);
    for (int t = 1; t <= 1000; ++t) {
      const int played = static_cast<int>(rng() % m);
      std::vector<double> cf(m);
      for (double& c : cf) c = payoff(rng);
      RegretUpdate(state, cf[played], cf);
      for (int k = 0; k < m; ++k) sums[k] += cf[k] - cf[played];
    }
    for (int k = 0; k < m; ++k) {
      const double batch = sums[k] / 1000.0;
      EXPECT_NEAR(state.avg_regret[k], batch, 1e-9 * std::max(1.0, std::abs(batch)));
    }
  }
}

TEST(DynamicsPropertyTest, ThresholdMonotoneAndOmegaBounded) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 10; ++trial) {
    const Game game = GenResourceGame(
        {.n_players = 3 + trial % 4, .n_resources = 2 + trial % 3, .seed = rng()});
    DynamicsConfig config = Config(rng());
    config.max_rounds = 5;
    config.iterations = 2000;
    const RunResult result = SormRun(game, config);
    double previous = -std::numeric_limits<double>::infinity();
    for (const TraceRow& row : result.trace.rows) {
      EXPECT_GE(row.threshold, previous);
      EXPECT_LE(row.omega, 1.0 + 1e-9);
      previous = row.threshold;
    }
    EXPECT_EQ(result.monitor.best_w, game.GlobalUtility(result.monitor.best_profile));
  }
}

TEST(DynamicsPropertyTest, RegretsBoundedByTwiceMaxWelfare) {
  const Game game = GenResourceGame({.n_players = 5, .n_resources = 3, .seed = 4});
  for (Algorithm algorithm : {Algorithm::kSorm, Algorithm::kGurm}) {
    DynamicsConfig config = Config(9);
    config.iterations = 3000;
    config.max_rounds = 2;
    const RunResult result = RunAlgorithm(algorithm, game, config);
    double max_w = 0.0;
    for (const TraceRow& row : result.trace.rows) {
      max_w = std::max(max_w, std::abs(row.global_utility));
    }
    for (const auto& learner : result.learners) {
      ExpectDistribution(learner.strategy);
      for (double r : learner.avg_regret) EXPECT_LE(std::abs(r), 2.0 * max_w);
    }
  }
}

TEST(DynamicsPropertyTest, RunsAreDeterministic) {
  const Game game = GenTaskGame({.n_agents = 4, .n_targets = 6, .seed = 12}).game;
  for (Algorithm algorithm : {Algorithm::kSorm, Algorithm::kLurm, Algorithm::kGurm}) {
    DynamicsConfig config = Config(21);
    config.iterations = 1500;
    config.max_rounds = 3;
    const RunResult a = RunAlgorithm(algorithm, game, config);
    const RunResult b = RunAlgorithm(algorithm, game, config);
    EXPECT_EQ(TraceCsv(a.trace), TraceCsv(b.trace));
    EXPECT_EQ(a.final_profile, b.final_profile);
  }
}

}  // namespace
}  // namespace arena
