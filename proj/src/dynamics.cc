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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace arena {
namespace {

constexpr double kPureMass = 1.0 - 1e-6;

bool HasPositive(std::span<const double> values) {
  return std::any_of(values.begin(), values.end(),
                     [](double v) { return v > 0.0; });
}

double MaxRegret(const std::vector<LearnerState>& learners) {
  double best = -std::numeric_limits<double>::infinity();
  for (const LearnerState& learner : learners) {
    for (double r : learner.avg_regret) best = std::max(best, r);
  }
  return best;
}

// u^g(k, a_-i) for every k. The played entry is `realized` itself so that it
// is bitwise equal to the realized global utility.
void GlobalCounterfactuals(const Game& game, ActionProfile& profile,
                           int player, double realized,
                           std::vector<double>& out) {
  const int played = profile[player];
  out.resize(game.ActionCounts()[player]);
  for (int k = 0; k < static_cast<int>(out.size()); ++k) {
    if (k == played) {
      out[k] = realized;
      continue;
    }
    profile[player] = k;
    out[k] = game.GlobalUtilityUnchecked(profile);
  }
  profile[player] = played;
}

void LocalCounterfactuals(const Game& game, ActionProfile& profile, int player,
                          std::vector<double>& out) {
  const int played = profile[player];
  out.resize(game.ActionCounts()[player]);
  for (int k = 0; k < static_cast<int>(out.size()); ++k) {
    profile[player] = k;
    out[k] = game.PayoffUnchecked(profile, player);
  }
  profile[player] = played;
}

std::vector<std::vector<double>> Strategies(
    const std::vector<LearnerState>& learners) {
  std::vector<std::vector<double>> out;
  out.reserve(learners.size());
  for (const LearnerState& learner : learners) out.push_back(learner.strategy);
  return out;
}

void ResetLearners(const Game& game, std::vector<LearnerState>& learners) {
  learners.clear();
  for (int c : game.ActionCounts()) learners.push_back(LearnerState::Uniform(c));
}

void AppendRow(RunTrace& trace, const TraceRow& row,
               std::span<const int> profile, bool record_profile) {
  trace.rows.push_back(row);
  if (record_profile) {
    trace.profiles.insert(trace.profiles.end(), profile.begin(), profile.end());
  }
}

// LURM and GURM differ only in which utility feeds the regrets.
RunResult RegretMatchingRun(const Game& game, const DynamicsConfig& config,
                            bool global) {
  config.Validate();
  const int n = game.NumPlayers();
  std::mt19937_64 rng(config.seed);

  RunResult result;
  result.algorithm = global ? Algorithm::kGurm : Algorithm::kLurm;
  result.rounds = 1;
  result.trace.n_players = n;
  ResetLearners(game, result.learners);
  auto& learners = result.learners;

  PureConvergenceTracker tracker(config.convergence_window);
  ActionProfile profile(n, 0);
  std::vector<double> counterfactual;
  const auto pairs = static_cast<std::int64_t>(n) * (n - 1);
  bool converged = false;
  bool budget_hit = false;

  for (std::int64_t t = 1; t <= config.iterations; ++t) {
    if (config.max_total_iterations > 0 && t > config.max_total_iterations) {
      budget_hit = true;
      break;
    }
    for (int i = 0; i < n; ++i) {
      profile[i] = SampleAction(learners[i].strategy, rng);
    }
    if (global) {
      RecordIteration(result.ledger, game.ActionCounts());
    } else {
      // Players only need to see each other's actions.
      RecordTraffic(result.ledger, pairs, pairs);
    }
    const double w = game.GlobalUtilityUnchecked(profile);
    for (int i = 0; i < n; ++i) {
      double realized;
      if (global) {
        GlobalCounterfactuals(game, profile, i, w, counterfactual);
        realized = w;
      } else {
        LocalCounterfactuals(game, profile, i, counterfactual);
        realized = counterfactual[profile[i]];
      }
      RegretUpdate(learners[i], realized, counterfactual);
      learners[i].strategy = MatchRegrets(learners[i].avg_regret, 0.0);
    }

    const auto strategies = Strategies(learners);
    const bool pure_now = PureProfile(strategies).has_value();
    TraceRow row{.round = 1,
                 .t = t,
                 .iteration = t,
                 .global_utility = w,
                 .threshold = 0.0,
                 .omega = 0.0,
                 .max_avg_regret = MaxRegret(learners),
                 .pure = pure_now,
                 .cumulative_messages = result.ledger.cumulative_queries};
    AppendRow(result.trace, row, profile, config.record_profiles);

    // Plain regret matching has no certificate, so it runs the full horizon;
    // the first detection is only reported.
    converged = tracker.Update(strategies);
    if (converged && !result.trace.first_convergence) {
      result.trace.first_convergence = t;
    }
  }

  result.status = converged    ? RunStatus::kConverged
                  : budget_hit ? RunStatus::kBudgetExhausted
                               : RunStatus::kNotConverged;
  result.final_profile = profile;
  result.final_w = game.GlobalUtility(profile);
  result.final_strategies = Strategies(learners);
  return result;
}

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kSorm:
      return "sorm";
    case Algorithm::kLurm:
      return "lurm";
    case Algorithm::kGurm:
      return "gurm";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "sorm") return Algorithm::kSorm;
  if (name == "lurm") return Algorithm::kLurm;
  if (name == "gurm") return Algorithm::kGurm;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected sorm, lurm or gurm)");
}

void DynamicsConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("dynamics config: " + what);
  };
  if (!(delta > 0.0 && delta <= 1.0)) fail("delta must be in (0, 1]");
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must be in (0, 1]");
  if (iterations < 1) fail("iterations must be >= 1");
  if (max_rounds < 1) fail("max_rounds must be >= 1");
  if (!(prune_eps >= 0.0 && prune_eps < 1.0)) fail("prune_eps must be in [0, 1)");
  if (convergence_window < 1) fail("convergence_window must be >= 1");
  if (!(delta_u >= 0.0) || !std::isfinite(delta_u)) fail("delta_u must be >= 0");
  if (!(delta_u_fraction >= 0.0) || !std::isfinite(delta_u_fraction)) {
    fail("delta_u_fraction must be >= 0");
  }
  if (max_total_iterations < 0) fail("max_total_iterations must be >= 0");
}

nlohmann::json DynamicsConfigToJson(const DynamicsConfig& c) {
  return {{"delta", c.delta},
          {"gamma", c.gamma},
          {"iterations", c.iterations},
          {"max_rounds", c.max_rounds},
          {"prune", c.prune},
          {"prune_eps", c.prune_eps},
          {"convergence_window", c.convergence_window},
          {"delta_u", c.delta_u},
          {"delta_u_fraction", c.delta_u_fraction},
          {"stop_on_convergence", c.stop_on_convergence},
          {"max_total_iterations", c.max_total_iterations},
          {"record_profiles", c.record_profiles},
          {"seed", c.seed}};
}

DynamicsConfig DynamicsConfigFromJson(const nlohmann::json& j,
                                      DynamicsConfig base) {
  if (!j.is_object()) {
    throw std::invalid_argument("dynamics config must be a JSON object");
  }
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "delta") {
        base.delta = value.get<double>();
      } else if (key == "gamma") {
        base.gamma = value.get<double>();
      } else if (key == "iterations" || key == "T") {
        base.iterations = value.get<std::int64_t>();
      } else if (key == "max_rounds") {
        base.max_rounds = value.get<int>();
      } else if (key == "prune") {
        base.prune = value.get<bool>();
      } else if (key == "prune_eps") {
        base.prune_eps = value.get<double>();
      } else if (key == "convergence_window") {
        base.convergence_window = value.get<int>();
      } else if (key == "delta_u") {
        base.delta_u = value.get<double>();
      } else if (key == "delta_u_fraction") {
        base.delta_u_fraction = value.get<double>();
      } else if (key == "stop_on_convergence") {
        base.stop_on_convergence = value.get<bool>();
      } else if (key == "max_total_iterations") {
        base.max_total_iterations = value.get<std::int64_t>();
      } else if (key == "record_profiles") {
        base.record_profiles = value.get<bool>();
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else {
        throw std::invalid_argument("unknown dynamics key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("dynamics config: ") + e.what());
  }
  base.Validate();
  return base;
}

LearnerState LearnerState::Uniform(int num_actions) {
  LearnerState state;
  state.avg_regret.assign(num_actions, 0.0);
  state.strategy.assign(num_actions, 1.0 / num_actions);
  return state;
}

void RegretUpdate(LearnerState& state, double realized,
                  std::span<const double> counterfactual) {
  if (counterfactual.size() != state.avg_regret.size()) {
    throw std::invalid_argument("counterfactual vector has " +
                                std::to_string(counterfactual.size()) +
                                " entries, player has " +
                                std::to_string(state.avg_regret.size()) +
                                " actions");
  }
  ++state.t;
  const double inv_t = 1.0 / static_cast<double>(state.t);
  for (std::size_t k = 0; k < counterfactual.size(); ++k) {
    const double instant = counterfactual[k] - realized;
    state.avg_regret[k] += (instant - state.avg_regret[k]) * inv_t;
  }
}

double ExplorationRate(const DynamicsConfig& config, std::int64_t t) {
  return config.delta / std::pow(static_cast<double>(t), config.gamma);
}

std::vector<double> MatchRegrets(std::span<const double> regrets,
                                 double exploration) {
  const std::size_t m = regrets.size();
  std::vector<double> strategy(m, 1.0 / static_cast<double>(m));
  double positive_sum = 0.0;
  for (double r : regrets) positive_sum += std::max(r, 0.0);
  if (!(positive_sum > 0.0)) return strategy;
  const double floor = exploration / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    strategy[k] =
        (1.0 - exploration) * std::max(regrets[k], 0.0) / positive_sum + floor;
  }
  return strategy;
}

std::vector<double> StrategyFromRegrets(const LearnerState& state,
                                        std::int64_t t,
                                        const DynamicsConfig& config,
                                        bool lock, int current_action) {
  if (lock) {
    std::vector<double> strategy(state.avg_regret.size(), 0.0);
    strategy.at(current_action) = 1.0;
    return strategy;
  }
  return MatchRegrets(state.avg_regret, ExplorationRate(config, t));
}

std::vector<double> PruneStrategy(std::span<const double> strategy,
                                  double eps) {
  std::vector<double> out(strategy.begin(), strategy.end());
  double kept = 0.0;
  for (double& p : out) {
    if (p <= eps) p = 0.0;
    kept += p;
  }
  if (kept > 0.0) {
    for (double& p : out) p /= kept;
    return out;
  }
  const auto best = std::max_element(strategy.begin(), strategy.end());
  std::fill(out.begin(), out.end(), 0.0);
  out[best - strategy.begin()] = 1.0;
  return out;
}

void ThresholdUpdate(
    ThresholdMonitor& monitor,
    const std::vector<std::vector<double>>& counterfactual_globals) {
  for (const auto& player : counterfactual_globals) {
    for (double u : player) monitor.threshold = std::max(monitor.threshold, u);
  }
}

double Satisfaction(const ThresholdMonitor& monitor, double realized_w) {
  const double u = monitor.threshold;
  if (u > 0.0) return realized_w / u;
  if (u < 0.0 && realized_w < 0.0) return u / realized_w;
  return 0.0;
}

std::optional<ActionProfile> PureProfile(
    const std::vector<std::vector<double>>& strategies) {
  ActionProfile profile(strategies.size());
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    const auto& s = strategies[i];
    const auto top = std::max_element(s.begin(), s.end());
    if (top == s.end() || *top < kPureMass) return std::nullopt;
    profile[i] = static_cast<int>(top - s.begin());
  }
  return profile;
}

bool DetectPureConvergence(const std::vector<std::vector<double>>& strategies,
                           std::span<const ActionProfile> window_history,
                           int window) {
  const auto profile = PureProfile(strategies);
  if (!profile) return false;
  const auto needed = static_cast<std::size_t>(std::max(window - 1, 0));
  if (window_history.size() < needed) return false;
  return std::all_of(window_history.end() - needed, window_history.end(),
                     [&](const ActionProfile& p) { return p == *profile; });
}

bool PureConvergenceTracker::Update(
    const std::vector<std::vector<double>>& strategies) {
  auto profile = PureProfile(strategies);
  if (!profile) {
    streak_ = 0;
    return false;
  }
  if (streak_ > 0 && *profile == last_) {
    ++streak_;
  } else {
    streak_ = 1;
    last_ = std::move(*profile);
  }
  return streak_ >= window_;
}

ActionProfile RunTrace::ProfileAt(std::size_t row) const {
  const auto begin = profiles.begin() + row * n_players;
  return ActionProfile(begin, begin + n_players);
}

std::string FormatDouble(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void WriteTraceCsv(const RunTrace& trace, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const TraceRow& row : trace.rows) {
    out << row.round << ',' << row.t << ',' << FormatDouble(row.global_utility)
        << ',' << FormatDouble(row.threshold) << ',' << FormatDouble(row.omega)
        << ',' << FormatDouble(row.max_avg_regret) << ',' << (row.pure ? 1 : 0)
        << ',' << row.cumulative_messages << '\n';
  }
}

void WriteProfilesCsv(const RunTrace& trace, std::ostream& out) {
  out << "iteration";
  for (int i = 0; i < trace.n_players; ++i) out << ",a" << i;
  out << '\n';
  if (!trace.HasProfiles()) return;
  for (std::size_t r = 0; r < trace.rows.size(); ++r) {
    out << trace.rows[r].iteration;
    for (int i = 0; i < trace.n_players; ++i) {
      out << ',' << trace.profiles[r * trace.n_players + i];
    }
    out << '\n';
  }
}

std::string_view RunStatusName(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged:
      return "converged";
    case RunStatus::kMaxRoundsExhausted:
      return "max_rounds_exhausted";
    case RunStatus::kBudgetExhausted:
      return "budget_exhausted";
    case RunStatus::kNotConverged:
      return "not_converged";
  }
  return "unknown";
}

int SampleAction(std::span<const double> probs, std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    cumulative += probs[k];
    last_positive = static_cast<int>(k);
    if (u < cumulative) return last_positive;
  }
  // Rounding left the cumulative sum just below u.
  return last_positive;
}

RunResult SormRun(const Game& game, const DynamicsConfig& config) {
  config.Validate();
  const int n = game.NumPlayers();
  std::mt19937_64 rng(config.seed);

  RunResult result;
  result.algorithm = Algorithm::kSorm;
  result.trace.n_players = n;
  ThresholdMonitor& monitor = result.monitor;
  auto& learners = result.learners;

  ActionProfile profile(n, 0);
  std::vector<std::vector<double>> counterfactual(n);
  std::int64_t iteration = 0;
  bool certified = false;
  bool budget_hit = false;

  // Round 1 has no earlier converged point to improve on, so its omega is
  // never taken as a certificate; later rounds start from a threshold raised
  // by dU and stop once a round ends on a profile that meets it.
  for (int round = 1; round <= config.max_rounds; ++round) {
    result.rounds = round;
    const bool certifying = round > 1 && monitor.delta_u > 0.0;
    if (round > 1) monitor.threshold += monitor.delta_u;
    ResetLearners(game, learners);
    PureConvergenceTracker tracker(config.convergence_window);

    for (std::int64_t t = 1; t <= config.iterations; ++t) {
      if (config.max_total_iterations > 0 &&
          iteration >= config.max_total_iterations) {
        budget_hit = true;
        break;
      }
      ++iteration;
      for (int i = 0; i < n; ++i) {
        profile[i] = SampleAction(learners[i].strategy, rng);
      }
      RecordIteration(result.ledger, game.ActionCounts());

      const double w = game.GlobalUtilityUnchecked(profile);
      for (int i = 0; i < n; ++i) {
        GlobalCounterfactuals(game, profile, i, w, counterfactual[i]);
      }
      ThresholdUpdate(monitor, counterfactual);
      if (monitor.delta_u == 0.0) {
        monitor.delta_u = config.delta_u > 0.0
                              ? config.delta_u
                              : config.delta_u_fraction *
                                    std::abs(monitor.threshold);
      }

      // Every player sees the same u^g(a^t), so they lock together.
      const bool lock = w >= monitor.threshold;
      for (int i = 0; i < n; ++i) {
        LearnerState& learner = learners[i];
        RegretUpdate(learner, w, counterfactual[i]);
        learner.locked = lock;
        learner.strategy =
            StrategyFromRegrets(learner, t, config, lock, profile[i]);
        if (!lock && config.prune && HasPositive(learner.avg_regret)) {
          learner.strategy = PruneStrategy(learner.strategy, config.prune_eps);
        }
      }

      monitor.omega = Satisfaction(monitor, w);
      bool stable = true;
      for (int i = 0; i < n; ++i) {
        const auto& cf = counterfactual[i];
        const auto top = std::max_element(cf.begin(), cf.end());
        if (*top > w) stable = false;
        if (*top > monitor.best_seen_w) {
          ActionProfile candidate = profile;
          candidate[i] = static_cast<int>(top - cf.begin());
          monitor.best_seen_w = game.GlobalUtilityUnchecked(candidate);
          monitor.best_seen_profile = std::move(candidate);
        }
      }
      if (stable && w > monitor.best_w) {
        monitor.best_w = w;
        monitor.best_profile = profile;
      }

      const auto strategies = Strategies(learners);
      TraceRow row{.round = round,
                   .t = t,
                   .iteration = iteration,
                   .global_utility = w,
                   .threshold = monitor.threshold,
                   .omega = monitor.omega,
                   .max_avg_regret = MaxRegret(learners),
                   .pure = PureProfile(strategies).has_value(),
                   .cumulative_messages = result.ledger.cumulative_queries};
      AppendRow(result.trace, row, profile, config.record_profiles);

      if (tracker.Update(strategies)) {
        if (!result.trace.first_convergence) {
          result.trace.first_convergence = iteration;
        }
        if (config.stop_on_convergence) break;
      }
    }

    if (certifying && !budget_hit && monitor.omega >= 1.0) {
      certified = true;
      break;
    }
    if (budget_hit) break;
  }

  if (certified) {
    result.status = RunStatus::kConverged;
    result.final_profile = profile;
  } else {
    result.status = budget_hit ? RunStatus::kBudgetExhausted
                               : RunStatus::kMaxRoundsExhausted;
    result.final_profile = !monitor.best_profile.empty() ? monitor.best_profile
                           : !monitor.best_seen_profile.empty()
                               ? monitor.best_seen_profile
                               : profile;
  }
  result.final_w = game.GlobalUtility(result.final_profile);
  result.final_omega = monitor.omega;
  result.final_strategies = Strategies(learners);
  return result;
}

RunResult LurmRun(const Game& game, const DynamicsConfig& config) {
  return RegretMatchingRun(game, config, /*global=*/false);
}

RunResult GurmRun(const Game& game, const DynamicsConfig& config) {
  return RegretMatchingRun(game, config, /*global=*/true);
}

RunResult RunAlgorithm(Algorithm algorithm, const Game& game,
                       const DynamicsConfig& config) {
  switch (algorithm) {
    case Algorithm::kSorm:
      return SormRun(game, config);
    case Algorithm::kLurm:
      return LurmRun(game, config);
    case Algorithm::kGurm:
      return GurmRun(game, config);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace arena
