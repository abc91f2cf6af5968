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

#ifndef ARENA_DYNAMICS_H_
#define ARENA_DYNAMICS_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arena/comms.h"
#include "arena/game.h"
#include "json.hpp"

// Regret-matching learning dynamics on repeated normal-form games.
//
//   LURM  plain regret matching on each player's local utility.
//   GURM  plain regret matching on the global utility u^g.
//   SORM  regret matching on u^g with decaying uniform exploration, a
//         synchronized satisfaction threshold U that locks players onto a
//         profile once its global utility reaches U, and an outer loop that
//         raises U by a step dU and restarts learning until a round ends on
//         a profile that meets the raised threshold.
//
// All three share the same average-regret bookkeeping and sampling, and all
// runs are deterministic functions of (game, config).

namespace arena {

enum class Algorithm { kSorm, kLurm, kGurm };

std::string_view AlgorithmName(Algorithm algorithm);
// Throws std::invalid_argument for an unknown name.
Algorithm ParseAlgorithm(std::string_view name);

struct DynamicsConfig {
  // Exploration rate at inner iteration t is delta / t^gamma.
  double delta = 0.5;
  double gamma = 0.5;
  // Inner iterations per round (T).
  std::int64_t iterations = 10000;
  // Outer-loop cap for SORM. LURM and GURM always run a single round.
  int max_rounds = 50;
  // Zero out strategy entries at or below prune_eps in SORM's exploratory
  // branch.
  bool prune = true;
  double prune_eps = 0.03;
  // Consecutive iterations with identical one-hot strategies that count as
  // pure convergence.
  int convergence_window = 50;
  // Threshold step. When delta_u is 0 the step is delta_u_fraction of the
  // first nonzero threshold the run observes.
  double delta_u = 0.0;
  double delta_u_fraction = 0.02;
  // End a SORM round as soon as pure convergence is detected. LURM and GURM
  // always run the full horizon.
  bool stop_on_convergence = true;
  // Cap on iterations summed over all rounds; 0 means no cap.
  std::int64_t max_total_iterations = 0;
  // Keep every sampled profile in the trace.
  bool record_profiles = true;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

nlohmann::json DynamicsConfigToJson(const DynamicsConfig& config);
// Starts from `base` and overrides the fields present in `j`. Unknown keys
// are rejected.
DynamicsConfig DynamicsConfigFromJson(const nlohmann::json& j,
                                      DynamicsConfig base = {});

// Per-player learner state.
struct LearnerState {
  std::vector<double> avg_regret;
  std::vector<double> strategy;
  bool locked = false;
  // Number of regret updates folded into avg_regret.
  std::int64_t t = 0;

  static LearnerState Uniform(int num_actions);
};

// Folds one observation into the running time-average regret:
// R(k) <- R(k) + ([u(k, a_-i) - u(a)] - R(k)) / t.
// `counterfactual[k]` is the utility had the player switched to k.
void RegretUpdate(LearnerState& state, double realized,
                  std::span<const double> counterfactual);

double ExplorationRate(const DynamicsConfig& config, std::int64_t t);

// (1 - exploration) * [R]+ / sum [R]+ + exploration / |A|, or uniform when no
// regret is positive.
std::vector<double> MatchRegrets(std::span<const double> regrets,
                                 double exploration);

// SORM's next strategy. With `lock` the player stays on `current_action`;
// otherwise exploratory regret matching at rate delta / t^gamma.
std::vector<double> StrategyFromRegrets(const LearnerState& state,
                                        std::int64_t t,
                                        const DynamicsConfig& config,
                                        bool lock, int current_action);

// Zeroes entries <= eps and renormalizes. If every entry is <= eps the
// largest (lowest index on ties) gets probability 1.
std::vector<double> PruneStrategy(std::span<const double> strategy, double eps);

// Synchronized satisfaction threshold shared by all SORM players.
struct ThresholdMonitor {
  double threshold = 0.0;  // U
  double delta_u = 0.0;    // dU, 0 until known
  double omega = 0.0;
  // Highest-welfare realized profile that no unilateral deviation improved
  // at the time it was played, i.e. a pure equilibrium of the global-utility
  // game. Empty until one is seen.
  ActionProfile best_profile;
  double best_w = -std::numeric_limits<double>::infinity();
  // Highest-welfare profile evaluated at all, realized or counterfactual.
  ActionProfile best_seen_profile;
  double best_seen_w = -std::numeric_limits<double>::infinity();
};

// U <- max(U, max_i max_k u^g(k, a_-i)).
void ThresholdUpdate(ThresholdMonitor& monitor,
                     const std::vector<std::vector<double>>& counterfactual_globals);

// Realized welfare over U; 0 while U is 0. For a negative threshold the ratio
// is inverted (U / W) so that 1 still means "meets the threshold".
double Satisfaction(const ThresholdMonitor& monitor, double realized_w);

// The profile induced by one-hot strategies (mass >= 1 - 1e-6), if any.
std::optional<ActionProfile> PureProfile(
    const std::vector<std::vector<double>>& strategies);

// True iff the strategies are one-hot and their profile matches the last
// window - 1 entries of `window_history` (oldest first).
bool DetectPureConvergence(const std::vector<std::vector<double>>& strategies,
                           std::span<const ActionProfile> window_history,
                           int window);

// Streaming form of DetectPureConvergence.
class PureConvergenceTracker {
 public:
  explicit PureConvergenceTracker(int window) : window_(window) {}
  bool Update(const std::vector<std::vector<double>>& strategies);
  void Reset() { streak_ = 0; }

 private:
  int window_;
  int streak_ = 0;
  ActionProfile last_;
};

struct TraceRow {
  int round = 1;
  std::int64_t t = 0;          // iteration within the round
  std::int64_t iteration = 0;  // iteration over the whole run
  double global_utility = 0.0;
  double threshold = 0.0;
  double omega = 0.0;
  double max_avg_regret = 0.0;
  bool pure = false;
  std::int64_t cumulative_messages = 0;
};

struct RunTrace {
  int n_players = 0;
  std::vector<TraceRow> rows;
  // Row-major sampled profiles, n_players per row; empty when not recorded.
  std::vector<int> profiles;
  // Run iteration at which pure convergence was first detected.
  std::optional<std::int64_t> first_convergence;

  bool HasProfiles() const { return !profiles.empty(); }
  ActionProfile ProfileAt(std::size_t row) const;
};

inline constexpr std::string_view kTraceCsvHeader =
    "round,t,global_utility,U,omega,max_avg_regret,pure_profile_flag,"
    "cumulative_messages";

// Doubles are written in shortest round-trip form.
void WriteTraceCsv(const RunTrace& trace, std::ostream& out);
void WriteProfilesCsv(const RunTrace& trace, std::ostream& out);
std::string FormatDouble(double value);

enum class RunStatus {
  kConverged,           // SORM certified omega = 1; others reached pure play
  kMaxRoundsExhausted,  // SORM only
  kBudgetExhausted,     // max_total_iterations reached first
  kNotConverged,        // LURM/GURM ran T iterations without pure play
};
std::string_view RunStatusName(RunStatus status);

struct RunResult {
  Algorithm algorithm = Algorithm::kSorm;
  RunStatus status = RunStatus::kNotConverged;
  ActionProfile final_profile;
  double final_w = 0.0;
  double final_omega = 0.0;
  std::vector<std::vector<double>> final_strategies;
  std::vector<LearnerState> learners;
  ThresholdMonitor monitor;
  CommsLedger ledger;
  RunTrace trace;
  int rounds = 0;
};

RunResult SormRun(const Game& game, const DynamicsConfig& config);
RunResult LurmRun(const Game& game, const DynamicsConfig& config);
RunResult GurmRun(const Game& game, const DynamicsConfig& config);
RunResult RunAlgorithm(Algorithm algorithm, const Game& game,
                       const DynamicsConfig& config);

// Draws an index from `probs` with one 53-bit uniform.
int SampleAction(std::span<const double> probs, std::mt19937_64& rng);

}  // namespace arena

#endif  // ARENA_DYNAMICS_H_
