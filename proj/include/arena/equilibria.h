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

#ifndef ARENA_EQUILIBRIA_H_
#define ARENA_EQUILIBRIA_H_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "arena/dynamics.h"
#include "arena/game.h"
#include "json.hpp"

// Ground truth for small games: exhaustive PSNE, Pareto and social-optimum
// oracles, plus checks that scale to large games (unilateral deviations) and
// coarse-correlated-equilibrium regret of empirical play.

namespace arena {

// Utility differences within this tolerance count as ties.
inline constexpr double kUtilityTolerance = 1e-9;

// No player gains more than the tolerance by a unilateral deviation.
// Costs sum_i |A_i| payoff queries.
bool IsPsne(const Game& game, std::span<const int> profile);

// All PSNE in lexicographic order.
std::vector<ActionProfile> PsneSet(
    const Game& game, std::uint64_t guard = kDefaultEnumerationGuard);

struct SocialOptimum {
  ActionProfile profile;
  double welfare = 0.0;
};
// Lexicographically first maximizer of the global utility.
SocialOptimum FindSocialOptimum(const Game& game,
                                std::uint64_t guard = kDefaultEnumerationGuard);

// No other profile weakly improves every player and strictly improves one.
bool IsParetoOptimal(const Game& game, std::span<const int> profile,
                     std::uint64_t guard = kDefaultEnumerationGuard);
std::vector<ActionProfile> ParetoSet(
    const Game& game, std::uint64_t guard = kDefaultEnumerationGuard);

struct EmpiricalDistribution {
  std::map<ActionProfile, std::int64_t> counts;
  std::int64_t total = 0;

  void Add(const ActionProfile& profile, std::int64_t count = 1);
  double Probability(const ActionProfile& profile) const;
};

// Visit counts over the trace rows after the first floor(burn_in * rows).
// Throws std::invalid_argument if the trace has no profiles left.
EmpiricalDistribution EmpiricalDistributionFromTrace(const RunTrace& trace,
                                                     double burn_in);

// max over players i and fixed deviations a'_i of
// sum_a P(a) [u_i(a'_i, a_-i) - u_i(a)]. The distribution is an eps-CCE iff
// the result is <= eps.
double CceRegret(const Game& game, const EmpiricalDistribution& dist);

struct EquilibriumReport {
  std::vector<ActionProfile> psne_set;
  SocialOptimum social_optimum;
  std::vector<ActionProfile> pareto_set;
  bool is_exhaustive = false;
};

EquilibriumReport AnalyzeGame(const Game& game,
                              std::uint64_t guard = kDefaultEnumerationGuard);
nlohmann::json ReportToJson(const EquilibriumReport& report);

// Builds the game where every u_i is the global utility and checks
// (a) the sign of every sampled unilateral utility change matches the sign of
//     the global change, and
// (b) the aligned game has a PSNE and the social optimum is one of them.
bool AlignmentCheck(const Game& game, int samples, std::uint64_t seed,
                    std::uint64_t guard = kDefaultEnumerationGuard);

}  // namespace arena

#endif  // ARENA_EQUILIBRIA_H_
