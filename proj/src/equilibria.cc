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

#include "arena/equilibria.h"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace arena {
namespace {

int Sign(double x) {
  if (x > kUtilityTolerance) return 1;
  if (x < -kUtilityTolerance) return -1;
  return 0;
}

std::vector<double> PayoffVector(const Game& game,
                                 std::span<const int> profile) {
  std::vector<double> out(game.NumPlayers());
  for (int i = 0; i < game.NumPlayers(); ++i) {
    out[i] = game.PayoffUnchecked(profile, i);
  }
  return out;
}

// `a` Pareto-dominates `b`.
bool Dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - kUtilityTolerance) return false;
    if (a[i] > b[i] + kUtilityTolerance) strict = true;
  }
  return strict;
}

}  // namespace

bool IsPsne(const Game& game, std::span<const int> profile) {
  game.ValidateProfile(profile);
  ActionProfile deviated(profile.begin(), profile.end());
  for (int i = 0; i < game.NumPlayers(); ++i) {
    const double current = game.PayoffUnchecked(profile, i);
    for (int k = 0; k < game.NumActions(i); ++k) {
      if (k == profile[i]) continue;
      deviated[i] = k;
      const double alt = game.PayoffUnchecked(deviated, i);
      if (alt > current + kUtilityTolerance) return false;
    }
    deviated[i] = profile[i];
  }
  return true;
}

std::vector<ActionProfile> PsneSet(const Game& game, std::uint64_t guard) {
  CheckEnumerable(game.NumProfiles(), guard);
  std::vector<ActionProfile> out;
  ActionProfile profile(game.NumPlayers(), 0);
  do {
    if (IsPsne(game, profile)) out.push_back(profile);
  } while (NextProfile(profile, game.ActionCounts()));
  return out;
}

SocialOptimum FindSocialOptimum(const Game& game, std::uint64_t guard) {
  CheckEnumerable(game.NumProfiles(), guard);
  SocialOptimum best{{}, -std::numeric_limits<double>::infinity()};
  ActionProfile profile(game.NumPlayers(), 0);
  do {
    const double w = game.GlobalUtilityUnchecked(profile);
    if (w > best.welfare) best = {profile, w};
  } while (NextProfile(profile, game.ActionCounts()));
  return best;
}

bool IsParetoOptimal(const Game& game, std::span<const int> profile,
                     std::uint64_t guard) {
  game.ValidateProfile(profile);
  CheckEnumerable(game.NumProfiles(), guard);
  const std::vector<double> target = PayoffVector(game, profile);
  ActionProfile other(game.NumPlayers(), 0);
  do {
    if (Dominates(PayoffVector(game, other), target)) return false;
  } while (NextProfile(other, game.ActionCounts()));
  return true;
}

std::vector<ActionProfile> ParetoSet(const Game& game, std::uint64_t guard) {
  CheckEnumerable(game.NumProfiles(), guard);
  std::vector<ActionProfile> profiles;
  std::vector<std::vector<double>> payoffs;
  ActionProfile profile(game.NumPlayers(), 0);
  do {
    profiles.push_back(profile);
    payoffs.push_back(PayoffVector(game, profile));
  } while (NextProfile(profile, game.ActionCounts()));
  // O(N^2); the guard on N keeps this honest for the sizes we enumerate.
  std::vector<ActionProfile> out;
  for (std::size_t a = 0; a < profiles.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < profiles.size() && !dominated; ++b) {
      dominated = b != a && Dominates(payoffs[b], payoffs[a]);
    }
    if (!dominated) out.push_back(profiles[a]);
  }
  return out;
}

void EmpiricalDistribution::Add(const ActionProfile& profile,
                                std::int64_t count) {
  counts[profile] += count;
  total += count;
}

double EmpiricalDistribution::Probability(const ActionProfile& profile) const {
  const auto it = counts.find(profile);
  if (it == counts.end() || total == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

EmpiricalDistribution EmpiricalDistributionFromTrace(const RunTrace& trace,
                                                     double burn_in) {
  if (!(burn_in >= 0.0 && burn_in < 1.0)) {
    throw std::invalid_argument("burn_in must be in [0, 1)");
  }
  if (!trace.HasProfiles()) {
    throw std::invalid_argument("trace has no recorded profiles");
  }
  const std::size_t rows = trace.rows.size();
  const auto skip = static_cast<std::size_t>(burn_in * static_cast<double>(rows));
  if (skip >= rows) {
    throw std::invalid_argument("no iterations left after burn-in");
  }
  EmpiricalDistribution dist;
  for (std::size_t r = skip; r < rows; ++r) dist.Add(trace.ProfileAt(r));
  return dist;
}

double CceRegret(const Game& game, const EmpiricalDistribution& dist) {
  if (dist.total <= 0) throw std::invalid_argument("empty distribution");
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.NumPlayers(); ++i) {
    for (int k = 0; k < game.NumActions(i); ++k) {
      double expected_gain = 0.0;
      for (const auto& [profile, count] : dist.counts) {
        const double p =
            static_cast<double>(count) / static_cast<double>(dist.total);
        expected_gain += p * (game.CounterfactualPayoff(profile, i, k) -
                              game.Payoff(profile, i));
      }
      worst = std::max(worst, expected_gain);
    }
  }
  return worst;
}

EquilibriumReport AnalyzeGame(const Game& game, std::uint64_t guard) {
  EquilibriumReport report;
  report.psne_set = PsneSet(game, guard);
  report.social_optimum = FindSocialOptimum(game, guard);
  report.pareto_set = ParetoSet(game, guard);
  report.is_exhaustive = true;
  return report;
}

nlohmann::json ReportToJson(const EquilibriumReport& report) {
  nlohmann::json j;
  j["psne_set"] = report.psne_set;
  j["social_optimum"] = {{"profile", report.social_optimum.profile},
                         {"W", report.social_optimum.welfare}};
  j["pareto_set"] = report.pareto_set;
  j["is_exhaustive"] = report.is_exhaustive;
  return j;
}

bool AlignmentCheck(const Game& game, int samples, std::uint64_t seed,
                    std::uint64_t guard) {
  CheckEnumerable(game.NumProfiles(), guard);
  const Game aligned = MakeAligned(game);
  std::mt19937_64 rng(seed);
  const int n = game.NumPlayers();
  ActionProfile first(n), second(n);
  for (int s = 0; s < samples; ++s) {
    const int i = static_cast<int>(rng() % n);
    for (int j = 0; j < n; ++j) {
      first[j] = static_cast<int>(rng() % game.NumActions(j));
    }
    second = first;
    second[i] = static_cast<int>(rng() % game.NumActions(i));
    const double local_change =
        aligned.Payoff(first, i) - aligned.Payoff(second, i);
    const double global_change =
        game.GlobalUtility(first) - game.GlobalUtility(second);
    if (Sign(local_change) != Sign(global_change)) return false;
  }
  const std::vector<ActionProfile> equilibria = PsneSet(aligned, guard);
  if (equilibria.empty()) return false;
  const SocialOptimum optimum = FindSocialOptimum(game, guard);
  return std::find(equilibria.begin(), equilibria.end(), optimum.profile) !=
         equilibria.end();
}

}  // namespace arena
