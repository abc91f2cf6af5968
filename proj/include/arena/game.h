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

#ifndef ARENA_GAME_H_
#define ARENA_GAME_H_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

// Finite normal-form games: players, per-player action sets and a pure
// payoff evaluator. Everything downstream (learning dynamics, equilibrium
// oracles, message accounting) talks to a game through this interface.

namespace arena {

// Exhaustive oracles refuse games with more joint profiles than this unless
// the caller passes a larger limit explicitly.
inline constexpr std::uint64_t kDefaultEnumerationGuard = 10'000'000;

// Raised when an exhaustive computation would exceed its enumeration guard.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Throws SizeLimitError naming the profile count when it exceeds `guard`.
void CheckEnumerable(std::uint64_t num_profiles, std::uint64_t guard);

// One pure action index per player.
using ActionProfile = std::vector<int>;

// Utility of `player` at a pure profile. Must be deterministic and reentrant.
using PayoffFn = std::function<double(int player, std::span<const int> profile)>;

// Optional fast path for the sum of all payoffs at a profile. When absent the
// sum is computed from PayoffFn.
using WelfareFn = std::function<double(std::span<const int> profile)>;

class Game {
 public:
  Game(std::vector<int> action_counts, PayoffFn payoff, WelfareFn welfare = {},
       std::string name = {});

  int NumPlayers() const { return static_cast<int>(action_counts_.size()); }
  int NumActions(int player) const;
  const std::vector<int>& ActionCounts() const { return action_counts_; }
  int MaxActions() const;
  const std::string& Name() const { return name_; }

  // Human-readable action names, metadata only. Empty when not provided.
  const std::vector<std::vector<std::string>>& ActionLabels() const {
    return labels_;
  }
  void SetActionLabels(std::vector<std::vector<std::string>> labels);

  // Throws std::invalid_argument when the profile has the wrong length or an
  // out-of-range action.
  void ValidateProfile(std::span<const int> profile) const;

  double Payoff(std::span<const int> profile, int player) const;
  double GlobalUtility(std::span<const int> profile) const;

  // Payoff of `player` if only `player` switched to `alt`.
  double CounterfactualPayoff(std::span<const int> profile, int player,
                              int alt) const;
  // Global utility if only `player` switched to `alt`. Identical (bitwise) to
  // GlobalUtility when `alt` is the action already played.
  double CounterfactualGlobal(std::span<const int> profile, int player,
                              int alt) const;
  // CounterfactualGlobal for every action of `player`.
  std::vector<double> CounterfactualGlobals(std::span<const int> profile,
                                            int player) const;

  // Number of joint pure profiles, saturating at UINT64_MAX.
  std::uint64_t NumProfiles() const;

  // Unchecked variants used in inner loops; the profile must be valid.
  double PayoffUnchecked(std::span<const int> profile, int player) const {
    return payoff_(player, profile);
  }
  double GlobalUtilityUnchecked(std::span<const int> profile) const;

 private:
  void CheckPlayer(int player) const;
  void CheckAction(int player, int action) const;

  std::vector<int> action_counts_;
  PayoffFn payoff_;
  WelfareFn welfare_;
  std::string name_;
  std::vector<std::vector<std::string>> labels_;
};

// A game whose every player receives the global utility of `game`. This is the
// aligned (identical-interest) game that SORM and GURM effectively learn on.
Game MakeAligned(const Game& game);

// Dense payoff tensor. `payoffs` is flat and row-major: player-major, then
// joint profiles in lexicographic order (player 0 most significant).
struct MatrixGame {
  int n_players = 0;
  std::vector<int> action_counts;
  std::vector<double> payoffs;

  // Position of `profile` in lexicographic order.
  std::uint64_t ProfileIndex(std::span<const int> profile) const;
  std::uint64_t NumProfiles() const;
  double At(int player, std::span<const int> profile) const;

  // Throws std::invalid_argument on a shape mismatch or non-finite entry.
  void Validate() const;
};

Game FromMatrix(MatrixGame matrix, std::string name = {});

// Tabulates an arbitrary game.
MatrixGame ToMatrix(const Game& game,
                    std::uint64_t guard = kDefaultEnumerationGuard);

MatrixGame MatrixGameFromJson(const nlohmann::json& j);
nlohmann::json MatrixGameToJson(const MatrixGame& matrix);
MatrixGame LoadMatrixGame(const std::string& path);

// Advances `profile` to the next one in lexicographic order. Returns false
// after the last profile (and leaves `profile` all zeros).
bool NextProfile(std::vector<int>& profile, std::span<const int> action_counts);

std::string ProfileToString(std::span<const int> profile);

}  // namespace arena

#endif  // ARENA_GAME_H_
