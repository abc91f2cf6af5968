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

#include "arena/game.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace arena {

void CheckEnumerable(std::uint64_t num_profiles, std::uint64_t guard) {
  if (num_profiles > guard) {
    throw SizeLimitError("game has " + std::to_string(num_profiles) +
                         " joint profiles, over the enumeration guard of " +
                         std::to_string(guard));
  }
}

Game::Game(std::vector<int> action_counts, PayoffFn payoff, WelfareFn welfare,
           std::string name)
    : action_counts_(std::move(action_counts)),
      payoff_(std::move(payoff)),
      welfare_(std::move(welfare)),
      name_(std::move(name)) {
  if (action_counts_.empty()) {
    throw std::invalid_argument("game needs at least one player");
  }
  for (int count : action_counts_) {
    if (count < 1) {
      throw std::invalid_argument("every player needs at least one action");
    }
  }
  if (!payoff_) throw std::invalid_argument("game needs a payoff function");
}

int Game::NumActions(int player) const {
  CheckPlayer(player);
  return action_counts_[player];
}

int Game::MaxActions() const {
  int m = 0;
  for (int c : action_counts_) m = std::max(m, c);
  return m;
}

void Game::SetActionLabels(std::vector<std::vector<std::string>> labels) {
  if (labels.size() != action_counts_.size()) {
    throw std::invalid_argument("one label list per player expected");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (static_cast<int>(labels[i].size()) != action_counts_[i]) {
      throw std::invalid_argument("label count differs from action count");
    }
  }
  labels_ = std::move(labels);
}

void Game::CheckPlayer(int player) const {
  if (player < 0 || player >= NumPlayers()) {
    throw std::invalid_argument("player index " + std::to_string(player) +
                                " out of range");
  }
}

void Game::CheckAction(int player, int action) const {
  if (action < 0 || action >= action_counts_[player]) {
    throw std::invalid_argument("action " + std::to_string(action) +
                                " out of range for player " +
                                std::to_string(player));
  }
}

void Game::ValidateProfile(std::span<const int> profile) const {
  if (profile.size() != action_counts_.size()) {
    throw std::invalid_argument("profile has " +
                                std::to_string(profile.size()) +
                                " entries, game has " +
                                std::to_string(action_counts_.size()) +
                                " players");
  }
  for (int i = 0; i < NumPlayers(); ++i) CheckAction(i, profile[i]);
}

double Game::Payoff(std::span<const int> profile, int player) const {
  ValidateProfile(profile);
  CheckPlayer(player);
  return payoff_(player, profile);
}

double Game::GlobalUtilityUnchecked(std::span<const int> profile) const {
  if (welfare_) return welfare_(profile);
  double total = 0.0;
  for (int i = 0; i < NumPlayers(); ++i) total += payoff_(i, profile);
  return total;
}

double Game::GlobalUtility(std::span<const int> profile) const {
  ValidateProfile(profile);
  return GlobalUtilityUnchecked(profile);
}

double Game::CounterfactualPayoff(std::span<const int> profile, int player,
                                  int alt) const {
  ValidateProfile(profile);
  CheckPlayer(player);
  CheckAction(player, alt);
  if (profile[player] == alt) return payoff_(player, profile);
  ActionProfile deviated(profile.begin(), profile.end());
  deviated[player] = alt;
  return payoff_(player, deviated);
}

double Game::CounterfactualGlobal(std::span<const int> profile, int player,
                                  int alt) const {
  ValidateProfile(profile);
  CheckPlayer(player);
  CheckAction(player, alt);
  if (profile[player] == alt) return GlobalUtilityUnchecked(profile);
  ActionProfile deviated(profile.begin(), profile.end());
  deviated[player] = alt;
  return GlobalUtilityUnchecked(deviated);
}

std::vector<double> Game::CounterfactualGlobals(std::span<const int> profile,
                                                int player) const {
  ValidateProfile(profile);
  CheckPlayer(player);
  ActionProfile deviated(profile.begin(), profile.end());
  std::vector<double> out(action_counts_[player]);
  for (int k = 0; k < action_counts_[player]; ++k) {
    deviated[player] = k;
    out[k] = GlobalUtilityUnchecked(deviated);
  }
  return out;
}

std::uint64_t Game::NumProfiles() const {
  std::uint64_t total = 1;
  for (int c : action_counts_) {
    const auto count = static_cast<std::uint64_t>(c);
    if (total > std::numeric_limits<std::uint64_t>::max() / count) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= count;
  }
  return total;
}

Game MakeAligned(const Game& game) {
  // Copying keeps the aligned game self-contained.
  auto base = std::make_shared<const Game>(game);
  const int n = game.NumPlayers();
  PayoffFn payoff = [base](int, std::span<const int> profile) {
    return base->GlobalUtilityUnchecked(profile);
  };
  WelfareFn welfare = [base, n](std::span<const int> profile) {
    return n * base->GlobalUtilityUnchecked(profile);
  };
  return Game(game.ActionCounts(), std::move(payoff), std::move(welfare),
              game.Name().empty() ? "aligned" : game.Name() + "/aligned");
}

std::uint64_t MatrixGame::NumProfiles() const {
  std::uint64_t total = 1;
  for (int c : action_counts) total *= static_cast<std::uint64_t>(c);
  return total;
}

std::uint64_t MatrixGame::ProfileIndex(std::span<const int> profile) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < action_counts.size(); ++i) {
    index = index * action_counts[i] + profile[i];
  }
  return index;
}

double MatrixGame::At(int player, std::span<const int> profile) const {
  return payoffs[player * NumProfiles() + ProfileIndex(profile)];
}

void MatrixGame::Validate() const {
  if (n_players < 1) throw std::invalid_argument("n_players must be >= 1");
  if (static_cast<int>(action_counts.size()) != n_players) {
    throw std::invalid_argument("action_counts length " +
                                std::to_string(action_counts.size()) +
                                " differs from n_players " +
                                std::to_string(n_players));
  }
  long double expected = n_players;
  for (int c : action_counts) {
    if (c < 1) throw std::invalid_argument("action counts must be >= 1");
    expected *= c;
  }
  if (expected != static_cast<long double>(payoffs.size())) {
    throw std::invalid_argument(
        "payoff tensor has " + std::to_string(payoffs.size()) +
        " entries, expected " + std::to_string(static_cast<double>(expected)));
  }
  for (double v : payoffs) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("payoff tensor has a non-finite entry");
    }
  }
}

Game FromMatrix(MatrixGame matrix, std::string name) {
  matrix.Validate();
  auto table = std::make_shared<const MatrixGame>(std::move(matrix));
  PayoffFn payoff = [table](int player, std::span<const int> profile) {
    return table->At(player, profile);
  };
  WelfareFn welfare = [table](std::span<const int> profile) {
    const std::uint64_t stride = table->NumProfiles();
    const std::uint64_t index = table->ProfileIndex(profile);
    double total = 0.0;
    for (int i = 0; i < table->n_players; ++i) {
      total += table->payoffs[i * stride + index];
    }
    return total;
  };
  return Game(table->action_counts, std::move(payoff), std::move(welfare),
              std::move(name));
}

MatrixGame ToMatrix(const Game& game, std::uint64_t guard) {
  CheckEnumerable(game.NumProfiles(), guard);
  MatrixGame matrix;
  matrix.n_players = game.NumPlayers();
  matrix.action_counts = game.ActionCounts();
  const std::uint64_t num_profiles = game.NumProfiles();
  matrix.payoffs.resize(matrix.n_players * num_profiles);
  ActionProfile profile(matrix.n_players, 0);
  std::uint64_t index = 0;
  do {
    for (int i = 0; i < matrix.n_players; ++i) {
      matrix.payoffs[i * num_profiles + index] =
          game.PayoffUnchecked(profile, i);
    }
    ++index;
  } while (NextProfile(profile, matrix.action_counts));
  return matrix;
}

MatrixGame MatrixGameFromJson(const nlohmann::json& j) {
  MatrixGame matrix;
  try {
    matrix.n_players = j.at("n_players").get<int>();
    matrix.action_counts = j.at("action_counts").get<std::vector<int>>();
    matrix.payoffs = j.at("payoffs").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed matrix game: ") +
                                e.what());
  }
  matrix.Validate();
  return matrix;
}

nlohmann::json MatrixGameToJson(const MatrixGame& matrix) {
  return {{"n_players", matrix.n_players},
          {"action_counts", matrix.action_counts},
          {"payoffs", matrix.payoffs}};
}

MatrixGame LoadMatrixGame(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return MatrixGameFromJson(j);
}

bool NextProfile(std::vector<int>& profile,
                 std::span<const int> action_counts) {
  for (int i = static_cast<int>(profile.size()) - 1; i >= 0; --i) {
    if (++profile[i] < action_counts[i]) return true;
    profile[i] = 0;
  }
  return false;
}

std::string ProfileToString(std::span<const int> profile) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out << ',';
    out << profile[i];
  }
  out << ')';
  return out.str();
}

}  // namespace arena
