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

#include "arena/comms.h"

#include <cmath>
#include <stdexcept>

namespace arena {

std::int64_t QueriesPerIteration(std::int64_t n, std::int64_t m) {
  if (n < 1 || m < 1) throw std::invalid_argument("need n >= 1 and m >= 1");
  return n * (n - 1) * m;
}

std::int64_t QueriesPerIteration(std::span<const int> action_counts) {
  const auto n = static_cast<std::int64_t>(action_counts.size());
  std::int64_t total_actions = 0;
  for (int c : action_counts) total_actions += c;
  // Each receiver j hears from n - 1 senders.
  return (n - 1) * total_actions;
}

double QueryRatio(std::int64_t n, std::int64_t m) {
  if (n < 1 || m < 1) throw std::invalid_argument("need n >= 1 and m >= 1");
  if (n == 1) return 0.0;
  const double others = static_cast<double>(n - 1);
  return std::exp(std::log(others) - others * std::log(static_cast<double>(m)));
}

void RecordTraffic(CommsLedger& ledger, std::int64_t messages,
                   std::int64_t queries) {
  ledger.messages_this_iter = messages;
  ledger.queries_this_iter = queries;
  ledger.cumulative_messages += messages;
  ledger.cumulative_queries += queries;
  ++ledger.iterations;
}

void RecordIteration(CommsLedger& ledger, std::int64_t n, std::int64_t m) {
  RecordTraffic(ledger, n * (n - 1), QueriesPerIteration(n, m));
}

void RecordIteration(CommsLedger& ledger, std::span<const int> action_counts) {
  const auto n = static_cast<std::int64_t>(action_counts.size());
  RecordTraffic(ledger, n * (n - 1), QueriesPerIteration(action_counts));
}

std::vector<double> BuildMessage(const Game& game,
                                 std::span<const int> profile, int sender,
                                 int receiver) {
  game.ValidateProfile(profile);
  if (sender == receiver) {
    throw std::invalid_argument("a player does not message itself");
  }
  if (sender < 0 || sender >= game.NumPlayers() || receiver < 0 ||
      receiver >= game.NumPlayers()) {
    throw std::invalid_argument("sender or receiver out of range");
  }
  ActionProfile deviated(profile.begin(), profile.end());
  std::vector<double> message(game.NumActions(receiver));
  for (int k = 0; k < game.NumActions(receiver); ++k) {
    deviated[receiver] = k;
    message[k] = game.PayoffUnchecked(deviated, sender);
  }
  return message;
}

std::vector<double> ReconstructCounterfactualGlobals(
    const Game& game, std::span<const int> profile, int player) {
  game.ValidateProfile(profile);
  std::vector<double> total(game.NumActions(player));
  for (int k = 0; k < game.NumActions(player); ++k) {
    total[k] = game.CounterfactualPayoff(profile, player, k);
  }
  for (int j = 0; j < game.NumPlayers(); ++j) {
    if (j == player) continue;
    const std::vector<double> message = BuildMessage(game, profile, j, player);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += message[k];
  }
  return total;
}

}  // namespace arena
