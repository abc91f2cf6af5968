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

#ifndef ARENA_COMMS_H_
#define ARENA_COMMS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "arena/game.h"

// Cost accounting for the counterfactual-payoff exchange. Every player sends
// each other player one message per iteration; a message to player j carries
// one payoff per action of j, and each payoff counts as one query.

namespace arena {

struct CommsLedger {
  std::int64_t messages_this_iter = 0;
  std::int64_t queries_this_iter = 0;
  std::int64_t cumulative_messages = 0;
  std::int64_t cumulative_queries = 0;
  std::int64_t iterations = 0;
};

// n (n - 1) m.
std::int64_t QueriesPerIteration(std::int64_t n, std::int64_t m);
// Sum over ordered pairs (i, j), i != j, of |A_j|.
std::int64_t QueriesPerIteration(std::span<const int> action_counts);

// Queries per iteration over payoff-tensor entries, (n - 1) / m^(n - 1).
// Evaluated in log space so large n does not overflow.
double QueryRatio(std::int64_t n, std::int64_t m);

void RecordIteration(CommsLedger& ledger, std::int64_t n, std::int64_t m);
void RecordIteration(CommsLedger& ledger, std::span<const int> action_counts);
// Records traffic that carries no counterfactual payload: one message per
// ordered pair, `queries` queries in total.
void RecordTraffic(CommsLedger& ledger, std::int64_t messages,
                   std::int64_t queries);

// Sender's local payoff for every action the receiver could switch to, all
// other actions held at `profile`.
std::vector<double> BuildMessage(const Game& game,
                                 std::span<const int> profile, int sender,
                                 int receiver);

// Receiver-side reconstruction of u^g(k, a_-i) for every k from the
// receiver's own counterfactual payoffs plus the messages of all others.
std::vector<double> ReconstructCounterfactualGlobals(
    const Game& game, std::span<const int> profile, int player);

}  // namespace arena

#endif  // ARENA_COMMS_H_
