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

#ifndef ARENA_FIXTURES_H_
#define ARENA_FIXTURES_H_

#include "arena/game.h"

namespace arena {

// Two-player Stag Hunt. Action 0 is stag, 1 is hare. Hunting hare pays 1
// regardless of the partner; stag pays 3 together and 0 alone.
inline constexpr int kStag = 0;
inline constexpr int kHare = 1;
MatrixGame StagHuntMatrix();
Game StagHuntFixture();

// Two players choosing between two shared resources. Each player's throughput
// is its rate on the chosen resource divided by the number of players there.
// Row rates: R#1 = 5, R#2 = 6. Column rates: R#1 = 4, R#2 = 3.
inline constexpr int kR1 = 0;
inline constexpr int kR2 = 1;
MatrixGame Resource2x2Matrix();
Game Resource2x2Fixture();

}  // namespace arena

#endif  // ARENA_FIXTURES_H_
