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

#include "arena/fixtures.h"

namespace arena {

MatrixGame StagHuntMatrix() {
  // Profiles in order (stag,stag) (stag,hare) (hare,stag) (hare,hare).
  return MatrixGame{.n_players = 2,
                    .action_counts = {2, 2},
                    .payoffs = {3, 0, 1, 1,    // row
                                3, 1, 0, 1}};  // column
}

Game StagHuntFixture() {
  Game game = FromMatrix(StagHuntMatrix(), "stag_hunt");
  game.SetActionLabels({{"stag", "hare"}, {"stag", "hare"}});
  return game;
}

MatrixGame Resource2x2Matrix() {
  constexpr double kRowRate[2] = {5, 6};
  constexpr double kColRate[2] = {4, 3};
  MatrixGame matrix{.n_players = 2, .action_counts = {2, 2}, .payoffs = {}};
  matrix.payoffs.resize(8);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double load = r == c ? 2.0 : 1.0;
      matrix.payoffs[r * 2 + c] = kRowRate[r] / load;
      matrix.payoffs[4 + r * 2 + c] = kColRate[c] / load;
    }
  }
  return matrix;
}

Game Resource2x2Fixture() {
  Game game = FromMatrix(Resource2x2Matrix(), "resource_2x2");
  game.SetActionLabels({{"R#1", "R#2"}, {"R#1", "R#2"}});
  return game;
}

}  // namespace arena
