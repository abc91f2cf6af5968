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

#ifndef ARENA_MODELS_H_
#define ARENA_MODELS_H_

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "arena/game.h"
#include "json.hpp"

// Parametric generators for the two experiment families: proportional-fair
// resource selection and multi-agent target assignment.

namespace arena {

// Uniform double in [lo, hi) built from the top 53 bits of one engine draw,
// so the stream is the same on every standard library.
double UniformReal(std::mt19937_64& rng, double lo, double hi);

// ---------------------------------------------------------------------------
// Resource selection.

struct ResourceGameParams {
  int n_players = 2;
  int n_resources = 2;
  double rate_min = 1.0;    // Mbps
  double rate_max = 100.0;  // Mbps
  std::uint64_t seed = 0;

  void Validate() const;
};

// rates[i][r] is player i's rate when alone on resource r.
struct ResourceInstance {
  std::vector<std::vector<double>> rates;

  int NumPlayers() const { return static_cast<int>(rates.size()); }
  int NumResources() const {
    return rates.empty() ? 0 : static_cast<int>(rates[0].size());
  }
};

ResourceInstance GenerateResourceInstance(const ResourceGameParams& params);
// u_i(a) = rates[i][a_i] / |{j : a_j = a_i}|.
Game MakeResourceGame(const ResourceInstance& instance);
Game GenResourceGame(const ResourceGameParams& params);

// Players per resource.
std::vector<int> ResourceOccupancy(std::span<const int> profile,
                                   int n_resources);

// ---------------------------------------------------------------------------
// Target assignment.

struct TaskGameParams {
  int n_agents = 10;
  int n_targets = 20;
  double alpha = 2.0;
  double beta = 1.0;
  double value_min = 10.0;
  double value_max = 100.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

using Point3 = std::array<double, 3>;

struct TaskInstance {
  std::vector<Point3> agent_positions;
  std::vector<Point3> target_positions;
  std::vector<double> values;
  double alpha = 2.0;
  double beta = 1.0;

  int NumAgents() const { return static_cast<int>(agent_positions.size()); }
  int NumTargets() const { return static_cast<int>(target_positions.size()); }
  // Survival probability of `target` against `agent`.
  double Survival(int agent, int target) const;
};

// Draw order: agent positions, target positions, then values.
TaskInstance GenerateTaskInstance(const TaskGameParams& params);

// Probability that a target survives an agent at `distance`:
// 1 / (1 + exp(-alpha * distance + beta)).
double SurvivalProb(double distance, double alpha, double beta);

// Expected destroyed value of `target`: V(k) * (1 - prod p_ik) over the agents
// assigned to it, 0 when nobody is.
double TargetUtility(const TaskInstance& instance, int target,
                     std::span<const int> profile);
double TaskGlobalUtility(const TaskInstance& instance,
                         std::span<const int> profile);

// Agents split their target's utility equally, so local utilities sum to the
// global utility.
Game MakeTaskGame(const TaskInstance& instance);

struct TaskGame {
  Game game;
  TaskInstance instance;
};
TaskGame GenTaskGame(const TaskGameParams& params);

// ---------------------------------------------------------------------------
// JSON instance files.

nlohmann::json ResourceInstanceToJson(const ResourceInstance& instance);
ResourceInstance ResourceInstanceFromJson(const nlohmann::json& j);
nlohmann::json TaskInstanceToJson(const TaskInstance& instance);
TaskInstance TaskInstanceFromJson(const nlohmann::json& j);

}  // namespace arena

#endif  // ARENA_MODELS_H_
