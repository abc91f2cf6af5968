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

#include "arena/models.h"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace arena {

double UniformReal(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

void ResourceGameParams::Validate() const {
  if (n_players < 1) throw std::invalid_argument("n_players must be >= 1");
  if (n_resources < 1) throw std::invalid_argument("n_resources must be >= 1");
  if (!(rate_min > 0.0) || !(rate_min <= rate_max) || !std::isfinite(rate_max)) {
    throw std::invalid_argument("rates need 0 < rate_min <= rate_max");
  }
}

ResourceInstance GenerateResourceInstance(const ResourceGameParams& params) {
  params.Validate();
  std::mt19937_64 rng(params.seed);
  ResourceInstance instance;
  instance.rates.assign(params.n_players,
                        std::vector<double>(params.n_resources));
  for (auto& row : instance.rates) {
    for (double& rate : row) {
      rate = UniformReal(rng, params.rate_min, params.rate_max);
    }
  }
  return instance;
}

std::vector<int> ResourceOccupancy(std::span<const int> profile,
                                   int n_resources) {
  std::vector<int> load(n_resources, 0);
  for (int a : profile) ++load[a];
  return load;
}

Game MakeResourceGame(const ResourceInstance& instance) {
  const int n = instance.NumPlayers();
  const int m = instance.NumResources();
  if (n < 1 || m < 1) throw std::invalid_argument("empty resource instance");
  for (const auto& row : instance.rates) {
    if (static_cast<int>(row.size()) != m) {
      throw std::invalid_argument("ragged rate matrix");
    }
    for (double r : row) {
      if (!std::isfinite(r)) throw std::invalid_argument("non-finite rate");
    }
  }
  auto rates = std::make_shared<const std::vector<std::vector<double>>>(
      instance.rates);
  PayoffFn payoff = [rates](int player, std::span<const int> profile) {
    const int mine = profile[player];
    int load = 0;
    for (int a : profile) load += (a == mine);
    return (*rates)[player][mine] / load;
  };
  WelfareFn welfare = [rates, m](std::span<const int> profile) {
    thread_local std::vector<double> rate_sum;
    thread_local std::vector<int> load;
    rate_sum.assign(m, 0.0);
    load.assign(m, 0);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      rate_sum[profile[i]] += (*rates)[i][profile[i]];
      ++load[profile[i]];
    }
    double total = 0.0;
    for (int r = 0; r < m; ++r) {
      if (load[r] > 0) total += rate_sum[r] / load[r];
    }
    return total;
  };
  return Game(std::vector<int>(n, m), std::move(payoff), std::move(welfare),
              "resource_" + std::to_string(n) + "x" + std::to_string(m));
}

Game GenResourceGame(const ResourceGameParams& params) {
  return MakeResourceGame(GenerateResourceInstance(params));
}

void TaskGameParams::Validate() const {
  if (n_agents < 1) throw std::invalid_argument("n_agents must be >= 1");
  if (n_targets < 1) throw std::invalid_argument("n_targets must be >= 1");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("alpha and beta must be finite");
  }
  if (!(value_min <= value_max) || !std::isfinite(value_min) ||
      !std::isfinite(value_max)) {
    throw std::invalid_argument("values need value_min <= value_max");
  }
}

double SurvivalProb(double distance, double alpha, double beta) {
  return 1.0 / (1.0 + std::exp(-alpha * distance + beta));
}

double TaskInstance::Survival(int agent, int target) const {
  const Point3& a = agent_positions[agent];
  const Point3& b = target_positions[target];
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return SurvivalProb(std::sqrt(dx * dx + dy * dy + dz * dz), alpha, beta);
}

TaskInstance GenerateTaskInstance(const TaskGameParams& params) {
  params.Validate();
  std::mt19937_64 rng(params.seed);
  TaskInstance instance;
  instance.alpha = params.alpha;
  instance.beta = params.beta;
  instance.agent_positions.resize(params.n_agents);
  instance.target_positions.resize(params.n_targets);
  for (auto& p : instance.agent_positions) {
    for (double& x : p) x = UniformReal(rng, 0.0, 1.0);
  }
  for (auto& p : instance.target_positions) {
    for (double& x : p) x = UniformReal(rng, 0.0, 1.0);
  }
  instance.values.resize(params.n_targets);
  for (double& v : instance.values) {
    v = UniformReal(rng, params.value_min, params.value_max);
  }
  return instance;
}

namespace {

// Survival matrix indexed [agent][target].
std::vector<std::vector<double>> SurvivalTable(const TaskInstance& instance) {
  std::vector<std::vector<double>> table(
      instance.NumAgents(), std::vector<double>(instance.NumTargets()));
  for (int i = 0; i < instance.NumAgents(); ++i) {
    for (int k = 0; k < instance.NumTargets(); ++k) {
      table[i][k] = instance.Survival(i, k);
    }
  }
  return table;
}

// Both the free functions and the game closures go through these two
// helpers, so they agree bit for bit.
template <typename SurvivalFn>
double TargetUtilityImpl(std::span<const double> values, int target,
                         std::span<const int> profile, SurvivalFn survival) {
  double survive = 1.0;
  bool assigned = false;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] == target) {
      survive *= survival(static_cast<int>(i), target);
      assigned = true;
    }
  }
  return assigned ? values[target] * (1.0 - survive) : 0.0;
}

template <typename SurvivalFn>
double GlobalUtilityImpl(std::span<const double> values,
                         std::span<const int> profile, SurvivalFn survival,
                         std::vector<double>& survive,
                         std::vector<char>& assigned) {
  const std::size_t m = values.size();
  survive.assign(m, 1.0);
  assigned.assign(m, 0);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    survive[profile[i]] *= survival(static_cast<int>(i), profile[i]);
    assigned[profile[i]] = 1;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (assigned[k]) total += values[k] * (1.0 - survive[k]);
  }
  return total;
}

void CheckTaskProfile(const TaskInstance& instance,
                      std::span<const int> profile) {
  if (static_cast<int>(profile.size()) != instance.NumAgents()) {
    throw std::invalid_argument("profile length differs from agent count");
  }
  for (int a : profile) {
    if (a < 0 || a >= instance.NumTargets()) {
      throw std::invalid_argument("target index out of range");
    }
  }
}

}  // namespace

double TargetUtility(const TaskInstance& instance, int target,
                     std::span<const int> profile) {
  CheckTaskProfile(instance, profile);
  if (target < 0 || target >= instance.NumTargets()) {
    throw std::invalid_argument("target index out of range");
  }
  return TargetUtilityImpl(instance.values, target, profile,
                           [&](int i, int k) { return instance.Survival(i, k); });
}

double TaskGlobalUtility(const TaskInstance& instance,
                         std::span<const int> profile) {
  CheckTaskProfile(instance, profile);
  std::vector<double> survive;
  std::vector<char> assigned;
  return GlobalUtilityImpl(
      instance.values, profile,
      [&](int i, int k) { return instance.Survival(i, k); }, survive,
      assigned);
}

Game MakeTaskGame(const TaskInstance& instance) {
  const int n = instance.NumAgents();
  const int m = instance.NumTargets();
  if (n < 1 || m < 1) throw std::invalid_argument("empty task instance");
  if (static_cast<int>(instance.values.size()) != m) {
    throw std::invalid_argument("one value per target expected");
  }
  struct Tables {
    std::vector<double> values;
    std::vector<std::vector<double>> survival;
  };
  auto tables = std::make_shared<const Tables>(
      Tables{instance.values, SurvivalTable(instance)});
  PayoffFn payoff = [tables](int player, std::span<const int> profile) {
    const int target = profile[player];
    int sharing = 0;
    for (int a : profile) sharing += (a == target);
    const double utility = TargetUtilityImpl(
        tables->values, target, profile,
        [&](int i, int k) { return tables->survival[i][k]; });
    return utility / sharing;
  };
  WelfareFn welfare = [tables](std::span<const int> profile) {
    thread_local std::vector<double> survive;
    thread_local std::vector<char> assigned;
    return GlobalUtilityImpl(
        tables->values, profile,
        [&](int i, int k) { return tables->survival[i][k]; }, survive,
        assigned);
  };
  return Game(std::vector<int>(n, m), std::move(payoff), std::move(welfare),
              "task_" + std::to_string(n) + "x" + std::to_string(m));
}

TaskGame GenTaskGame(const TaskGameParams& params) {
  TaskInstance instance = GenerateTaskInstance(params);
  Game game = MakeTaskGame(instance);
  return TaskGame{std::move(game), std::move(instance)};
}

nlohmann::json ResourceInstanceToJson(const ResourceInstance& instance) {
  return {{"kind", "resource"}, {"rates", instance.rates}};
}

ResourceInstance ResourceInstanceFromJson(const nlohmann::json& j) {
  ResourceInstance instance;
  try {
    instance.rates = j.at("rates").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed resource instance: ") +
                                e.what());
  }
  if (instance.rates.empty() || instance.rates[0].empty()) {
    throw std::invalid_argument("resource instance has no rates");
  }
  return instance;
}

nlohmann::json TaskInstanceToJson(const TaskInstance& instance) {
  return {{"kind", "task"},
          {"alpha", instance.alpha},
          {"beta", instance.beta},
          {"agents", instance.agent_positions},
          {"targets", instance.target_positions},
          {"values", instance.values}};
}

TaskInstance TaskInstanceFromJson(const nlohmann::json& j) {
  TaskInstance instance;
  try {
    instance.alpha = j.at("alpha").get<double>();
    instance.beta = j.at("beta").get<double>();
    instance.agent_positions = j.at("agents").get<std::vector<Point3>>();
    instance.target_positions = j.at("targets").get<std::vector<Point3>>();
    instance.values = j.at("values").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed task instance: ") +
                                e.what());
  }
  if (instance.values.size() != instance.target_positions.size()) {
    throw std::invalid_argument("one value per target expected");
  }
  return instance;
}

}  // namespace arena
