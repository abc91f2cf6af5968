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

#ifndef ARENA_HARNESS_H_
#define ARENA_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arena/dynamics.h"
#include "arena/game.h"
#include "json.hpp"

// Experiment plumbing: game sources, JSON configs and presets, seeded runs,
// algorithm comparisons, parameter sweeps and the files they write.

namespace arena {

// Bad config, unknown fixture, unreadable game file. The CLI maps this to
// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A game together with the JSON needed to rebuild it exactly.
struct GameInstance {
  Game game;
  // "fixture", "resource", "task" or "matrix".
  std::string kind;
  std::string label;
  // Self-contained instance document; loading it yields the same game.
  nlohmann::json instance;
  // FNV-1a of instance.dump().
  std::uint64_t hash = 0;
};

// Accepts a fixture name ("stag_hunt", "resource_2x2"), a generator string
// ("resource:N:M[:SEED]", "task:N:M[:SEED]"), a path to an instance or matrix
// file, or the JSON object forms {"fixture": ...}, {"generator": ...},
// {"file": ...} and inline instance documents.
GameInstance LoadGame(const nlohmann::json& spec);

std::uint64_t Fnv1a(std::string_view bytes);

struct SweepAxis {
  std::string axis;  // "n_resources" or "n_players" ("n_targets"/"n_agents")
  std::vector<int> values;
};

struct ExperimentConfig {
  nlohmann::json game;
  std::vector<Algorithm> algorithms;
  DynamicsConfig dynamics;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  std::optional<SweepAxis> sweep;

  // Throws ConfigError.
  void Validate() const;
};

// Fields: game, algorithm | algorithms, dynamics, seeds, out, sweep. Missing
// fields keep their defaults. Throws ConfigError.
ExperimentConfig ConfigFromJson(const nlohmann::json& j,
                                ExperimentConfig base = {});
nlohmann::json ConfigToJson(const ExperimentConfig& config);

// Shipped presets: fig2, fig4-small, fig5-sweep, wta-small, staghunt.
std::vector<std::string> PresetNames();
nlohmann::json PresetJson(std::string_view name);

// "1,2,5" or "1-20" or a mix ("1-3,7").
std::vector<std::uint64_t> ParseSeedList(std::string_view text);
std::vector<int> ParseIntList(std::string_view text);

// Output directory when none is configured: $ARENA_OUT_DIR, else "arena_out".
std::string DefaultOutDir();

struct Metrics {
  std::optional<std::int64_t> iterations_to_convergence;
  double final_w = 0.0;
  double final_omega = 0.0;
  double max_final_avg_regret = 0.0;
  std::optional<double> ratio_to_optimum;
};

// From the trace alone: final values are those of the last iteration.
Metrics TraceMetrics(const RunTrace& trace, std::optional<double> oracle_w);
// As TraceMetrics, but the final welfare is the profile the run returned.
Metrics RunMetrics(const RunResult& result, std::optional<double> oracle_w);
nlohmann::json MetricsToJson(const Metrics& metrics);

struct RunRecord {
  Algorithm algorithm = Algorithm::kSorm;
  std::uint64_t seed = 0;
  RunResult result;
  Metrics metrics;
};

// Social-optimum welfare when the game is small enough to enumerate.
std::optional<double> OracleWelfare(const Game& game,
                                    std::uint64_t limit = 1'000'000);

nlohmann::json RunSummaryJson(const RunRecord& record,
                              const GameInstance& instance,
                              const DynamicsConfig& dynamics);

// One run per (algorithm, seed). Writes traces, profiles, instance.json and
// summary.json under config.out_dir unless it is empty.
std::vector<RunRecord> Run(const ExperimentConfig& config);

struct ArmSummary {
  Algorithm algorithm = Algorithm::kSorm;
  std::vector<double> final_ws;
  double mean_w = 0.0;
  double median_w = 0.0;
  // Over seeds that reached pure play; absent if none did.
  std::optional<double> mean_iterations;
  double converged_fraction = 0.0;
  std::optional<double> optimal_fraction;
  double mean_cumulative_queries = 0.0;
  int rank = 0;  // 1 = highest mean final W
};

struct ComparisonSummary {
  std::string game_label;
  std::uint64_t instance_hash = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<ArmSummary> arms;  // in configured algorithm order
};

ComparisonSummary Summarize(const std::vector<RunRecord>& records,
                            const GameInstance& instance,
                            const std::vector<Algorithm>& algorithms,
                            const std::vector<std::uint64_t>& seeds,
                            std::optional<double> oracle_w);
nlohmann::json ComparisonToJson(const ComparisonSummary& summary);

// Runs every configured algorithm on the same instance and seeds. Needs at
// least two algorithms. Writes comparison.json/csv plus per-run files.
ComparisonSummary Compare(const ExperimentConfig& config);

struct SweepRow {
  std::string axis;
  int value = 0;
  ComparisonSummary summary;
};

// Re-generates the configured generator game at every axis value (duplicates
// are dropped with a warning on stderr) and compares algorithms at each.
std::vector<SweepRow> Sweep(const ExperimentConfig& config);
void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out);

// EquilibriumReport for `game` plus, when given, verdicts for `profile` and
// the CCE regret of the profiles in a profiles CSV (after `burn_in`).
nlohmann::json Verify(const GameInstance& instance,
                      const std::optional<ActionProfile>& profile,
                      const std::optional<std::string>& profiles_csv,
                      double burn_in,
                      std::uint64_t guard = kDefaultEnumerationGuard);

// Reads a profiles CSV written by WriteProfilesCsv back into a trace.
RunTrace ReadProfilesCsv(const std::string& path);

}  // namespace arena

#endif  // ARENA_HARNESS_H_
