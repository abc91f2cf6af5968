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

#include "arena/harness.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "arena/equilibria.h"
#include "arena/fixtures.h"
#include "arena/models.h"

namespace arena {
namespace fs = std::filesystem;
namespace {

std::string HexHash(std::uint64_t hash) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "0x0000000000000000";
  for (int i = 17; i >= 2; --i) {
    out[i] = kDigits[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

GameInstance Finish(Game game, std::string kind, std::string label,
                    nlohmann::json instance) {
  const std::uint64_t hash = Fnv1a(instance.dump());
  return GameInstance{std::move(game), std::move(kind), std::move(label),
                      std::move(instance), hash};
}

GameInstance FixtureInstance(std::string_view name) {
  if (name == "stag_hunt" || name == "staghunt") {
    return Finish(StagHuntFixture(), "fixture", "stag_hunt",
                  MatrixGameToJson(StagHuntMatrix()));
  }
  if (name == "resource_2x2") {
    return Finish(Resource2x2Fixture(), "fixture", "resource_2x2",
                  MatrixGameToJson(Resource2x2Matrix()));
  }
  throw ConfigError("unknown fixture '" + std::string(name) +
                    "' (expected stag_hunt or resource_2x2)");
}

template <typename T>
T Field(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

GameInstance GeneratorInstance(const nlohmann::json& spec) {
  const std::string generator = spec.at("generator").get<std::string>();
  if (generator == "resource") {
    ResourceGameParams params;
    params.n_players = Field(spec, "n_players", params.n_players);
    params.n_resources = Field(spec, "n_resources", params.n_resources);
    params.rate_min = Field(spec, "rate_min", params.rate_min);
    params.rate_max = Field(spec, "rate_max", params.rate_max);
    params.seed = Field(spec, "seed", params.seed);
    ResourceInstance instance = GenerateResourceInstance(params);
    std::string label = "resource_" + std::to_string(params.n_players) + "x" +
                        std::to_string(params.n_resources) + "_seed" +
                        std::to_string(params.seed);
    return Finish(MakeResourceGame(instance), "resource", std::move(label),
                  ResourceInstanceToJson(instance));
  }
  if (generator == "task") {
    TaskGameParams params;
    params.n_agents = Field(spec, "n_agents", params.n_agents);
    params.n_targets = Field(spec, "n_targets", params.n_targets);
    params.alpha = Field(spec, "alpha", params.alpha);
    params.beta = Field(spec, "beta", params.beta);
    params.value_min = Field(spec, "value_min", params.value_min);
    params.value_max = Field(spec, "value_max", params.value_max);
    params.seed = Field(spec, "seed", params.seed);
    TaskInstance instance = GenerateTaskInstance(params);
    std::string label = "task_" + std::to_string(params.n_agents) + "x" +
                        std::to_string(params.n_targets) + "_seed" +
                        std::to_string(params.seed);
    return Finish(MakeTaskGame(instance), "task", std::move(label),
                  TaskInstanceToJson(instance));
  }
  throw ConfigError("unknown generator '" + generator +
                    "' (expected resource or task)");
}

GameInstance DocumentInstance(const nlohmann::json& doc, std::string label) {
  if (doc.contains("kind")) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "resource") {
      ResourceInstance instance = ResourceInstanceFromJson(doc);
      return Finish(MakeResourceGame(instance), "resource", std::move(label),
                    ResourceInstanceToJson(instance));
    }
    if (kind == "task") {
      TaskInstance instance = TaskInstanceFromJson(doc);
      return Finish(MakeTaskGame(instance), "task", std::move(label),
                    TaskInstanceToJson(instance));
    }
    throw ConfigError("unknown instance kind '" + kind + "'");
  }
  if (doc.contains("payoffs")) {
    MatrixGame matrix = MatrixGameFromJson(doc);
    nlohmann::json canonical = MatrixGameToJson(matrix);
    return Finish(FromMatrix(std::move(matrix), label), "matrix",
                  std::move(label), std::move(canonical));
  }
  throw ConfigError("game document is neither an instance nor a matrix game");
}

GameInstance FileInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read game file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("game file '" + path + "': " + e.what());
  }
  return DocumentInstance(doc, fs::path(path).stem().string());
}

// "resource:N:M[:SEED]" / "task:N:M[:SEED]" to the object form.
std::optional<nlohmann::json> ParseGeneratorString(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const std::string_view kind = text.substr(0, colon);
  if (kind != "resource" && kind != "task") return std::nullopt;
  std::vector<std::uint64_t> numbers;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto next = rest.find(':');
    const std::string_view token = rest.substr(0, next);
    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ConfigError("bad generator spec '" + std::string(text) + "'");
    }
    numbers.push_back(value);
    rest = next == std::string_view::npos ? std::string_view{}
                                          : rest.substr(next + 1);
  }
  if (numbers.size() < 2 || numbers.size() > 3) {
    throw ConfigError("generator spec needs N:M[:SEED], got '" +
                      std::string(text) + "'");
  }
  nlohmann::json spec = {{"generator", std::string(kind)}};
  if (kind == "resource") {
    spec["n_players"] = numbers[0];
    spec["n_resources"] = numbers[1];
  } else {
    spec["n_agents"] = numbers[0];
    spec["n_targets"] = numbers[1];
  }
  if (numbers.size() == 3) spec["seed"] = numbers[2];
  return spec;
}

std::string RunStem(const RunRecord& record) {
  return std::string(AlgorithmName(record.algorithm)) + "_seed" +
         std::to_string(record.seed);
}

void WriteJsonFile(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void WriteRunFiles(const fs::path& dir, const RunRecord& record,
                   const GameInstance& instance) {
  const std::string stem = RunStem(record);
  {
    std::ofstream out(dir / (stem + "_trace.csv"));
    if (!out) throw ConfigError("cannot write into " + dir.string());
    WriteTraceCsv(record.result.trace, out);
  }
  const RunTrace& trace = record.result.trace;
  if (!trace.HasProfiles()) return;
  {
    std::ofstream out(dir / (stem + "_profiles.csv"));
    WriteProfilesCsv(trace, out);
  }
  if (instance.kind == "resource") {
    const int m = instance.game.MaxActions();
    std::ofstream out(dir / (stem + "_occupancy.csv"));
    out << "iteration";
    for (int r = 0; r < m; ++r) out << ",r" << r;
    out << '\n';
    for (std::size_t row = 0; row < trace.rows.size(); ++row) {
      const auto load = ResourceOccupancy(trace.ProfileAt(row), m);
      out << trace.rows[row].iteration;
      for (int l : load) out << ',' << l;
      out << '\n';
    }
  }
}

fs::path PrepareOutDir(const std::string& out_dir) {
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + out_dir);
  return dir;
}

std::vector<RunRecord> RunImpl(const ExperimentConfig& config,
                               const GameInstance& instance,
                               std::optional<double> oracle_w,
                               bool keep_traces) {
  std::optional<fs::path> dir;
  if (!config.out_dir.empty()) {
    dir = PrepareOutDir(config.out_dir);
    WriteJsonFile(*dir / "instance.json", instance.instance);
  }
  std::vector<RunRecord> records;
  nlohmann::json runs = nlohmann::json::array();
  for (Algorithm algorithm : config.algorithms) {
    for (std::uint64_t seed : config.seeds) {
      DynamicsConfig dynamics = config.dynamics;
      dynamics.seed = seed;
      RunRecord record{algorithm, seed,
                       RunAlgorithm(algorithm, instance.game, dynamics), {}};
      record.metrics = RunMetrics(record.result, oracle_w);
      if (dir) WriteRunFiles(*dir, record, instance);
      runs.push_back(RunSummaryJson(record, instance, dynamics));
      if (!keep_traces) {
        record.result.trace.rows.clear();
        record.result.trace.rows.shrink_to_fit();
        record.result.trace.profiles.clear();
        record.result.trace.profiles.shrink_to_fit();
      }
      records.push_back(std::move(record));
    }
  }
  if (dir) {
    WriteJsonFile(*dir / "summary.json",
                  {{"config", ConfigToJson(config)},
                   {"game", instance.label},
                   {"instance_hash", HexHash(instance.hash)},
                   {"oracle_W", oracle_w ? nlohmann::json(*oracle_w)
                                         : nlohmann::json(nullptr)},
                   {"runs", runs}});
  }
  return records;
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

nlohmann::json OptionalJson(const std::optional<double>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

void WriteComparisonCsv(const ComparisonSummary& summary, std::ostream& out,
                        const std::string& prefix = {}) {
  for (const ArmSummary& arm : summary.arms) {
    out << prefix << AlgorithmName(arm.algorithm) << ',' << arm.rank << ','
        << FormatDouble(arm.mean_w) << ',' << FormatDouble(arm.median_w) << ','
        << (arm.mean_iterations ? FormatDouble(*arm.mean_iterations) : "none")
        << ',' << FormatDouble(arm.converged_fraction) << ','
        << (arm.optimal_fraction ? FormatDouble(*arm.optimal_fraction) : "none")
        << ',' << FormatDouble(arm.mean_cumulative_queries) << ','
        << HexHash(summary.instance_hash) << '\n';
  }
}

constexpr std::string_view kComparisonColumns =
    "algorithm,rank,mean_final_W,median_final_W,"
    "mean_iterations_to_convergence,converged_fraction,optimal_fraction,"
    "mean_cumulative_queries,instance_hash";

ComparisonSummary CompareImpl(const ExperimentConfig& config) {
  if (config.algorithms.size() < 2) {
    throw ConfigError("compare needs at least two algorithms");
  }
  const GameInstance instance = LoadGame(config.game);
  const std::optional<double> oracle = OracleWelfare(instance.game);
  const auto records = RunImpl(config, instance, oracle, /*keep_traces=*/false);
  ComparisonSummary summary =
      Summarize(records, instance, config.algorithms, config.seeds, oracle);
  if (!config.out_dir.empty()) {
    const fs::path dir(config.out_dir);
    WriteJsonFile(dir / "comparison.json", ComparisonToJson(summary));
    std::ofstream out(dir / "comparison.csv");
    out << kComparisonColumns << '\n';
    WriteComparisonCsv(summary, out);
  }
  return summary;
}

}  // namespace

std::uint64_t Fnv1a(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

GameInstance LoadGame(const nlohmann::json& spec) {
  try {
    if (spec.is_string()) {
      const std::string text = spec.get<std::string>();
      if (text == "stag_hunt" || text == "staghunt" || text == "resource_2x2") {
        return FixtureInstance(text);
      }
      if (auto generator = ParseGeneratorString(text)) {
        return GeneratorInstance(*generator);
      }
      if (!fs::exists(text)) {
        throw ConfigError("unknown game '" + text +
                          "': not a fixture, generator spec or file");
      }
      return FileInstance(text);
    }
    if (spec.is_object()) {
      if (spec.contains("fixture")) {
        return FixtureInstance(spec.at("fixture").get<std::string>());
      }
      if (spec.contains("generator")) return GeneratorInstance(spec);
      if (spec.contains("file")) {
        return FileInstance(spec.at("file").get<std::string>());
      }
      return DocumentInstance(spec, "inline");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad game spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad game: ") + e.what());
  }
  throw ConfigError("game spec must be a string or an object");
}

void ExperimentConfig::Validate() const {
  if (game.is_null()) throw ConfigError("config has no game");
  if (algorithms.empty()) throw ConfigError("config has no algorithm");
  if (seeds.empty()) throw ConfigError("config needs at least one seed");
  try {
    dynamics.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (sweep) {
    if (sweep->values.empty()) throw ConfigError("sweep has no values");
    static const std::set<std::string> kAxes = {"n_resources", "n_players",
                                                "n_targets", "n_agents"};
    if (!kAxes.count(sweep->axis)) {
      throw ConfigError("unknown sweep axis '" + sweep->axis + "'");
    }
  }
}

ExperimentConfig ConfigFromJson(const nlohmann::json& j,
                                ExperimentConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "game") {
        base.game = value;
      } else if (key == "algorithm") {
        base.algorithms = {ParseAlgorithm(value.get<std::string>())};
      } else if (key == "algorithms") {
        base.algorithms.clear();
        for (const auto& name : value) {
          base.algorithms.push_back(ParseAlgorithm(name.get<std::string>()));
        }
      } else if (key == "dynamics") {
        base.dynamics = DynamicsConfigFromJson(value, base.dynamics);
      } else if (key == "seeds") {
        base.seeds = value.is_string()
                         ? ParseSeedList(value.get<std::string>())
                         : value.get<std::vector<std::uint64_t>>();
      } else if (key == "out") {
        base.out_dir = value.get<std::string>();
      } else if (key == "sweep") {
        base.sweep = SweepAxis{value.at("axis").get<std::string>(),
                               value.at("values").get<std::vector<int>>()};
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return base;
}

nlohmann::json ConfigToJson(const ExperimentConfig& config) {
  nlohmann::json algorithms = nlohmann::json::array();
  for (Algorithm a : config.algorithms) algorithms.push_back(AlgorithmName(a));
  nlohmann::json j = {{"game", config.game},
                      {"algorithms", algorithms},
                      {"dynamics", DynamicsConfigToJson(config.dynamics)},
                      {"seeds", config.seeds},
                      {"out", config.out_dir}};
  if (config.sweep) {
    j["sweep"] = {{"axis", config.sweep->axis},
                  {"values", config.sweep->values}};
  }
  return j;
}

std::vector<std::string> PresetNames() {
  return {"fig2", "fig4-small", "fig5-sweep", "wta-small", "staghunt"};
}

nlohmann::json PresetJson(std::string_view name) {
  if (name == "fig2") {
    return {{"game", "resource_2x2"},
            {"algorithms", {"sorm", "lurm", "gurm"}},
            {"seeds", "1-50"}};
  }
  if (name == "fig4-small") {
    return {{"game",
             {{"generator", "resource"},
              {"n_players", 20},
              {"n_resources", 5},
              {"seed", 1}}},
            {"algorithms", {"sorm", "gurm", "lurm"}},
            {"seeds", "1-20"}};
  }
  if (name == "fig5-sweep") {
    return {{"game",
             {{"generator", "resource"},
              {"n_players", 50},
              {"n_resources", 3},
              {"seed", 1}}},
            {"algorithms", {"sorm", "gurm", "lurm"}},
            {"seeds", "1-5"},
            {"sweep", {{"axis", "n_resources"}, {"values", {3, 5, 8}}}}};
  }
  if (name == "wta-small") {
    return {{"game",
             {{"generator", "task"},
              {"n_agents", 10},
              {"n_targets", 20},
              {"seed", 1}}},
            {"algorithms", {"sorm", "gurm"}},
            {"dynamics", {{"max_total_iterations", 500}}},
            {"seeds", "1-10"}};
  }
  if (name == "staghunt") {
    return {{"game", "stag_hunt"},
            {"algorithms", {"sorm", "lurm"}},
            {"seeds", "1-50"}};
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::uint64_t> ParseSeedList(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  auto parse = [&](std::string_view token) {
    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() ||
        ptr != token.data() + token.size()) {
      throw ConfigError("bad seed '" + std::string(token) + "'");
    }
    return value;
  };
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view token = text.substr(0, comma);
    const auto dash = token.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(parse(token));
    } else {
      const std::uint64_t lo = parse(token.substr(0, dash));
      const std::uint64_t hi = parse(token.substr(dash + 1));
      if (hi < lo) throw ConfigError("bad seed range '" + std::string(token) + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    text = comma == std::string_view::npos ? std::string_view{}
                                           : text.substr(comma + 1);
  }
  return seeds;
}

std::vector<int> ParseIntList(std::string_view text) {
  std::vector<int> values;
  for (std::uint64_t v : ParseSeedList(text)) {
    values.push_back(static_cast<int>(v));
  }
  return values;
}

std::string DefaultOutDir() {
  const char* env = std::getenv("ARENA_OUT_DIR");
  return env && *env ? std::string(env) : std::string("arena_out");
}

Metrics TraceMetrics(const RunTrace& trace, std::optional<double> oracle_w) {
  Metrics metrics;
  metrics.iterations_to_convergence = trace.first_convergence;
  if (!trace.rows.empty()) {
    const TraceRow& last = trace.rows.back();
    metrics.final_w = last.global_utility;
    metrics.final_omega = last.omega;
    metrics.max_final_avg_regret = last.max_avg_regret;
  }
  if (oracle_w && *oracle_w != 0.0) {
    metrics.ratio_to_optimum = metrics.final_w / *oracle_w;
  }
  return metrics;
}

Metrics RunMetrics(const RunResult& result, std::optional<double> oracle_w) {
  Metrics metrics = TraceMetrics(result.trace, std::nullopt);
  metrics.final_w = result.final_w;
  metrics.final_omega = result.final_omega;
  if (oracle_w && *oracle_w != 0.0) {
    metrics.ratio_to_optimum = metrics.final_w / *oracle_w;
  }
  return metrics;
}

nlohmann::json MetricsToJson(const Metrics& metrics) {
  nlohmann::json j = {
      {"iterations_to_convergence",
       metrics.iterations_to_convergence
           ? nlohmann::json(*metrics.iterations_to_convergence)
           : nlohmann::json("none")},
      {"final_W", metrics.final_w},
      {"final_omega", metrics.final_omega},
      {"max_final_avg_regret", metrics.max_final_avg_regret}};
  if (metrics.ratio_to_optimum) {
    j["ratio_to_optimum"] = *metrics.ratio_to_optimum;
  }
  return j;
}

std::optional<double> OracleWelfare(const Game& game, std::uint64_t limit) {
  if (game.NumProfiles() > limit) return std::nullopt;
  return FindSocialOptimum(game, limit).welfare;
}

nlohmann::json RunSummaryJson(const RunRecord& record,
                              const GameInstance& instance,
                              const DynamicsConfig& dynamics) {
  nlohmann::json j = MetricsToJson(record.metrics);
  j["algorithm"] = AlgorithmName(record.algorithm);
  j["seed"] = record.seed;
  j["status"] = RunStatusName(record.result.status);
  j["final_profile"] = record.result.final_profile;
  j["rounds"] = record.result.rounds;
  j["iterations"] = record.result.ledger.iterations;
  j["cumulative_queries"] = record.result.ledger.cumulative_queries;
  j["cumulative_messages"] = record.result.ledger.cumulative_messages;
  j["game"] = instance.label;
  j["instance_hash"] = HexHash(instance.hash);
  j["dynamics"] = DynamicsConfigToJson(dynamics);
  return j;
}

std::vector<RunRecord> Run(const ExperimentConfig& config) {
  config.Validate();
  const GameInstance instance = LoadGame(config.game);
  return RunImpl(config, instance, OracleWelfare(instance.game),
                 /*keep_traces=*/true);
}

ComparisonSummary Summarize(const std::vector<RunRecord>& records,
                            const GameInstance& instance,
                            const std::vector<Algorithm>& algorithms,
                            const std::vector<std::uint64_t>& seeds,
                            std::optional<double> oracle_w) {
  ComparisonSummary summary;
  summary.game_label = instance.label;
  summary.instance_hash = instance.hash;
  summary.seeds = seeds;
  // Records arrive grouped per configured arm, seeds in order.
  std::size_t next = 0;
  for (Algorithm algorithm : algorithms) {
    ArmSummary arm;
    arm.algorithm = algorithm;
    std::vector<double> iterations;
    std::vector<double> queries;
    int optimal = 0;
    for (std::size_t s = 0; s < seeds.size(); ++s, ++next) {
      const RunRecord& record = records.at(next);
      arm.final_ws.push_back(record.metrics.final_w);
      if (record.metrics.iterations_to_convergence) {
        iterations.push_back(
            static_cast<double>(*record.metrics.iterations_to_convergence));
      }
      queries.push_back(
          static_cast<double>(record.result.ledger.cumulative_queries));
      if (oracle_w && std::abs(record.metrics.final_w - *oracle_w) <=
                          1e-9 * std::max(1.0, std::abs(*oracle_w))) {
        ++optimal;
      }
    }
    arm.mean_w = Mean(arm.final_ws);
    arm.median_w = Median(arm.final_ws);
    if (!iterations.empty()) arm.mean_iterations = Mean(iterations);
    arm.converged_fraction =
        static_cast<double>(iterations.size()) / static_cast<double>(seeds.size());
    if (oracle_w) {
      arm.optimal_fraction =
          static_cast<double>(optimal) / static_cast<double>(seeds.size());
    }
    arm.mean_cumulative_queries = Mean(queries);
    summary.arms.push_back(std::move(arm));
  }
  std::vector<std::size_t> order(summary.arms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return summary.arms[a].mean_w > summary.arms[b].mean_w;
  });
  for (std::size_t r = 0; r < order.size(); ++r) {
    summary.arms[order[r]].rank = static_cast<int>(r) + 1;
  }
  return summary;
}

nlohmann::json ComparisonToJson(const ComparisonSummary& summary) {
  nlohmann::json arms = nlohmann::json::array();
  for (const ArmSummary& arm : summary.arms) {
    arms.push_back({{"algorithm", AlgorithmName(arm.algorithm)},
                    {"rank", arm.rank},
                    {"final_W", arm.final_ws},
                    {"mean_final_W", arm.mean_w},
                    {"median_final_W", arm.median_w},
                    {"mean_iterations_to_convergence",
                     OptionalJson(arm.mean_iterations)},
                    {"converged_fraction", arm.converged_fraction},
                    {"optimal_fraction", OptionalJson(arm.optimal_fraction)},
                    {"mean_cumulative_queries", arm.mean_cumulative_queries},
                    {"instance_hash", HexHash(summary.instance_hash)}});
  }
  return {{"game", summary.game_label},
          {"instance_hash", HexHash(summary.instance_hash)},
          {"seeds", summary.seeds},
          {"arms", arms}};
}

ComparisonSummary Compare(const ExperimentConfig& config) {
  config.Validate();
  return CompareImpl(config);
}

std::vector<SweepRow> Sweep(const ExperimentConfig& config) {
  config.Validate();
  if (!config.sweep) throw ConfigError("sweep needs a sweep axis");
  nlohmann::json generator = config.game;
  if (generator.is_string()) {
    auto parsed = ParseGeneratorString(generator.get<std::string>());
    if (!parsed) throw ConfigError("sweep needs a generator game");
    generator = *parsed;
  }
  if (!generator.is_object() || !generator.contains("generator")) {
    throw ConfigError("sweep needs a generator game");
  }
  const bool task = generator.at("generator") == "task";
  std::string key = config.sweep->axis;
  if (task && key == "n_resources") key = "n_targets";
  if (task && key == "n_players") key = "n_agents";
  if (!task && key == "n_targets") key = "n_resources";
  if (!task && key == "n_agents") key = "n_players";

  std::vector<int> values;
  for (int v : config.sweep->values) {
    if (std::find(values.begin(), values.end(), v) != values.end()) {
      std::cerr << "warning: dropping duplicate sweep value " << v << '\n';
      continue;
    }
    values.push_back(v);
  }

  std::vector<SweepRow> rows;
  for (int v : values) {
    ExperimentConfig point = config;
    point.sweep.reset();
    point.game = generator;
    point.game[key] = v;
    if (!config.out_dir.empty()) {
      point.out_dir = (fs::path(config.out_dir) /
                       (config.sweep->axis + "_" + std::to_string(v)))
                          .string();
    }
    if (point.algorithms.size() < 2) {
      // A single arm is still a valid sweep row.
      const GameInstance instance = LoadGame(point.game);
      const auto oracle = OracleWelfare(instance.game);
      const auto records = RunImpl(point, instance, oracle, false);
      rows.push_back({config.sweep->axis, v,
                      Summarize(records, instance, point.algorithms,
                                point.seeds, oracle)});
    } else {
      rows.push_back({config.sweep->axis, v, CompareImpl(point)});
    }
  }
  if (!config.out_dir.empty()) {
    PrepareOutDir(config.out_dir);
    std::ofstream out(fs::path(config.out_dir) / "sweep.csv");
    WriteSweepCsv(rows, out);
  }
  return rows;
}

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "axis,value," << kComparisonColumns << '\n';
  for (const SweepRow& row : rows) {
    WriteComparisonCsv(row.summary, out,
                       row.axis + ',' + std::to_string(row.value) + ',');
  }
}

RunTrace ReadProfilesCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read profiles file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("iteration", 0) != 0) {
    throw ConfigError(path + ": missing profiles header");
  }
  RunTrace trace;
  trace.n_players =
      static_cast<int>(std::count(line.begin(), line.end(), ','));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::int64_t> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view token = rest.substr(0, comma);
      std::int64_t value = 0;
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ConfigError(path + ": bad field '" + std::string(token) + "'");
      }
      fields.push_back(value);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (static_cast<int>(fields.size()) != trace.n_players + 1) {
      throw ConfigError(path + ": wrong field count");
    }
    TraceRow row;
    row.iteration = fields[0];
    row.t = fields[0];
    trace.rows.push_back(row);
    for (int i = 0; i < trace.n_players; ++i) {
      trace.profiles.push_back(static_cast<int>(fields[i + 1]));
    }
  }
  return trace;
}

nlohmann::json Verify(const GameInstance& instance,
                      const std::optional<ActionProfile>& profile,
                      const std::optional<std::string>& profiles_csv,
                      double burn_in, std::uint64_t guard) {
  const Game& game = instance.game;
  nlohmann::json j;
  j["game"] = instance.label;
  j["instance_hash"] = HexHash(instance.hash);
  j["num_profiles"] = game.NumProfiles();
  const bool enumerable = game.NumProfiles() <= guard;
  if (enumerable) {
    j["report"] = ReportToJson(AnalyzeGame(game, guard));
  } else {
    j["report"] = {{"psne_set", nlohmann::json::array()},
                   {"social_optimum", nullptr},
                   {"pareto_set", nlohmann::json::array()},
                   {"is_exhaustive", false}};
  }
  const Game aligned = MakeAligned(game);
  if (profile) {
    try {
      game.ValidateProfile(*profile);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    nlohmann::json p = {{"profile", *profile},
                        {"W", game.GlobalUtility(*profile)},
                        {"is_psne", IsPsne(game, *profile)},
                        {"is_psne_aligned", IsPsne(aligned, *profile)}};
    p["is_pareto_optimal"] = enumerable
                                 ? nlohmann::json(IsParetoOptimal(game, *profile, guard))
                                 : nlohmann::json(nullptr);
    j["profile"] = p;
  }
  if (profiles_csv) {
    const RunTrace trace = ReadProfilesCsv(*profiles_csv);
    if (trace.n_players != game.NumPlayers()) {
      throw ConfigError("profiles file has " + std::to_string(trace.n_players) +
                        " players, game has " +
                        std::to_string(game.NumPlayers()));
    }
    EmpiricalDistribution dist;
    try {
      dist = EmpiricalDistributionFromTrace(trace, burn_in);
      for (const auto& [p, count] : dist.counts) game.ValidateProfile(p);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    j["trace"] = {{"iterations", trace.rows.size()},
                  {"burn_in", burn_in},
                  {"distinct_profiles", dist.counts.size()},
                  {"cce_regret", CceRegret(game, dist)},
                  {"cce_regret_aligned", CceRegret(aligned, dist)}};
  }
  return j;
}

}  // namespace arena
