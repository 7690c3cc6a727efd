// Copyright 2026 The NashApr Authors
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

// Experiment drivers behind the command-line harness: generalization
// against a random-profile baseline, the iteration race between the
// approximator and the classic solvers, and warm-starting regret descent
// from the approximator's output.
//
// Every stochastic choice is seeded from the experiment seed, so rerunning
// a configuration reproduces every report except the wall-clock columns.

#ifndef NASHAPR_EXPERIMENTS_H_
#define NASHAPR_EXPERIMENTS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nashapr/approximator.h"
#include "nashapr/generators.h"
#include "nashapr/solvers.h"

namespace nashapr {

// Seed for repetition `rep` of the unit named by `tag`.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view tag,
                         std::uint64_t rep);

// An approximator together with the number of optimizer steps behind it.
// Race and warm-start refuse models with no training (UsageError).
struct TrainedModel {
  ApproximatorArch arch;
  ApproximatorParams params;
  std::int64_t steps = 0;
};

// ---- generalization ----

struct GeneralizationConfig {
  std::vector<Dataset> datasets;  // one per game class
  std::vector<int> hidden_layers = {128, 128};
  TrainConfig train;  // train.seed is replaced per repetition
  int repetitions = 1;
  std::uint64_t seed = 0;
};

struct GeneralizationRow {
  std::string game_class;
  int repetition = 0;
  std::string split;  // "train", "test" or "random" (baseline on test)
  double mean = 0.0;
  double std = 0.0;
};

struct GeneralizationResult {
  std::vector<GeneralizationRow> rows;
  // models[c][r]: class c, repetition r.
  std::vector<std::vector<TrainedModel>> models;
  std::vector<std::vector<std::vector<TrainLogRow>>> logs;
};

// Random-profile baseline: NashApr of one uniformly random profile per game.
LossSummary RandomBaseline(std::span<const Game> games, std::uint64_t seed);

GeneralizationResult RunGeneralization(const GeneralizationConfig& cfg);

inline constexpr std::string_view kGeneralizationCsvHeader =
    "class,repetition,split,mean,std";
void WriteGeneralizationCsv(std::ostream& out,
                            std::span<const GeneralizationRow> rows);

// ---- efficiency race ----

struct RaceConfig {
  std::vector<SolverKind> solvers = {SolverKind::kFictitiousPlay,
                                     SolverKind::kRegretMatching,
                                     SolverKind::kReplicatorDynamics};
  int max_iterations = 10000;
  // Added to the model's loss to form each game's target.
  double tolerance = 0.0;
  std::string game_class;
  SolverConfig solver;  // remaining solver knobs
};

struct RaceGameRow {
  std::string solver;  // "nea" for the approximator
  std::size_t game_index = 0;
  double target = 0.0;
  int iterations = 0;
  bool reached = false;
  double final_nash_apr = 0.0;
  double wall_time_s = 0.0;
};

struct RaceSummaryRow {
  std::string solver;
  std::string game_class;
  double mean_time_s = 0.0;
  double mean_iterations = 0.0;
  int failures = 0;
  int games = 0;
};

struct RaceResult {
  std::vector<RaceSummaryRow> summary;  // approximator first
  std::vector<RaceGameRow> games;       // sorted by solver, then game
};

// Targets are the model's per-game loss plus cfg.tolerance; every solver
// starts from the uniform profile and counts as failed when it exhausts
// max_iterations first (its iteration count is then the cap).
RaceResult RunEfficiencyRace(const TrainedModel& model,
                             std::span<const Game> games,
                             const RaceConfig& cfg);

inline constexpr std::string_view kRaceCsvHeader =
    "solver,class,mean_time_s,mean_iterations,failures,games";
inline constexpr std::string_view kRaceGamesCsvHeader =
    "solver,game_index,target,iterations,reached,final_nash_apr,wall_time_s";
void WriteRaceCsv(std::ostream& out, std::span<const RaceSummaryRow> rows);
void WriteRaceGamesCsv(std::ostream& out, std::span<const RaceGameRow> rows);

// ---- warm start ----

struct WarmstartConfig {
  double target = 0.01;
  double eta0 = 0.1;
  int max_iterations = 10000;
};

struct WarmstartRow {
  std::size_t game_index = 0;
  std::string init_kind;  // "uniform" or "model"
  int iterations = 0;
  double wall_time_s = 0.0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  bool reached = false;
};

struct WarmstartSummary {
  double median_uniform_iterations = 0.0;
  double median_model_iterations = 0.0;
  // Model-initialized runs whose final loss exceeds their initial loss.
  int model_regressions = 0;
  int games = 0;
};

struct WarmstartResult {
  std::vector<WarmstartRow> rows;  // two per game: uniform, then model
  WarmstartSummary summary;
};

WarmstartResult RunWarmstart(const TrainedModel& model,
                             std::span<const Game> games,
                             const WarmstartConfig& cfg);

inline constexpr std::string_view kWarmstartCsvHeader =
    "game_index,init_kind,iterations,wall_time_s,initial_loss,final_loss,"
    "reached";
inline constexpr std::string_view kWarmstartSummaryCsvHeader =
    "games,median_uniform_iterations,median_model_iterations,"
    "model_regressions";
void WriteWarmstartCsv(std::ostream& out, std::span<const WarmstartRow> rows);
void WriteWarmstartSummaryCsv(std::ostream& out, const WarmstartSummary& s);

// Median with the midpoint convention for even sizes; 0 for empty input.
double Median(std::vector<double> values);

}  // namespace nashapr

#endif  // NASHAPR_EXPERIMENTS_H_
