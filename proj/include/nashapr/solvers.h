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

// Iterative equilibrium solvers: fictitious play, regret matching,
// replicator dynamics, and projected subgradient descent on the Nash
// approximation loss. Every solver records the loss of the profile it
// reports and can stop as soon as that loss reaches a target.

#ifndef NASHAPR_SOLVERS_H_
#define NASHAPR_SOLVERS_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nashapr/game.h"
#include "nashapr/random.h"

namespace nashapr {

struct SolverConfig {
  int max_iterations = 100000;
  // Stop once the reported profile's loss is <= this value (checked from
  // the initial profile on). Absent: always run max_iterations.
  std::optional<double> target_nash_apr;
  int record_every = 1;
  // Initial profile; uniform when absent.
  std::optional<StrategyProfile> warm_start;
  // Fictitious play: weight of the initial profile in the action counts.
  double fp_prior_weight = 1.0;
  // Replicator dynamics: payoff shift keeping the update denominator
  // positive.
  double rd_shift = 1e-3;
  // Regret descent: step size eta_t = eta0 / sqrt(t).
  double descent_step = 0.1;
};

struct TracePoint {
  int iteration = 0;
  double nash_apr = 0.0;
  double wall_time_s = 0.0;
};

struct SolverTrace {
  // Number of updates performed. 0 means the initial profile already met
  // the target.
  int iterations_used = 0;
  double wall_time_s = 0.0;
  // Iteration 0 is the initial profile.
  std::vector<TracePoint> loss_curve;
  // The reported profile: time average for fictitious play and regret
  // matching, current iterate for replicator dynamics, best-so-far for
  // regret descent.
  StrategyProfile final_profile;
  // The iterate the dynamics actually played last.
  StrategyProfile last_iterate;
  double final_nash_apr = 0.0;
  bool reached_target = false;
};

enum class SolverKind {
  kFictitiousPlay,
  kRegretMatching,
  kReplicatorDynamics,
  kRegretDescent,
};

// Short names used in reports: "fp", "rm", "rd", "descent".
std::string_view SolverName(SolverKind kind);
SolverKind ParseSolver(std::string_view name);

SolverTrace FictitiousPlay(const Game& game, const SolverConfig& cfg);
SolverTrace RegretMatching(const Game& game, const SolverConfig& cfg);
SolverTrace ReplicatorDynamics(const Game& game, const SolverConfig& cfg);
SolverTrace RegretDescent(const Game& game, const SolverConfig& cfg);
SolverTrace RunSolver(SolverKind kind, const Game& game,
                      const SolverConfig& cfg);

// Euclidean projection onto the probability simplex.
std::vector<double> ProjectToSimplex(std::span<const double> v);

// Each player's strategy uniform on the simplex (normalized exponentials).
StrategyProfile RandomProfile(const GameShape& shape, Stream& stream);

inline constexpr std::string_view kTraceCsvHeader =
    "solver,game_index,iteration,nash_apr,wall_time_s";
// One row per recorded point, without the header.
void WriteTraceCsv(std::ostream& out, std::string_view solver,
                   std::size_t game_index, const SolverTrace& trace);

}  // namespace nashapr

#endif  // NASHAPR_SOLVERS_H_
