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

// Nash approximation loss and the quantities it is built from.
//
// For a profile s the loss is
//   max_i max_{a_i} [ u_i(a_i, s_{-i}) - u_i(s) ],
// the largest gain any single player can get from a unilateral pure
// deviation. It is zero exactly at Nash equilibria.

#ifndef NASHAPR_NASH_H_
#define NASHAPR_NASH_H_

#include <cstddef>
#include <span>
#include <vector>

#include "nashapr/game.h"

namespace nashapr {

// Two candidates for a maximum within this distance count as a tie.
inline constexpr double kTieTolerance = 1e-12;

// brute_force_nash_apr refuses games with more joint actions than this.
inline constexpr std::size_t kBruteForceMaxJointActions = 1'000'000;

// Contracts player `owner`'s utility tensor with the strategies of every
// player not listed in `keep` (sorted, distinct). The result is a dense
// tensor over the kept axes, row-major with the last kept axis fastest.
// Profile entries are used as given, without renormalization.
std::vector<double> ContractUtilities(const Game& game, int owner,
                                      const StrategyProfile& profile,
                                      std::span<const int> keep);

// u_i(s) = sum_a (prod_j s_j(a_j)) u_i(a).
double ExpectedUtility(const Game& game, int player,
                       const StrategyProfile& profile);

// Entry a_i is u_i(a_i, s_{-i}).
std::vector<double> DeviationPayoffs(const Game& game, int player,
                                     const StrategyProfile& profile);

// Lowest-index argmax of the deviation payoffs.
int BestResponse(const Game& game, int player, const StrategyProfile& profile);

// max_{s'_i} u_i(s'_i, s_{-i}) - u_i(s).
double NashExploitability(const StrategyProfile& profile, const Game& game,
                          int player);

// The loss. Profiles that are off the simplex by more than
// kProbabilityTolerance are renormalized first.
double NashApr(const StrategyProfile& profile, const Game& game);

// The loss formula evaluated at the given coordinates, treating every
// profile entry as a free variable (the multilinear extension). Agrees with
// NashApr on valid profiles; used for finite-difference checks.
double NashAprMultilinear(const StrategyProfile& profile, const Game& game);

struct SubgradientReport {
  // d loss / d s_i(a_i), one vector per player.
  std::vector<std::vector<double>> gradient;
  int argmax_player = 0;
  int argmax_action = 0;
  // More than one (player, action) pair attains the outer maximum.
  bool tie_flag = false;
  double value = 0.0;
};

// Gradient of g(s) = u_{i*}(a*, s_{-i*}) - u_{i*}(s) where (i*, a*) is the
// maximizing deviation, ties broken to the lowest player then the lowest
// action. This is a subgradient of the loss and its exact gradient away from
// ties.
SubgradientReport NashAprSubgradient(const StrategyProfile& profile,
                                     const Game& game);

// sum_i sum_{a_i} |p_i(a_i) - q_i(a_i)|.
double L1Distance(const StrategyProfile& p, const StrategyProfile& q);

// max_i max_a |u_i(a) - v_i(a)|.
double MaxDistance(const Game& u, const Game& v);

// Independent oracle: evaluates the loss by enumerating every joint action
// for every expectation. Throws SizeError above kBruteForceMaxJointActions.
double BruteForceNashApr(const StrategyProfile& profile, const Game& game);

}  // namespace nashapr

#endif  // NASHAPR_NASH_H_
