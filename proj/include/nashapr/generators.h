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

// Seeded generators for five structured game classes and dataset handling.
//
// Each class draws its per-instance parameters from a fixed distribution
// (documented on the generator below) and produces raw payoffs that are then
// mapped into [0, 1] by one joint affine transform. Game k of a dataset is
// drawn from Stream(seed, k).

#ifndef NASHAPR_GENERATORS_H_
#define NASHAPR_GENERATORS_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nashapr/game.h"
#include "nashapr/random.h"

namespace nashapr {

enum class GameClass {
  kTravelersDilemma,
  kGrabTheDollar,
  kWarOfAttrition,
  kBertrandOligopoly,
  kMajorityVoting,
};

std::string_view GameClassName(GameClass c);
// Accepts the snake_case names, e.g. "travelers_dilemma". Throws SpecError.
GameClass ParseGameClass(std::string_view name);

struct GeneratorSpec {
  GameClass game_class = GameClass::kMajorityVoting;
  GameShape shape;
  std::uint64_t seed = 0;
  // Ordered (name, value) pairs. grab_the_dollar reads "decay" (1 enables
  // the 1 - (t - 1)/K factor, 0 disables it); other classes take none.
  std::vector<std::pair<std::string, double>> class_params;

  double Param(std::string_view name, double fallback) const;
  bool operator==(const GeneratorSpec&) const = default;
};

// Spec with the class's default parameters filled in.
GeneratorSpec MakeGeneratorSpec(GameClass game_class,
                                std::vector<int> action_counts,
                                std::uint64_t seed);

// Throws SpecError when the shape does not fit the class: the first three
// classes are two-player only, all classes need >= 2 actions per player, and
// bertrand_oligopoly / majority_voting need equal action counts.
void ValidateSpec(const GeneratorSpec& spec);

struct DatasetSplit {
  std::vector<std::uint64_t> train;
  std::vector<std::uint64_t> validation;
  std::vector<std::uint64_t> test;
  bool operator==(const DatasetSplit&) const = default;
};

// Contiguous split: train first, then `validation`, then `test` games at the
// end. Throws ConfigError if validation + test > count.
DatasetSplit MakeSplit(std::size_t count, std::size_t validation,
                       std::size_t test);
// validation = floor(count / 10), test = min(200, floor(count / 10)).
DatasetSplit DefaultSplit(std::size_t count);

struct Dataset {
  GeneratorSpec spec;
  std::vector<Game> games;
  DatasetSplit split;

  std::vector<Game> Select(const std::vector<std::uint64_t>& indices) const;
  bool operator==(const Dataset&) const = default;
};

Dataset Generate(const GeneratorSpec& spec, std::size_t count);
Dataset Generate(const GeneratorSpec& spec, std::size_t count,
                 DatasetSplit split);
// The single game at position `index` of any dataset built from `spec`.
Game GenerateGame(const GeneratorSpec& spec, std::uint64_t index);

// Maps all entries by (x - min) / (max - min), jointly over players. A
// constant tensor maps to 0.5. Throws DataError on non-finite input.
Game NormalizeToUnit(const GameShape& shape, std::vector<double> raw);
Game NormalizeToUnit(const Game& game);

// Raw payoff rules, before normalization. Actions are 1-based here.

// Claims c1, c2: min(c1, c2) + reward * sign(opponent claim - own claim).
std::array<double, 2> TravelersDilemmaPayoffs(int claim1, int claim2,
                                              int reward);
// Earlier grabber gets `high`, the other `mid`, a tie gives both `low`; all
// scaled by `decay`.
std::array<double, 2> GrabTheDollarPayoffs(int time1, int time2, double low,
                                           double mid, double high,
                                           double decay);
// The earlier conceder pays t * c, the other wins v minus its cost up to t;
// a tie shares the object.
std::array<double, 2> WarOfAttritionPayoffs(int time1, int time2,
                                            std::array<double, 2> value,
                                            std::array<double, 2> cost);
// Lowest-price players split the profit (p - c) * (K - p + 1).
std::vector<double> BertrandPayoffs(std::span<const int> prices, int num_prices,
                                    double unit_cost);
// Plurality winner among 0-based votes, ties to the lowest candidate.
int MajorityWinner(std::span<const int> votes, int num_candidates);

// Per-class generators. Each consumes the stream in a fixed order.

// Reward R ~ uniform integer in {2, ..., max(2, floor(K / 5))}.
Game GenTravelersDilemma(int num_actions, Stream& stream);
// Three U[0,1] draws sorted into low <= mid <= high.
Game GenGrabTheDollar(int num_actions, Stream& stream, bool decay = true);
// v_i ~ U[0.5, 1], then c_i ~ U[0.01, 0.1].
Game GenWarOfAttrition(int num_actions, Stream& stream);
// c ~ U[0, 0.5], prices 1..K.
Game GenBertrandOligopoly(int num_players, int num_actions, Stream& stream);
// w_i(c) ~ U[0, 1], drawn player by player.
Game GenMajorityVoting(int num_players, int num_actions, Stream& stream);

}  // namespace nashapr

#endif  // NASHAPR_GENERATORS_H_
