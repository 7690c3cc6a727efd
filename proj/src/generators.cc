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

#include "nashapr/generators.h"

#include <algorithm>
#include <cmath>

#include "nashapr/errors.h"

namespace nashapr {
namespace {

constexpr std::array<std::pair<GameClass, std::string_view>, 5> kClassNames = {{
    {GameClass::kTravelersDilemma, "travelers_dilemma"},
    {GameClass::kGrabTheDollar, "grab_the_dollar"},
    {GameClass::kWarOfAttrition, "war_of_attrition"},
    {GameClass::kBertrandOligopoly, "bertrand_oligopoly"},
    {GameClass::kMajorityVoting, "majority_voting"},
}};

int Sign(int x) { return (x > 0) - (x < 0); }

// Fills a two-player raw tensor from a payoff rule over 1-based actions.
template <typename Rule>
std::vector<double> TwoPlayerRaw(int k, Rule rule) {
  const std::size_t joint = static_cast<std::size_t>(k) * k;
  std::vector<double> raw(2 * joint);
  for (int a1 = 1; a1 <= k; ++a1) {
    for (int a2 = 1; a2 <= k; ++a2) {
      const std::array<double, 2> p = rule(a1, a2);
      const std::size_t idx = static_cast<std::size_t>(a1 - 1) * k + (a2 - 1);
      raw[idx] = p[0];
      raw[joint + idx] = p[1];
    }
  }
  return raw;
}

// Advances a 0-based joint action in row-major order.
void Increment(std::vector<int>& actions, const GameShape& shape) {
  for (int i = shape.num_players() - 1; i >= 0; --i) {
    if (++actions[i] < shape.num_actions(i)) return;
    actions[i] = 0;
  }
}

}  // namespace

std::string_view GameClassName(GameClass c) {
  for (const auto& [cls, name] : kClassNames) {
    if (cls == c) return name;
  }
  throw SpecError("unknown game class");
}

GameClass ParseGameClass(std::string_view name) {
  for (const auto& [cls, n] : kClassNames) {
    if (n == name) return cls;
  }
  throw SpecError("unknown game class '" + std::string(name) + "'");
}

double GeneratorSpec::Param(std::string_view name, double fallback) const {
  for (const auto& [key, value] : class_params) {
    if (key == name) return value;
  }
  return fallback;
}

GeneratorSpec MakeGeneratorSpec(GameClass game_class,
                                std::vector<int> action_counts,
                                std::uint64_t seed) {
  GeneratorSpec spec;
  spec.game_class = game_class;
  spec.shape = GameShape(std::move(action_counts));
  spec.seed = seed;
  if (game_class == GameClass::kGrabTheDollar) {
    spec.class_params.emplace_back("decay", 1.0);
  }
  ValidateSpec(spec);
  return spec;
}

void ValidateSpec(const GeneratorSpec& spec) {
  const GameShape& shape = spec.shape;
  const std::string name(GameClassName(spec.game_class));
  if (shape.num_players() < 2) throw SpecError(name + " needs >= 2 players");
  for (int k : shape.action_counts()) {
    if (k < 2) throw SpecError(name + " needs >= 2 actions per player");
  }
  switch (spec.game_class) {
    case GameClass::kTravelersDilemma:
    case GameClass::kGrabTheDollar:
    case GameClass::kWarOfAttrition:
      if (shape.num_players() != 2) {
        throw SpecError(name + " is a two-player game");
      }
      if (shape.num_actions(0) != shape.num_actions(1)) {
        throw SpecError(name + " needs a square action grid");
      }
      break;
    case GameClass::kBertrandOligopoly:
    case GameClass::kMajorityVoting: {
      const auto& counts = shape.action_counts();
      if (std::adjacent_find(counts.begin(), counts.end(),
                             std::not_equal_to<>()) != counts.end()) {
        throw SpecError(name + " needs equal action counts");
      }
      break;
    }
  }
}

DatasetSplit MakeSplit(std::size_t count, std::size_t validation,
                       std::size_t test) {
  if (validation + test > count) {
    throw ConfigError("validation + test exceeds dataset size");
  }
  DatasetSplit split;
  const std::size_t train = count - validation - test;
  for (std::size_t k = 0; k < count; ++k) {
    if (k < train) {
      split.train.push_back(k);
    } else if (k < train + validation) {
      split.validation.push_back(k);
    } else {
      split.test.push_back(k);
    }
  }
  return split;
}

DatasetSplit DefaultSplit(std::size_t count) {
  return MakeSplit(count, count / 10, std::min<std::size_t>(200, count / 10));
}

std::vector<Game> Dataset::Select(
    const std::vector<std::uint64_t>& indices) const {
  std::vector<Game> out;
  out.reserve(indices.size());
  for (std::uint64_t k : indices) {
    if (k >= games.size()) throw DimensionError("split index out of range");
    out.push_back(games[k]);
  }
  return out;
}

Game GenerateGame(const GeneratorSpec& spec, std::uint64_t index) {
  Stream stream(spec.seed, index);
  const GameShape& shape = spec.shape;
  switch (spec.game_class) {
    case GameClass::kTravelersDilemma:
      return GenTravelersDilemma(shape.num_actions(0), stream);
    case GameClass::kGrabTheDollar:
      return GenGrabTheDollar(shape.num_actions(0), stream,
                              spec.Param("decay", 1.0) != 0.0);
    case GameClass::kWarOfAttrition:
      return GenWarOfAttrition(shape.num_actions(0), stream);
    case GameClass::kBertrandOligopoly:
      return GenBertrandOligopoly(shape.num_players(), shape.num_actions(0),
                                  stream);
    case GameClass::kMajorityVoting:
      return GenMajorityVoting(shape.num_players(), shape.num_actions(0),
                               stream);
  }
  throw SpecError("unknown game class");
}

Dataset Generate(const GeneratorSpec& spec, std::size_t count) {
  return Generate(spec, count, DefaultSplit(count));
}

Dataset Generate(const GeneratorSpec& spec, std::size_t count,
                 DatasetSplit split) {
  ValidateSpec(spec);
  Dataset ds;
  ds.spec = spec;
  ds.games.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    ds.games.push_back(GenerateGame(spec, k));
  }
  ds.split = std::move(split);
  return ds;
}

Game NormalizeToUnit(const GameShape& shape, std::vector<double> raw) {
  if (raw.empty()) throw DimensionError("empty utility tensor");
  double lo = raw[0];
  double hi = raw[0];
  for (double x : raw) {
    if (!std::isfinite(x)) throw DataError("non-finite raw payoff");
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi == lo) {
    std::fill(raw.begin(), raw.end(), 0.5);
  } else {
    const double span = hi - lo;
    for (double& x : raw) x = (x - lo) / span;
  }
  return Game(shape, std::move(raw));
}

Game NormalizeToUnit(const Game& game) {
  return NormalizeToUnit(game.shape(),
                         std::vector<double>(game.flat().begin(),
                                             game.flat().end()));
}

std::array<double, 2> TravelersDilemmaPayoffs(int claim1, int claim2,
                                              int reward) {
  const double low = std::min(claim1, claim2);
  return {low + reward * Sign(claim2 - claim1),
          low + reward * Sign(claim1 - claim2)};
}

std::array<double, 2> GrabTheDollarPayoffs(int time1, int time2, double low,
                                           double mid, double high,
                                           double decay) {
  if (time1 == time2) return {low * decay, low * decay};
  if (time1 < time2) return {high * decay, mid * decay};
  return {mid * decay, high * decay};
}

std::array<double, 2> WarOfAttritionPayoffs(int time1, int time2,
                                            std::array<double, 2> value,
                                            std::array<double, 2> cost) {
  if (time1 == time2) {
    return {value[0] / 2 - time1 * cost[0], value[1] / 2 - time1 * cost[1]};
  }
  if (time1 < time2) return {-time1 * cost[0], value[1] - time1 * cost[1]};
  return {value[0] - time2 * cost[0], -time2 * cost[1]};
}

std::vector<double> BertrandPayoffs(std::span<const int> prices, int num_prices,
                                    double unit_cost) {
  const int lowest = *std::min_element(prices.begin(), prices.end());
  const auto tied = std::count(prices.begin(), prices.end(), lowest);
  const double demand = num_prices - lowest + 1;
  const double share = (lowest * demand - unit_cost * demand) / tied;
  std::vector<double> out(prices.size(), 0.0);
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (prices[i] == lowest) out[i] = share;
  }
  return out;
}

int MajorityWinner(std::span<const int> votes, int num_candidates) {
  std::vector<int> tally(num_candidates, 0);
  for (int v : votes) ++tally[v];
  return static_cast<int>(std::max_element(tally.begin(), tally.end()) -
                          tally.begin());
}

Game GenTravelersDilemma(int num_actions, Stream& stream) {
  const int reward =
      static_cast<int>(stream.UniformInt(2, std::max(2, num_actions / 5)));
  return NormalizeToUnit(
      GameShape({num_actions, num_actions}),
      TwoPlayerRaw(num_actions, [&](int a1, int a2) {
        return TravelersDilemmaPayoffs(a1, a2, reward);
      }));
}

Game GenGrabTheDollar(int num_actions, Stream& stream, bool decay) {
  std::array<double, 3> draws = {stream.Uniform(), stream.Uniform(),
                                 stream.Uniform()};
  std::sort(draws.begin(), draws.end());
  return NormalizeToUnit(
      GameShape({num_actions, num_actions}),
      TwoPlayerRaw(num_actions, [&](int t1, int t2) {
        const double factor =
            decay ? 1.0 - static_cast<double>(std::min(t1, t2) - 1) /
                              num_actions
                  : 1.0;
        return GrabTheDollarPayoffs(t1, t2, draws[0], draws[1], draws[2],
                                    factor);
      }));
}

Game GenWarOfAttrition(int num_actions, Stream& stream) {
  std::array<double, 2> value;
  std::array<double, 2> cost;
  for (double& v : value) v = stream.Uniform(0.5, 1.0);
  for (double& c : cost) c = stream.Uniform(0.01, 0.1);
  return NormalizeToUnit(
      GameShape({num_actions, num_actions}),
      TwoPlayerRaw(num_actions, [&](int t1, int t2) {
        return WarOfAttritionPayoffs(t1, t2, value, cost);
      }));
}

Game GenBertrandOligopoly(int num_players, int num_actions, Stream& stream) {
  const double unit_cost = stream.Uniform(0.0, 0.5);
  GameShape shape(std::vector<int>(num_players, num_actions));
  const std::size_t joint = shape.num_joint_actions();
  std::vector<double> raw(shape.num_utilities());
  std::vector<int> actions(num_players, 0);
  std::vector<int> prices(num_players);
  for (std::size_t a = 0; a < joint; ++a, Increment(actions, shape)) {
    for (int i = 0; i < num_players; ++i) prices[i] = actions[i] + 1;
    const std::vector<double> p =
        BertrandPayoffs(prices, num_actions, unit_cost);
    for (int i = 0; i < num_players; ++i) raw[i * joint + a] = p[i];
  }
  return NormalizeToUnit(shape, std::move(raw));
}

Game GenMajorityVoting(int num_players, int num_actions, Stream& stream) {
  std::vector<std::vector<double>> worth(num_players,
                                         std::vector<double>(num_actions));
  for (auto& w : worth) {
    for (double& x : w) x = stream.Uniform();
  }
  GameShape shape(std::vector<int>(num_players, num_actions));
  const std::size_t joint = shape.num_joint_actions();
  std::vector<double> utilities(shape.num_utilities());
  std::vector<int> actions(num_players, 0);
  for (std::size_t a = 0; a < joint; ++a, Increment(actions, shape)) {
    const int winner = MajorityWinner(actions, num_actions);
    for (int i = 0; i < num_players; ++i) {
      utilities[i * joint + a] = worth[i][winner];
    }
  }
  return Game(shape, std::move(utilities));
}

}  // namespace nashapr
