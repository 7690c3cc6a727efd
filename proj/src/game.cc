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

#include "nashapr/game.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nashapr/errors.h"

namespace nashapr {

GameShape::GameShape(std::vector<int> action_counts)
    : action_counts_(std::move(action_counts)) {
  if (action_counts_.size() < 2) {
    throw DimensionError("a game needs at least two players, got " +
                         std::to_string(action_counts_.size()));
  }
  strides_.assign(action_counts_.size(), 1);
  std::size_t total = 1;
  for (int i = num_players() - 1; i >= 0; --i) {
    if (action_counts_[i] < 1) {
      throw DimensionError("player " + std::to_string(i) +
                           " has no actions");
    }
    strides_[i] = total;
    if (total > std::numeric_limits<std::size_t>::max() /
                    static_cast<std::size_t>(action_counts_[i])) {
      throw SizeError("joint action count overflows");
    }
    total *= action_counts_[i];
  }
  num_joint_actions_ = total;
}

std::size_t GameShape::num_strategy_entries() const {
  return std::accumulate(action_counts_.begin(), action_counts_.end(),
                         std::size_t{0});
}

std::size_t GameShape::JointIndex(std::span<const int> actions) const {
  if (static_cast<int>(actions.size()) != num_players()) {
    throw DimensionError("joint action has wrong number of players");
  }
  std::size_t index = 0;
  for (int i = 0; i < num_players(); ++i) {
    if (actions[i] < 0 || actions[i] >= action_counts_[i]) {
      throw DimensionError("action out of range for player " +
                           std::to_string(i));
    }
    index += strides_[i] * actions[i];
  }
  return index;
}

std::vector<int> GameShape::JointActions(std::size_t joint_index) const {
  std::vector<int> actions(action_counts_.size());
  for (int i = 0; i < num_players(); ++i) {
    actions[i] = static_cast<int>(joint_index / strides_[i]);
    joint_index %= strides_[i];
  }
  return actions;
}

Game::Game(GameShape shape, std::vector<double> utilities)
    : shape_(std::move(shape)), utilities_(std::move(utilities)) {
  if (utilities_.size() != shape_.num_utilities()) {
    throw DimensionError("expected " + std::to_string(shape_.num_utilities()) +
                         " utilities, got " +
                         std::to_string(utilities_.size()));
  }
  for (std::size_t k = 0; k < utilities_.size(); ++k) {
    const double u = utilities_[k];
    if (!(u >= 0.0 && u <= 1.0)) {
      throw DataError("utility " + std::to_string(k) + " = " +
                      std::to_string(u) + " is outside [0, 1]");
    }
  }
}

StrategyProfile StrategyProfile::Uniform(const GameShape& shape) {
  std::vector<std::vector<double>> s(shape.num_players());
  for (int i = 0; i < shape.num_players(); ++i) {
    s[i].assign(shape.num_actions(i), 1.0 / shape.num_actions(i));
  }
  return StrategyProfile(std::move(s));
}

StrategyProfile StrategyProfile::Pure(const GameShape& shape,
                                      std::span<const int> actions) {
  if (static_cast<int>(actions.size()) != shape.num_players()) {
    throw DimensionError("pure profile has wrong number of players");
  }
  std::vector<std::vector<double>> s(shape.num_players());
  for (int i = 0; i < shape.num_players(); ++i) {
    if (actions[i] < 0 || actions[i] >= shape.num_actions(i)) {
      throw DimensionError("pure action out of range");
    }
    s[i].assign(shape.num_actions(i), 0.0);
    s[i][actions[i]] = 1.0;
  }
  return StrategyProfile(std::move(s));
}

StrategyProfile StrategyProfile::FromFlat(const GameShape& shape,
                                          std::span<const double> flat) {
  if (flat.size() != shape.num_strategy_entries()) {
    throw DimensionError("flat profile has wrong length");
  }
  std::vector<std::vector<double>> s(shape.num_players());
  std::size_t offset = 0;
  for (int i = 0; i < shape.num_players(); ++i) {
    s[i].assign(flat.begin() + offset,
                flat.begin() + offset + shape.num_actions(i));
    offset += shape.num_actions(i);
  }
  return StrategyProfile(std::move(s));
}

bool StrategyProfile::Matches(const GameShape& shape) const {
  if (num_players() != shape.num_players()) return false;
  for (int i = 0; i < num_players(); ++i) {
    if (num_actions(i) != shape.num_actions(i)) return false;
  }
  return true;
}

bool StrategyProfile::IsValid(double tolerance) const {
  for (const auto& s : strategies_) {
    double sum = 0.0;
    for (double p : s) {
      if (!(p >= 0.0)) return false;
      sum += p;
    }
    if (std::abs(sum - 1.0) > tolerance) return false;
  }
  return true;
}

StrategyProfile StrategyProfile::Normalized() const {
  StrategyProfile out = *this;
  for (auto& s : out.strategies_) {
    double sum = 0.0;
    for (double& p : s) {
      if (!(p > 0.0)) p = 0.0;
      sum += p;
    }
    if (sum > 0.0) {
      for (double& p : s) p /= sum;
    } else {
      for (double& p : s) p = 1.0 / static_cast<double>(s.size());
    }
  }
  return out;
}

std::vector<double> StrategyProfile::Flatten() const {
  std::vector<double> flat;
  for (const auto& s : strategies_) flat.insert(flat.end(), s.begin(), s.end());
  return flat;
}

void CheckProfileShape(const StrategyProfile& profile, const GameShape& shape) {
  if (!profile.Matches(shape)) {
    throw DimensionError("strategy profile does not match game shape");
  }
}

}  // namespace nashapr
