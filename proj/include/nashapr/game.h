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

// Normal-form games with per-player utility tensors and mixed strategy
// profiles.
//
// Joint actions are linearized row-major over (a_1, ..., a_n) with the last
// player's action varying fastest. A game stores its utilities player-major:
// all of player 0's |A| entries, then player 1's, and so on. Persisted
// datasets and models rely on this order.

#ifndef NASHAPR_GAME_H_
#define NASHAPR_GAME_H_

#include <cstddef>
#include <span>
#include <vector>

namespace nashapr {

// Sum-to-one tolerance for mixed strategies.
inline constexpr double kProbabilityTolerance = 1e-9;

class GameShape {
 public:
  GameShape() = default;
  // Requires at least two players and at least one action per player.
  explicit GameShape(std::vector<int> action_counts);

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int num_actions(int player) const { return action_counts_[player]; }
  const std::vector<int>& action_counts() const { return action_counts_; }

  // |A| = prod_i |A_i|.
  std::size_t num_joint_actions() const { return num_joint_actions_; }
  // Distance in the joint index between consecutive actions of `player`.
  std::size_t stride(int player) const { return strides_[player]; }
  // n * |A|, the number of scalars in a game of this shape.
  std::size_t num_utilities() const {
    return num_joint_actions_ * action_counts_.size();
  }
  // sum_i |A_i|, the length of a flattened strategy profile.
  std::size_t num_strategy_entries() const;

  std::size_t JointIndex(std::span<const int> actions) const;
  std::vector<int> JointActions(std::size_t joint_index) const;

  bool operator==(const GameShape& other) const {
    return action_counts_ == other.action_counts_;
  }

 private:
  std::vector<int> action_counts_;
  std::vector<std::size_t> strides_;
  std::size_t num_joint_actions_ = 0;
};

class Game {
 public:
  Game() = default;
  // `utilities` is player-major, n * |A| entries, each in [0, 1].
  Game(GameShape shape, std::vector<double> utilities);

  const GameShape& shape() const { return shape_; }
  int num_players() const { return shape_.num_players(); }

  double utility(int player, std::size_t joint_index) const {
    return utilities_[player * shape_.num_joint_actions() + joint_index];
  }
  std::span<const double> utilities(int player) const {
    return std::span<const double>(utilities_).subspan(
        player * shape_.num_joint_actions(), shape_.num_joint_actions());
  }
  // All n * |A| utilities in the canonical order.
  std::span<const double> flat() const { return utilities_; }

  bool operator==(const Game& other) const = default;

 private:
  GameShape shape_;
  std::vector<double> utilities_;
};

// One probability vector per player. Construction does not enforce the
// simplex constraints so that iterative solvers and finite-difference probes
// can carry slightly perturbed coordinates; use IsValid() / Normalized().
class StrategyProfile {
 public:
  StrategyProfile() = default;
  explicit StrategyProfile(std::vector<std::vector<double>> strategies)
      : strategies_(std::move(strategies)) {}

  static StrategyProfile Uniform(const GameShape& shape);
  static StrategyProfile Pure(const GameShape& shape,
                              std::span<const int> actions);
  // Inverse of Flatten().
  static StrategyProfile FromFlat(const GameShape& shape,
                                  std::span<const double> flat);

  int num_players() const { return static_cast<int>(strategies_.size()); }
  int num_actions(int player) const {
    return static_cast<int>(strategies_[player].size());
  }
  std::span<const double> strategy(int player) const {
    return strategies_[player];
  }
  std::vector<double>& mutable_strategy(int player) {
    return strategies_[player];
  }
  double operator()(int player, int action) const {
    return strategies_[player][action];
  }

  bool Matches(const GameShape& shape) const;
  // Non-negative entries and per-player sums within `tolerance` of one.
  bool IsValid(double tolerance = kProbabilityTolerance) const;
  // Clamp negatives to zero and rescale each vector to sum to one. A vector
  // with no positive mass becomes uniform.
  StrategyProfile Normalized() const;
  std::vector<double> Flatten() const;

  bool operator==(const StrategyProfile& other) const = default;

 private:
  std::vector<std::vector<double>> strategies_;
};

// Throws DimensionError when `profile` does not fit `shape`.
void CheckProfileShape(const StrategyProfile& profile, const GameShape& shape);

}  // namespace nashapr

#endif  // NASHAPR_GAME_H_
