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

// Feed-forward network mapping a game's utilities to a strategy profile,
// trained without equilibrium labels by minimizing the Nash approximation
// loss of its own outputs.
//
// Architecture: the n * |A| utilities (canonical order) feed a stack of
// hidden layers, each affine -> batch normalization without learnable
// scale/shift -> ReLU. One affine head per player produces |A_i| logits and
// a softmax turns them into that player's mixed strategy.
//
// Activations are stored column-per-game: a batch of B games is a
// (features x B) matrix.

#ifndef NASHAPR_APPROXIMATOR_H_
#define NASHAPR_APPROXIMATOR_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nashapr/game.h"
#include "nashapr/random.h"

namespace nashapr {

struct ApproximatorArch {
  GameShape shape;
  std::vector<int> hidden_layers = {128, 128};
  double batchnorm_epsilon = 1e-5;
  // running = momentum * running + (1 - momentum) * batch.
  double bn_momentum = 0.99;
  // Every weight and bias is clipped into [clip_lower, clip_upper].
  double clip_lower = 0.0;
  double clip_upper = 1.0;

  int input_width() const { return static_cast<int>(shape.num_utilities()); }
  // Throws ConfigError on empty widths or an empty clip range.
  void Validate() const;
  bool operator==(const ApproximatorArch&) const = default;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

// The trainable tensors. Also used for gradients and Adam moments.
struct Weights {
  std::vector<DenseLayer> hidden;
  std::vector<DenseLayer> heads;  // one per player

  // Views of every tensor in declaration order: for each hidden layer its
  // weight then bias, then the same for each head. Matrices are exposed in
  // Eigen's column-major storage order.
  std::vector<std::span<double>> Tensors();
  std::vector<std::span<const double>> Tensors() const;
  std::size_t NumScalars() const;
  // Same layout, every entry zero.
  Weights ZerosLike() const;
};

struct ApproximatorParams {
  Weights weights;
  // Per hidden layer batch-normalization statistics used in eval mode.
  std::vector<Eigen::VectorXd> running_mean;
  std::vector<Eigen::VectorXd> running_var;
  // Bumped by every parameter update; lets Backward() reject caches from an
  // earlier forward pass.
  std::uint64_t generation = 0;
};

// Weights drawn uniformly from the clip range, scaled by 1/sqrt(fan_in) and
// clipped back into range. Running means start at 0, variances at 1.
ApproximatorParams InitParams(const ApproximatorArch& arch, std::uint64_t seed);

enum class Mode { kTrain, kEval };

struct ForwardCache {
  Mode mode = Mode::kEval;
  std::uint64_t generation = 0;
  Eigen::MatrixXd input;  // n|A| x B
  // Per hidden layer.
  std::vector<Eigen::MatrixXd> normalized;  // batch-normalized pre-activations
  std::vector<Eigen::MatrixXd> activation;  // after ReLU
  std::vector<Eigen::VectorXd> inv_std;
  std::vector<Eigen::VectorXd> batch_mean;
  std::vector<Eigen::VectorXd> batch_var;
  // Per player: |A_i| x B softmax outputs.
  std::vector<Eigen::MatrixXd> strategies;

  std::size_t batch_size() const {
    return static_cast<std::size_t>(input.cols());
  }
  StrategyProfile Profile(std::size_t column) const;
};

// Train mode normalizes with the batch's own statistics and needs at least
// two games; eval mode uses the running statistics, so each output depends
// only on its own game.
ForwardCache Forward(const ApproximatorArch& arch,
                     const ApproximatorParams& params,
                     std::span<const Game> games, Mode mode);

std::vector<StrategyProfile> Predict(const ApproximatorArch& arch,
                                     const ApproximatorParams& params,
                                     std::span<const Game> games);

// Mean loss of the outputs in `cache`.
double BatchLoss(const ForwardCache& cache, std::span<const Game> games);
double BatchLoss(const ApproximatorArch& arch,
                 const ApproximatorParams& params, std::span<const Game> games,
                 Mode mode = Mode::kEval);

// Reverse-mode gradient of the train-mode batch loss with respect to every
// weight and bias, including the batch-statistics terms of batch
// normalization. `cache` must come from a train-mode Forward() on the same
// games and the current params (UsageError otherwise).
Weights Backward(const ApproximatorArch& arch,
                 const ApproximatorParams& params, std::span<const Game> games,
                 const ForwardCache& cache);

// Moves the running statistics toward the batch statistics in `cache`.
void UpdateRunningStats(const ApproximatorArch& arch,
                        ApproximatorParams& params, const ForwardCache& cache);

struct AdamState {
  Weights first_moment;
  Weights second_moment;
  std::uint64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double learning_rate = 1e-3;
};

AdamState InitAdam(const Weights& like, double learning_rate);

// Bias-corrected Adam update followed by clipping every parameter into the
// arch's clip range. Throws NumericError on a non-finite gradient before
// touching any state.
void AdamStep(const ApproximatorArch& arch, ApproximatorParams& params,
              const Weights& grads, AdamState& state);

struct TrainConfig {
  std::int64_t iterations = 20000;
  int batch_size = 64;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  // Validation loss is logged every this many steps (0 disables).
  std::int64_t validation_interval = 500;
};

struct TrainLogRow {
  std::int64_t step = 0;
  double train_loss = 0.0;
  std::optional<double> val_loss;
};

struct TrainState {
  ApproximatorParams params;
  AdamState adam;
  std::vector<TrainLogRow> log;
};

// Fresh parameters and optimizer state for `cfg`.
TrainState InitTrainState(const ApproximatorArch& arch, const TrainConfig& cfg);

// Game indices of the minibatch used at `step`: each epoch is a fresh
// permutation of the training set drawn from (seed, epoch), cut into
// floor(train_size / batch_size) batches.
std::vector<std::size_t> MinibatchIndices(std::uint64_t seed,
                                          std::size_t train_size,
                                          int batch_size, std::int64_t step);

// Runs steps state.adam.step .. cfg.iterations - 1, so a state restored from
// a checkpoint continues the identical trajectory.
void ContinueTraining(const ApproximatorArch& arch,
                      std::span<const Game> train_games,
                      std::span<const Game> validation_games,
                      const TrainConfig& cfg, TrainState& state);

TrainState Train(const ApproximatorArch& arch,
                 std::span<const Game> train_games,
                 std::span<const Game> validation_games,
                 const TrainConfig& cfg);

struct LossSummary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

// Eval-mode loss statistics over `games`. Throws ConfigError when empty.
LossSummary Evaluate(const ApproximatorArch& arch,
                     const ApproximatorParams& params,
                     std::span<const Game> games);

// Empirical lower bound on the network's Lipschitz constant from utilities
// (max norm) to profiles (l1 norm): the running max of
// |h(u) - h(v)|_1 / |u - v|_max over `probes` random games u with small
// random perturbations v.
double LipschitzEstimate(const ApproximatorArch& arch,
                         const ApproximatorParams& params, int probes,
                         Stream& stream);

inline constexpr std::string_view kTrainLogCsvHeader =
    "step,train_loss,val_loss";
void WriteTrainLogCsv(std::ostream& out, std::span<const TrainLogRow> log);

}  // namespace nashapr

#endif  // NASHAPR_APPROXIMATOR_H_
