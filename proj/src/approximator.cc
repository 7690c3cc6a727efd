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

#include "nashapr/approximator.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "nashapr/errors.h"
#include "nashapr/nash.h"

namespace nashapr {
namespace {

// Stream index reserved for parameter initialization.
constexpr std::uint64_t kInitStream = 0x1a17;
// Salt separating the minibatch permutation streams from the init stream.
constexpr std::uint64_t kShuffleSalt = 0x5eedba7c4e5ULL;

void CheckGames(const ApproximatorArch& arch, std::span<const Game> games) {
  if (games.empty()) throw ConfigError("empty batch");
  for (const Game& g : games) {
    if (!(g.shape() == arch.shape)) {
      throw DimensionError("game shape does not match the approximator");
    }
  }
}

Eigen::MatrixXd InputMatrix(const ApproximatorArch& arch,
                            std::span<const Game> games) {
  Eigen::MatrixXd x(arch.input_width(), static_cast<Eigen::Index>(games.size()));
  for (std::size_t b = 0; b < games.size(); ++b) {
    x.col(static_cast<Eigen::Index>(b)) = Eigen::Map<const Eigen::VectorXd>(
        games[b].flat().data(), arch.input_width());
  }
  return x;
}

// Column-wise softmax with the max logit subtracted first.
Eigen::MatrixXd Softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index b = 0; b < logits.cols(); ++b) {
    const double top = logits.col(b).maxCoeff();
    out.col(b) = (logits.col(b).array() - top).exp().matrix();
    out.col(b) /= out.col(b).sum();
  }
  return out;
}

void ClipInto(std::span<double> t, double lo, double hi) {
  for (double& x : t) x = std::clamp(x, lo, hi);
}

DenseLayer ZeroLayer(Eigen::Index out, Eigen::Index in) {
  return {Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)};
}

}  // namespace

void ApproximatorArch::Validate() const {
  if (hidden_layers.empty()) throw ConfigError("need at least one hidden layer");
  for (int w : hidden_layers) {
    if (w < 1) throw ConfigError("hidden widths must be >= 1");
  }
  if (!(clip_lower < clip_upper)) throw ConfigError("empty clip range");
  if (!(batchnorm_epsilon > 0.0)) throw ConfigError("batchnorm epsilon <= 0");
  if (!(bn_momentum >= 0.0 && bn_momentum <= 1.0)) {
    throw ConfigError("momentum outside [0, 1]");
  }
}

std::vector<std::span<double>> Weights::Tensors() {
  std::vector<std::span<double>> out;
  for (auto* group : {&hidden, &heads}) {
    for (DenseLayer& l : *group) {
      out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
      out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
  }
  return out;
}

std::vector<std::span<const double>> Weights::Tensors() const {
  std::vector<std::span<const double>> out;
  for (const auto* group : {&hidden, &heads}) {
    for (const DenseLayer& l : *group) {
      out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
      out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
    }
  }
  return out;
}

std::size_t Weights::NumScalars() const {
  std::size_t total = 0;
  for (const auto& t : Tensors()) total += t.size();
  return total;
}

Weights Weights::ZerosLike() const {
  Weights z;
  for (const DenseLayer& l : hidden) {
    z.hidden.push_back(ZeroLayer(l.weight.rows(), l.weight.cols()));
  }
  for (const DenseLayer& l : heads) {
    z.heads.push_back(ZeroLayer(l.weight.rows(), l.weight.cols()));
  }
  return z;
}

ApproximatorParams InitParams(const ApproximatorArch& arch,
                              std::uint64_t seed) {
  arch.Validate();
  ApproximatorParams p;
  int fan_in = arch.input_width();
  for (int width : arch.hidden_layers) {
    p.weights.hidden.push_back(ZeroLayer(width, fan_in));
    p.running_mean.push_back(Eigen::VectorXd::Zero(width));
    p.running_var.push_back(Eigen::VectorXd::Ones(width));
    fan_in = width;
  }
  for (int i = 0; i < arch.shape.num_players(); ++i) {
    p.weights.heads.push_back(ZeroLayer(arch.shape.num_actions(i), fan_in));
  }
  Stream stream(seed, kInitStream);
  auto tensors = p.weights.Tensors();
  // Tensors alternate weight, bias; a weight's fan-in is its column count.
  std::vector<double> fan_ins;
  for (auto* group : {&p.weights.hidden, &p.weights.heads}) {
    for (const DenseLayer& l : *group) {
      fan_ins.push_back(static_cast<double>(l.weight.cols()));
      fan_ins.push_back(static_cast<double>(l.weight.cols()));
    }
  }
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    const double scale = 1.0 / std::sqrt(fan_ins[k]);
    for (double& x : tensors[k]) {
      x = std::clamp(stream.Uniform(arch.clip_lower, arch.clip_upper) * scale,
                     arch.clip_lower, arch.clip_upper);
    }
  }
  return p;
}

StrategyProfile ForwardCache::Profile(std::size_t column) const {
  std::vector<std::vector<double>> s(strategies.size());
  const auto b = static_cast<Eigen::Index>(column);
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    s[i].resize(static_cast<std::size_t>(strategies[i].rows()));
    for (Eigen::Index a = 0; a < strategies[i].rows(); ++a) {
      s[i][a] = strategies[i](a, b);
    }
  }
  return StrategyProfile(std::move(s));
}

ForwardCache Forward(const ApproximatorArch& arch,
                     const ApproximatorParams& params,
                     std::span<const Game> games, Mode mode) {
  CheckGames(arch, games);
  if (mode == Mode::kTrain && games.size() < 2) {
    throw ConfigError("train-mode batch normalization needs >= 2 games");
  }
  ForwardCache c;
  c.mode = mode;
  c.generation = params.generation;
  c.input = InputMatrix(arch, games);
  const std::size_t layers = params.weights.hidden.size();
  for (std::size_t l = 0; l < layers; ++l) {
    const DenseLayer& layer = params.weights.hidden[l];
    const Eigen::MatrixXd& prev = l == 0 ? c.input : c.activation.back();
    const Eigen::MatrixXd z = (layer.weight * prev).colwise() + layer.bias;
    Eigen::VectorXd mean, var;
    if (mode == Mode::kTrain) {
      mean = z.rowwise().mean();
      var = (z.colwise() - mean).array().square().rowwise().mean();
    } else {
      mean = params.running_mean[l];
      var = params.running_var[l];
    }
    const Eigen::VectorXd inv_std =
        (var.array() + arch.batchnorm_epsilon).rsqrt().matrix();
    Eigen::MatrixXd xhat =
        ((z.colwise() - mean).array().colwise() * inv_std.array()).matrix();
    c.activation.push_back(xhat.cwiseMax(0.0));
    c.normalized.push_back(std::move(xhat));
    c.inv_std.push_back(inv_std);
    c.batch_mean.push_back(std::move(mean));
    c.batch_var.push_back(std::move(var));
  }
  for (const DenseLayer& head : params.weights.heads) {
    c.strategies.push_back(
        Softmax((head.weight * c.activation.back()).colwise() + head.bias));
  }
  return c;
}

std::vector<StrategyProfile> Predict(const ApproximatorArch& arch,
                                     const ApproximatorParams& params,
                                     std::span<const Game> games) {
  std::vector<StrategyProfile> out;
  out.reserve(games.size());
  // Eval mode is per-game, so chunking does not change the outputs.
  constexpr std::size_t kChunk = 512;
  for (std::size_t start = 0; start < games.size(); start += kChunk) {
    const auto chunk =
        games.subspan(start, std::min(kChunk, games.size() - start));
    const ForwardCache c = Forward(arch, params, chunk, Mode::kEval);
    for (std::size_t b = 0; b < chunk.size(); ++b) out.push_back(c.Profile(b));
  }
  return out;
}

double BatchLoss(const ForwardCache& cache, std::span<const Game> games) {
  if (games.empty()) throw ConfigError("empty batch");
  if (cache.batch_size() != games.size()) {
    throw DimensionError("cache and batch sizes differ");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < games.size(); ++b) {
    total += NashApr(cache.Profile(b), games[b]);
  }
  return total / static_cast<double>(games.size());
}

double BatchLoss(const ApproximatorArch& arch,
                 const ApproximatorParams& params, std::span<const Game> games,
                 Mode mode) {
  return BatchLoss(Forward(arch, params, games, mode), games);
}

Weights Backward(const ApproximatorArch& arch,
                 const ApproximatorParams& params, std::span<const Game> games,
                 const ForwardCache& cache) {
  CheckGames(arch, games);
  if (cache.mode != Mode::kTrain) {
    throw UsageError("backward needs a train-mode forward cache");
  }
  if (cache.generation != params.generation ||
      cache.batch_size() != games.size() ||
      cache.input != InputMatrix(arch, games)) {
    throw UsageError("stale forward cache");
  }
  const auto batch = static_cast<Eigen::Index>(games.size());
  const double inv_batch = 1.0 / static_cast<double>(batch);
  const int n = arch.shape.num_players();

  // d loss / d strategies, averaged over the batch.
  std::vector<Eigen::MatrixXd> d_strategy(n);
  for (int i = 0; i < n; ++i) {
    d_strategy[i].resize(cache.strategies[i].rows(), batch);
  }
  for (Eigen::Index b = 0; b < batch; ++b) {
    const SubgradientReport r =
        NashAprSubgradient(cache.Profile(static_cast<std::size_t>(b)), games[b]);
    for (int i = 0; i < n; ++i) {
      for (Eigen::Index a = 0; a < d_strategy[i].rows(); ++a) {
        d_strategy[i](a, b) = r.gradient[i][a] * inv_batch;
      }
    }
  }

  Weights grads;
  grads.heads.resize(n);
  grads.hidden.resize(params.weights.hidden.size());
  const Eigen::MatrixXd& top = cache.activation.back();
  Eigen::MatrixXd d_act = Eigen::MatrixXd::Zero(top.rows(), batch);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd& s = cache.strategies[i];
    // Softmax Jacobian: s * (g - <g, s>).
    const Eigen::RowVectorXd inner =
        (s.array() * d_strategy[i].array()).colwise().sum();
    const Eigen::MatrixXd d_logit =
        (s.array() * (d_strategy[i].rowwise() - inner).array()).matrix();
    grads.heads[i].weight = d_logit * top.transpose();
    grads.heads[i].bias = d_logit.rowwise().sum();
    d_act.noalias() += params.weights.heads[i].weight.transpose() * d_logit;
  }

  for (std::size_t l = params.weights.hidden.size(); l-- > 0;) {
    const Eigen::MatrixXd& xhat = cache.normalized[l];
    const Eigen::MatrixXd d_xhat =
        (d_act.array() * (xhat.array() > 0.0).cast<double>()).matrix();
    // Batch normalization with batch statistics:
    // dz = inv_std / B * (B dxhat - sum(dxhat) - xhat * sum(dxhat * xhat)).
    const Eigen::VectorXd sum1 = d_xhat.rowwise().sum();
    const Eigen::VectorXd sum2 =
        (d_xhat.array() * xhat.array()).rowwise().sum().matrix();
    Eigen::MatrixXd d_z =
        (static_cast<double>(batch) * d_xhat.array()).matrix().colwise() - sum1;
    d_z -= (xhat.array().colwise() * sum2.array()).matrix();
    d_z = (d_z.array().colwise() * (cache.inv_std[l].array() * inv_batch))
              .matrix();
    const Eigen::MatrixXd& prev = l == 0 ? cache.input : cache.activation[l - 1];
    grads.hidden[l].weight = d_z * prev.transpose();
    grads.hidden[l].bias = d_z.rowwise().sum();
    if (l > 0) d_act = params.weights.hidden[l].weight.transpose() * d_z;
  }
  return grads;
}

void UpdateRunningStats(const ApproximatorArch& arch,
                        ApproximatorParams& params, const ForwardCache& cache) {
  if (cache.mode != Mode::kTrain) {
    throw UsageError("running statistics need a train-mode cache");
  }
  const double m = arch.bn_momentum;
  for (std::size_t l = 0; l < params.running_mean.size(); ++l) {
    params.running_mean[l] = m * params.running_mean[l] + (1 - m) * cache.batch_mean[l];
    params.running_var[l] = m * params.running_var[l] + (1 - m) * cache.batch_var[l];
  }
}

AdamState InitAdam(const Weights& like, double learning_rate) {
  AdamState s;
  s.first_moment = like.ZerosLike();
  s.second_moment = like.ZerosLike();
  s.learning_rate = learning_rate;
  return s;
}

void AdamStep(const ApproximatorArch& arch, ApproximatorParams& params,
              const Weights& grads, AdamState& state) {
  const auto g = grads.Tensors();
  auto p = params.weights.Tensors();
  auto m = state.first_moment.Tensors();
  auto v = state.second_moment.Tensors();
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw DimensionError("gradient layout does not match parameters");
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k].size() != p[k].size()) {
      throw DimensionError("gradient tensor size mismatch");
    }
    for (double x : g[k]) {
      if (!std::isfinite(x)) {
        throw NumericError("non-finite gradient at Adam step " +
                           std::to_string(state.step + 1));
      }
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(state.beta1, t);
  const double correct2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (std::size_t e = 0; e < g[k].size(); ++e) {
      m[k][e] = state.beta1 * m[k][e] + (1 - state.beta1) * g[k][e];
      v[k][e] = state.beta2 * v[k][e] + (1 - state.beta2) * g[k][e] * g[k][e];
      const double m_hat = m[k][e] / correct1;
      const double v_hat = v[k][e] / correct2;
      p[k][e] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
    ClipInto(p[k], arch.clip_lower, arch.clip_upper);
  }
  ++params.generation;
}

TrainState InitTrainState(const ApproximatorArch& arch, const TrainConfig& cfg) {
  TrainState s;
  s.params = InitParams(arch, cfg.seed);
  s.adam = InitAdam(s.params.weights, cfg.learning_rate);
  return s;
}

std::vector<std::size_t> MinibatchIndices(std::uint64_t seed,
                                          std::size_t train_size,
                                          int batch_size, std::int64_t step) {
  const std::size_t b = static_cast<std::size_t>(batch_size);
  const std::size_t per_epoch = std::max<std::size_t>(1, train_size / b);
  const auto epoch = static_cast<std::uint64_t>(step) / per_epoch;
  const std::size_t pos = static_cast<std::uint64_t>(step) % per_epoch;
  Stream stream(seed ^ kShuffleSalt, epoch);
  const std::vector<std::size_t> perm = stream.Permutation(train_size);
  const std::size_t begin = pos * b;
  const std::size_t end = std::min(train_size, begin + b);
  return std::vector<std::size_t>(perm.begin() + begin, perm.begin() + end);
}

void ContinueTraining(const ApproximatorArch& arch,
                      std::span<const Game> train_games,
                      std::span<const Game> validation_games,
                      const TrainConfig& cfg, TrainState& state) {
  if (cfg.iterations < 0) throw ConfigError("iterations must be >= 0");
  if (cfg.batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (train_games.empty()) throw ConfigError("empty training split");
  CheckGames(arch, train_games);
  const std::size_t n_train = train_games.size();
  const std::size_t b = static_cast<std::size_t>(cfg.batch_size);
  const std::size_t per_epoch = std::max<std::size_t>(1, n_train / b);

  std::vector<std::size_t> perm;
  std::uint64_t perm_epoch = ~std::uint64_t{0};
  std::vector<Game> batch;
  for (auto step = static_cast<std::int64_t>(state.adam.step);
       step < cfg.iterations; ++step) {
    const std::uint64_t epoch = static_cast<std::uint64_t>(step) / per_epoch;
    if (epoch != perm_epoch) {
      perm = Stream(cfg.seed ^ kShuffleSalt, epoch).Permutation(n_train);
      perm_epoch = epoch;
    }
    const std::size_t begin = (static_cast<std::uint64_t>(step) % per_epoch) * b;
    const std::size_t end = std::min(n_train, begin + b);
    batch.clear();
    for (std::size_t k = begin; k < end; ++k) batch.push_back(train_games[perm[k]]);

    const ForwardCache cache = Forward(arch, state.params, batch, Mode::kTrain);
    TrainLogRow row;
    row.step = step;
    row.train_loss = BatchLoss(cache, batch);
    const Weights grads = Backward(arch, state.params, batch, cache);
    UpdateRunningStats(arch, state.params, cache);
    AdamStep(arch, state.params, grads, state.adam);
    if (cfg.validation_interval > 0 && !validation_games.empty() &&
        (step + 1) % cfg.validation_interval == 0) {
      row.val_loss = Evaluate(arch, state.params, validation_games).mean;
    }
    state.log.push_back(row);
  }
}

TrainState Train(const ApproximatorArch& arch,
                 std::span<const Game> train_games,
                 std::span<const Game> validation_games,
                 const TrainConfig& cfg) {
  TrainState state = InitTrainState(arch, cfg);
  ContinueTraining(arch, train_games, validation_games, cfg, state);
  return state;
}

LossSummary Evaluate(const ApproximatorArch& arch,
                     const ApproximatorParams& params,
                     std::span<const Game> games) {
  if (games.empty()) throw ConfigError("cannot evaluate an empty split");
  const std::vector<StrategyProfile> out = Predict(arch, params, games);
  std::vector<double> losses(games.size());
  for (std::size_t k = 0; k < games.size(); ++k) {
    losses[k] = NashApr(out[k], games[k]);
  }
  LossSummary s;
  for (double x : losses) s.mean += x;
  s.mean /= static_cast<double>(losses.size());
  for (double x : losses) s.std += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(losses.size()));
  return s;
}

double LipschitzEstimate(const ApproximatorArch& arch,
                         const ApproximatorParams& params, int probes,
                         Stream& stream) {
  if (probes < 1) throw ConfigError("probes must be >= 1");
  constexpr double kPerturbation = 1e-3;
  double best = 0.0;
  const std::size_t width = arch.shape.num_utilities();
  for (int p = 0; p < probes; ++p) {
    std::vector<double> u(width), v(width);
    for (std::size_t k = 0; k < width; ++k) {
      u[k] = stream.Uniform();
      v[k] = std::clamp(u[k] + stream.Uniform(-kPerturbation, kPerturbation),
                        0.0, 1.0);
    }
    const std::vector<Game> pair = {Game(arch.shape, u), Game(arch.shape, v)};
    const double dist = MaxDistance(pair[0], pair[1]);
    if (dist == 0.0) continue;
    const std::vector<StrategyProfile> out = Predict(arch, params, pair);
    best = std::max(best, L1Distance(out[0], out[1]) / dist);
  }
  return best;
}

void WriteTrainLogCsv(std::ostream& out, std::span<const TrainLogRow> log) {
  const auto precision = out.precision(17);
  out << kTrainLogCsvHeader << '\n';
  for (const TrainLogRow& r : log) {
    out << r.step << ',' << r.train_loss << ',';
    if (r.val_loss) out << *r.val_loss;
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace nashapr
