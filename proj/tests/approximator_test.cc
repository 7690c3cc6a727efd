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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nashapr/errors.h"
#include "nashapr/nash.h"
#include "test_util.h"

namespace nashapr {
namespace {

using testing::RandomGame;

ApproximatorArch TinyArch() {
  ApproximatorArch arch;
  arch.shape = GameShape({2, 2});
  arch.hidden_layers = {3};
  return arch;
}

std::vector<Game> RandomGames(const GameShape& shape, int count,
                              std::uint64_t seed) {
  std::vector<Game> games;
  for (int k = 0; k < count; ++k) {
    Stream s(seed, k);
    games.push_back(RandomGame(shape, s));
  }
  return games;
}

// Every parameter drawn from U[0, 1], away from any initialization scaling.
ApproximatorParams RandomParams(const ApproximatorArch& arch,
                                std::uint64_t seed) {
  ApproximatorParams p = InitParams(arch, seed);
  Stream s(seed, 99);
  for (auto t : p.weights.Tensors()) {
    for (double& x : t) x = s.Uniform();
  }
  return p;
}

TEST_CASE("tiny architecture stays under 50 parameters") {
  const ApproximatorParams p = InitParams(TinyArch(), 0);
  CHECK(p.weights.NumScalars() == 43);
}

TEST_CASE("outputs are valid profiles") {
  ApproximatorArch arch;
  arch.shape = GameShape({3, 2, 4});
  arch.hidden_layers = {16, 8};
  const auto games = RandomGames(arch.shape, 10, 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ApproximatorParams p = RandomParams(arch, seed);
    for (Mode mode : {Mode::kTrain, Mode::kEval}) {
      const ForwardCache c = Forward(arch, p, games, mode);
      for (std::size_t b = 0; b < games.size(); ++b) {
        CHECK(c.Profile(b).IsValid());
        CHECK(c.Profile(b).Matches(arch.shape));
      }
      const double loss = BatchLoss(c, games);
      CHECK(loss >= 0.0);
      CHECK(loss <= 1.0);
    }
  }
}

TEST_CASE("zero heads give uniform strategies") {
  ApproximatorArch arch;
  arch.shape = GameShape({3, 5});
  arch.hidden_layers = {4};
  ApproximatorParams p = InitParams(arch, 1);
  for (DenseLayer& h : p.weights.heads) {
    h.weight.setZero();
    h.bias.setZero();
  }
  const auto games = RandomGames(arch.shape, 3, 2);
  const auto out = Predict(arch, p, games);
  for (const auto& s : out) {
    CHECK(L1Distance(s, StrategyProfile::Uniform(arch.shape)) < 1e-15);
  }
}

TEST_CASE("eval mode is batch invariant") {
  ApproximatorArch arch;
  arch.shape = GameShape({4, 4});
  arch.hidden_layers = {32, 32};
  ApproximatorParams p = RandomParams(arch, 5);
  // Running statistics away from their initial values.
  const auto warm = RandomGames(arch.shape, 16, 8);
  UpdateRunningStats(arch, p, Forward(arch, p, warm, Mode::kTrain));
  const auto games = RandomGames(arch.shape, 40, 9);
  const auto together = Predict(arch, p, games);
  for (std::size_t k = 0; k < games.size(); ++k) {
    const auto alone = Predict(arch, p, std::span<const Game>(&games[k], 1));
    CHECK(L1Distance(alone[0], together[k]) < 1e-12);
  }
  const double single = BatchLoss(arch, p, std::span<const Game>(&games[0], 1));
  CHECK(single == NashApr(together[0], games[0]));
}

TEST_CASE("forward argument errors") {
  const ApproximatorArch arch = TinyArch();
  const ApproximatorParams p = InitParams(arch, 0);
  const auto games = RandomGames(arch.shape, 2, 1);
  CHECK_THROWS_AS(Forward(arch, p, std::span<const Game>(&games[0], 1),
                          Mode::kTrain),
                  ConfigError);
  const auto wrong = RandomGames(GameShape({2, 3}), 2, 1);
  CHECK_THROWS_AS(Forward(arch, p, wrong, Mode::kEval), DimensionError);
  CHECK_THROWS_AS(BatchLoss(arch, p, std::span<const Game>()), ConfigError);
}

// Central differences of the train-mode batch loss over every parameter.
Weights NumericGradient(const ApproximatorArch& arch, ApproximatorParams p,
                        const std::vector<Game>& games, double h) {
  Weights fd = p.weights.ZerosLike();
  auto params = p.weights.Tensors();
  auto out = fd.Tensors();
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t e = 0; e < params[t].size(); ++e) {
      const double saved = params[t][e];
      params[t][e] = saved + h;
      const double plus = BatchLoss(arch, p, games, Mode::kTrain);
      params[t][e] = saved - h;
      const double minus = BatchLoss(arch, p, games, Mode::kTrain);
      params[t][e] = saved;
      out[t][e] = (plus - minus) / (2 * h);
    }
  }
  return fd;
}

bool AnyTie(const ForwardCache& c, const std::vector<Game>& games) {
  for (std::size_t b = 0; b < games.size(); ++b) {
    if (NashAprSubgradient(c.Profile(b), games[b]).tie_flag) return true;
  }
  return false;
}

TEST_CASE("backward matches finite differences on a tiny network") {
  const ApproximatorArch arch = TinyArch();
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const ApproximatorParams p = RandomParams(arch, seed);
    const auto games = RandomGames(arch.shape, 5, 100 + seed);
    const ForwardCache c = Forward(arch, p, games, Mode::kTrain);
    if (AnyTie(c, games)) continue;
    const Weights analytic = Backward(arch, p, games, c);
    const Weights numeric = NumericGradient(arch, p, games, 1e-6);
    const auto a = analytic.Tensors();
    const auto n = numeric.Tensors();
    REQUIRE(a.size() == n.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
      for (std::size_t e = 0; e < a[t].size(); ++e) {
        const double scale = std::max(std::abs(a[t][e]), std::abs(n[t][e]));
        INFO("seed " << seed << " tensor " << t << " entry " << e);
        // The absolute floor covers exact zeros such as pre-normalization
        // biases, whose finite differences are pure rounding noise.
        CHECK(std::abs(a[t][e] - n[t][e]) <= 1e-3 * scale + 1e-8);
      }
    }
    ++checked;
  }
  CHECK(checked >= 6);
}

TEST_CASE("gradient vanishes where the loss is identically zero") {
  // Payoffs independent of one's own action: every profile is an
  // equilibrium.
  const ApproximatorArch arch = TinyArch();
  std::vector<Game> games;
  for (int k = 0; k < 4; ++k) {
    Stream s(7, k);
    const double a = s.Uniform(), b = s.Uniform(), c = s.Uniform(),
                 d = s.Uniform();
    // u_1 depends only on the column, u_2 only on the row.
    games.emplace_back(arch.shape, std::vector<double>{a, b, a, b, c, c, d, d});
  }
  const ApproximatorParams p = RandomParams(arch, 3);
  const ForwardCache cache = Forward(arch, p, games, Mode::kTrain);
  // Zero up to rounding in the deviation differences.
  CHECK(BatchLoss(cache, games) < 1e-15);
  const Weights g = Backward(arch, p, games, cache);
  const Weights fd = NumericGradient(arch, p, games, 1e-6);
  for (const auto& t : g.Tensors()) {
    for (double x : t) CHECK(std::abs(x) < 1e-15);
  }
  for (const auto& t : fd.Tensors()) {
    for (double x : t) CHECK(std::abs(x) < 1e-9);
  }
}

TEST_CASE("duplicating every game leaves the gradient unchanged") {
  ApproximatorArch arch;
  arch.shape = GameShape({3, 3});
  arch.hidden_layers = {6, 5};
  const ApproximatorParams p = RandomParams(arch, 11);
  const auto games = RandomGames(arch.shape, 6, 12);
  std::vector<Game> doubled = games;
  doubled.insert(doubled.end(), games.begin(), games.end());
  const Weights g1 = Backward(arch, p, games, Forward(arch, p, games, Mode::kTrain));
  const Weights g2 =
      Backward(arch, p, doubled, Forward(arch, p, doubled, Mode::kTrain));
  const auto a = g1.Tensors();
  const auto b = g2.Tensors();
  for (std::size_t t = 0; t < a.size(); ++t) {
    for (std::size_t e = 0; e < a[t].size(); ++e) {
      CHECK(std::abs(a[t][e] - b[t][e]) <= 1e-12 + 1e-9 * std::abs(a[t][e]));
    }
  }
}

TEST_CASE("stale caches are rejected") {
  const ApproximatorArch arch = TinyArch();
  ApproximatorParams p = RandomParams(arch, 2);
  const auto games = RandomGames(arch.shape, 4, 3);
  const auto other = RandomGames(arch.shape, 4, 4);
  const ForwardCache eval = Forward(arch, p, games, Mode::kEval);
  CHECK_THROWS_AS(Backward(arch, p, games, eval), UsageError);
  const ForwardCache train = Forward(arch, p, games, Mode::kTrain);
  CHECK_THROWS_AS(Backward(arch, p, other, train), UsageError);
  AdamState adam = InitAdam(p.weights, 1e-3);
  AdamStep(arch, p, Backward(arch, p, games, train), adam);
  CHECK_THROWS_AS(Backward(arch, p, games, train), UsageError);
}

TEST_CASE("adam step") {
  const ApproximatorArch arch = TinyArch();
  SUBCASE("zero gradient changes nothing inside the range") {
    ApproximatorParams p = InitParams(arch, 0);
    const Weights before = p.weights;
    AdamState s = InitAdam(p.weights, 1e-2);
    AdamStep(arch, p, p.weights.ZerosLike(), s);
    CHECK(s.step == 1);
    const auto a = before.Tensors();
    const auto b = p.weights.Tensors();
    for (std::size_t t = 0; t < a.size(); ++t) {
      for (std::size_t e = 0; e < a[t].size(); ++e) CHECK(a[t][e] == b[t][e]);
    }
  }
  SUBCASE("first step is -lr * g / (|g| + eps)") {
    ApproximatorParams p = RandomParams(arch, 1);
    for (auto t : p.weights.Tensors()) {
      for (double& x : t) x = 0.5;
    }
    Weights g = p.weights.ZerosLike();
    Stream s(2, 2);
    for (auto t : g.Tensors()) {
      for (double& x : t) x = s.Uniform(-1, 1);
    }
    AdamState st = InitAdam(p.weights, 1e-2);
    AdamStep(arch, p, g, st);
    const auto gt = g.Tensors();
    const auto pt = p.weights.Tensors();
    for (std::size_t t = 0; t < gt.size(); ++t) {
      for (std::size_t e = 0; e < gt[t].size(); ++e) {
        const double expected =
            0.5 - 1e-2 * gt[t][e] / (std::abs(gt[t][e]) + 1e-8);
        CHECK(pt[t][e] == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
  SUBCASE("parameters are clipped into range") {
    ApproximatorParams p = InitParams(arch, 3);
    for (auto t : p.weights.Tensors()) {
      for (double& x : t) x = 1.0;
    }
    Weights g = p.weights.ZerosLike();
    for (auto t : g.Tensors()) {
      for (double& x : t) x = -5.0;  // pushes upward
    }
    AdamState st = InitAdam(p.weights, 0.5);
    for (int k = 0; k < 3; ++k) AdamStep(arch, p, g, st);
    for (const auto& t : p.weights.Tensors()) {
      for (double x : t) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
      }
    }
  }
  SUBCASE("non-finite gradients abort without side effects") {
    ApproximatorParams p = InitParams(arch, 4);
    const Weights before = p.weights;
    Weights g = p.weights.ZerosLike();
    g.heads[0].bias[1] = NAN;
    AdamState st = InitAdam(p.weights, 1e-3);
    CHECK_THROWS_AS(AdamStep(arch, p, g, st), NumericError);
    CHECK(st.step == 0);
    CHECK(p.weights.hidden[0].weight == before.hidden[0].weight);
  }
}

TEST_CASE("training") {
  ApproximatorArch arch;
  arch.shape = GameShape({3, 3});
  arch.hidden_layers = {16, 16};
  const auto train = RandomGames(arch.shape, 64, 21);
  const auto val = RandomGames(arch.shape, 16, 22);
  TrainConfig cfg;
  cfg.batch_size = 16;
  cfg.seed = 5;
  cfg.validation_interval = 10;

  SUBCASE("zero iterations returns the initialization") {
    cfg.iterations = 0;
    const TrainState s = Train(arch, train, val, cfg);
    CHECK(s.log.empty());
    CHECK(s.params.weights.hidden[0].weight ==
          InitParams(arch, cfg.seed).weights.hidden[0].weight);
  }
  SUBCASE("deterministic and clipped") {
    cfg.iterations = 40;
    const TrainState a = Train(arch, train, val, cfg);
    const TrainState b = Train(arch, train, val, cfg);
    REQUIRE(a.log.size() == 40);
    for (std::size_t k = 0; k < a.log.size(); ++k) {
      CHECK(a.log[k].train_loss == b.log[k].train_loss);
      CHECK(a.log[k].val_loss.has_value() == ((k + 1) % 10 == 0));
    }
    const auto ta = a.params.weights.Tensors();
    const auto tb = b.params.weights.Tensors();
    for (std::size_t t = 0; t < ta.size(); ++t) {
      for (std::size_t e = 0; e < ta[t].size(); ++e) {
        CHECK(ta[t][e] == tb[t][e]);
        CHECK(ta[t][e] >= 0.0);
        CHECK(ta[t][e] <= 1.0);
      }
    }
    for (const auto& v : a.params.running_var) CHECK(v.minCoeff() >= 0.0);
  }
  SUBCASE("split runs continue the same trajectory") {
    cfg.iterations = 30;
    const TrainState full = Train(arch, train, val, cfg);
    TrainConfig first = cfg;
    first.iterations = 13;
    TrainState part = Train(arch, train, val, first);
    ContinueTraining(arch, train, val, cfg, part);
    CHECK(part.params.weights.heads[1].weight == full.params.weights.heads[1].weight);
    CHECK(part.params.running_mean[1] == full.params.running_mean[1]);
    CHECK(part.log.back().train_loss == full.log.back().train_loss);
  }
  SUBCASE("empty training split") {
    CHECK_THROWS_AS(Train(arch, std::span<const Game>(), val, cfg), ConfigError);
  }
}

TEST_CASE("minibatches cover each epoch exactly once") {
  const std::size_t n = 10;
  std::vector<int> seen(n, 0);
  // floor(10 / 3) = 3 batches per epoch; the last game of each epoch is
  // skipped.
  for (int step = 0; step < 3; ++step) {
    const auto idx = MinibatchIndices(1, n, 3, step);
    CHECK(idx.size() == 3);
    for (auto k : idx) ++seen[k];
  }
  int total = 0;
  for (int c : seen) {
    CHECK(c <= 1);
    total += c;
  }
  CHECK(total == 9);
  CHECK(MinibatchIndices(1, n, 3, 3) != MinibatchIndices(1, n, 3, 0));
  CHECK(MinibatchIndices(1, n, 3, 4) == MinibatchIndices(1, n, 3, 4));
}

TEST_CASE("evaluate") {
  ApproximatorArch arch;
  arch.shape = GameShape({2, 3});
  arch.hidden_layers = {4};
  const ApproximatorParams p = RandomParams(arch, 8);
  const auto games = RandomGames(arch.shape, 1, 3);
  const std::vector<Game> same(5, games[0]);
  const LossSummary s = Evaluate(arch, p, same);
  CHECK(s.std == 0.0);
  CHECK(s.mean >= 0.0);
  CHECK(s.mean <= 1.0);
  CHECK_THROWS_AS(Evaluate(arch, p, std::span<const Game>()), ConfigError);
}

TEST_CASE("lipschitz estimate") {
  ApproximatorArch arch;
  arch.shape = GameShape({3, 3});
  arch.hidden_layers = {8};
  ApproximatorParams flat = InitParams(arch, 1);
  for (DenseLayer& h : flat.weights.heads) {
    h.weight.setZero();
    h.bias.setZero();
  }
  Stream s0(1, 1);
  CHECK(LipschitzEstimate(arch, flat, 20, s0) == 0.0);

  const ApproximatorParams p = RandomParams(arch, 2);
  double previous = 0.0;
  for (int probes : {1, 5, 25, 100}) {
    Stream s(3, 3);
    const double est = LipschitzEstimate(arch, p, probes, s);
    CHECK(std::isfinite(est));
    CHECK(est >= previous);
    previous = est;
  }
  CHECK(previous > 0.0);
}

TEST_CASE("training log CSV") {
  std::vector<TrainLogRow> log = {{0, 0.5, std::nullopt}, {1, 0.25, 0.125}};
  std::ostringstream out;
  WriteTrainLogCsv(out, log);
  CHECK(out.str() == "step,train_loss,val_loss\n0,0.5,\n1,0.25,0.125\n");
}

}  // namespace
}  // namespace nashapr
