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

#include "nashapr/selfcheck.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nashapr/approximator.h"
#include "nashapr/nash.h"
#include "nashapr/random.h"
#include "nashapr/solvers.h"

namespace nashapr {
namespace {

using Clock = std::chrono::steady_clock;

LossFunction LossOf(const SelfcheckOptions& opt) {
  if (opt.loss) return opt.loss;
  return [](const StrategyProfile& s, const Game& g) { return NashApr(s, g); };
}

Game UniformGame(const GameShape& shape, Stream& s) {
  std::vector<double> u(shape.num_utilities());
  for (double& x : u) x = s.Uniform();
  return Game(shape, std::move(u));
}

StrategyProfile InteriorProfile(const GameShape& shape, Stream& s,
                                double floor) {
  std::vector<std::vector<double>> p(shape.num_players());
  for (int i = 0; i < shape.num_players(); ++i) {
    const int k = shape.num_actions(i);
    double total = 0.0;
    for (int a = 0; a < k; ++a) {
      p[i].push_back(s.Exponential());
      total += p[i].back();
    }
    for (double& x : p[i]) x = floor + (1.0 - k * floor) * x / total;
  }
  return StrategyProfile(std::move(p));
}

// n in {2, 3}, each |A_i| in [1, 8].
GameShape SmallShape(Stream& s) {
  std::vector<int> counts(static_cast<std::size_t>(s.UniformInt(2, 3)));
  for (int& k : counts) k = static_cast<int>(s.UniformInt(1, 8));
  return GameShape(counts);
}

void Finish(SuiteResult& r, Clock::time_point start) {
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

Game TwoEquilibriumGame() {
  return Game(GameShape({2, 2}), {0.0, 1.0, 0.5, 0.0, 0.0, 0.5, 1.0, 0.0});
}

Game PerturbedGame(double eps, bool plus_variant) {
  const double r_u = plus_variant ? 0.5 + eps : 0.5 - eps;
  return Game(GameShape({2, 2}), {0.5, 1.0, r_u, 0.0, 0.5, 0.0, 1.0, 0.0});
}

SuiteResult CheckLipschitzProfile(const SelfcheckOptions& opt) {
  const auto start = Clock::now();
  const LossFunction loss = LossOf(opt);
  SuiteResult r{"lipschitz_profile"};
  r.limit = 2.0;
  for (int t = 0; t < opt.lipschitz_samples; ++t) {
    Stream s(opt.seed ^ 0x11, t);
    const GameShape shape = SmallShape(s);
    const Game g = UniformGame(shape, s);
    const StrategyProfile p = InteriorProfile(shape, s, 0.0);
    // Half the pairs are close, where the bound is tightest.
    StrategyProfile q = InteriorProfile(shape, s, 0.0);
    if (t % 2 == 0) {
      for (int i = 0; i < shape.num_players(); ++i) {
        for (int a = 0; a < shape.num_actions(i); ++a) {
          q.mutable_strategy(i)[a] =
              0.99 * p(i, a) + 0.01 * q(i, a);
        }
      }
    }
    const double lhs = std::abs(loss(p, g) - loss(q, g));
    const double d = L1Distance(p, q);
    ++r.checks;
    if (!(lhs <= 2 * d + 1e-9)) ++r.failures;
    if (d > 1e-12) r.worst = std::max(r.worst, lhs / d);
  }
  Finish(r, start);
  return r;
}

SuiteResult CheckLipschitzUtility(const SelfcheckOptions& opt) {
  const auto start = Clock::now();
  const LossFunction loss = LossOf(opt);
  SuiteResult r{"lipschitz_utility"};
  r.limit = 2.0;
  for (int t = 0; t < opt.lipschitz_samples; ++t) {
    Stream s(opt.seed ^ 0x22, t);
    const GameShape shape = SmallShape(s);
    const Game u = UniformGame(shape, s);
    Game v = UniformGame(shape, s);
    if (t % 2 == 0) {
      std::vector<double> w(u.flat().begin(), u.flat().end());
      for (double& x : w) x = std::clamp(x + s.Uniform(-0.01, 0.01), 0.0, 1.0);
      v = Game(shape, std::move(w));
    }
    const StrategyProfile p = InteriorProfile(shape, s, 0.0);
    const double lhs = std::abs(loss(p, u) - loss(p, v));
    const double d = MaxDistance(u, v);
    ++r.checks;
    if (!(lhs <= 2 * d + 1e-9)) ++r.failures;
    if (d > 1e-12) r.worst = std::max(r.worst, lhs / d);
  }
  Finish(r, start);
  return r;
}

SuiteResult CheckOracle(const SelfcheckOptions& opt) {
  const auto start = Clock::now();
  const LossFunction loss = LossOf(opt);
  SuiteResult r{"oracle"};
  r.limit = 1e-10;
  for (int t = 0; t < opt.oracle_instances; ++t) {
    Stream s(opt.seed ^ 0x33, t);
    const int n = static_cast<int>(s.UniformInt(2, 3));
    // Per-player cap keeps |A| <= max_joint_actions; the first instance of
    // each player count sits at the cap.
    const int cap = static_cast<int>(std::floor(
        std::pow(static_cast<double>(opt.max_joint_actions), 1.0 / n) + 1e-9));
    std::vector<int> counts(n);
    for (int& k : counts) k = t < 2 ? cap : static_cast<int>(s.UniformInt(1, cap));
    const GameShape shape(counts);
    const Game g = UniformGame(shape, s);
    StrategyProfile p = InteriorProfile(shape, s, 0.0);
    if (t % 4 == 3) {
      std::vector<int> pure(n);
      for (int i = 0; i < n; ++i) {
        pure[i] = static_cast<int>(s.UniformInt(0, counts[i] - 1));
      }
      p = StrategyProfile::Pure(shape, pure);
    }
    const double err = std::abs(loss(p, g) - std::max(0.0, BruteForceNashApr(p, g)));
    ++r.checks;
    if (!(err < r.limit)) ++r.failures;
    r.worst = std::max(r.worst, err);
  }
  Finish(r, start);
  return r;
}

SuiteResult CheckSubgradient(const SelfcheckOptions& opt) {
  const auto start = Clock::now();
  SuiteResult r{"subgradient"};
  r.limit = 1.0;  // error / (1e-4 * scale + 1e-9)
  const double h = 1e-5;
  int tie_free = 0;
  for (int t = 0; t < opt.gradient_points; ++t) {
    Stream s(opt.seed ^ 0x44, t);
    const GameShape shape = SmallShape(s);
    const Game g = UniformGame(shape, s);
    const StrategyProfile p = InteriorProfile(shape, s, 1e-3);
    const SubgradientReport rep = NashAprSubgradient(p, g);
    if (rep.tie_flag) continue;
    ++tie_free;
    for (int i = 0; i < shape.num_players(); ++i) {
      for (int a = 0; a < shape.num_actions(i); ++a) {
        StrategyProfile plus = p, minus = p;
        plus.mutable_strategy(i)[a] += h;
        minus.mutable_strategy(i)[a] -= h;
        const double fd =
            (NashAprMultilinear(plus, g) - NashAprMultilinear(minus, g)) /
            (2 * h);
        const double an = rep.gradient[i][a];
        const double ratio = std::abs(fd - an) /
                             (1e-4 * std::max(std::abs(fd), std::abs(an)) + 1e-9);
        ++r.checks;
        if (!(ratio <= 1.0)) ++r.failures;
        r.worst = std::max(r.worst, ratio);
      }
    }
  }
  // Ties have measure zero; a suite dominated by them checks nothing.
  if (2 * tie_free < opt.gradient_points) ++r.failures;
  Finish(r, start);
  return r;
}

SuiteResult CheckNetworkGradient(const SelfcheckOptions& opt) {
  const auto start = Clock::now();
  SuiteResult r{"network_gradient"};
  r.limit = 1.0;  // error / (1e-3 * scale + 1e-8)
  ApproximatorArch arch;
  arch.shape = GameShape({2, 2});
  arch.hidden_layers = {3};
  const double h = 1e-6;
  int usable = 0;
  for (int t = 0; t < opt.network_points; ++t) {
    Stream s(opt.seed ^ 0x55, t);
    ApproximatorParams p = InitParams(arch, opt.seed + t);
    for (auto tensor : p.weights.Tensors()) {
      for (double& x : tensor) x = s.Uniform();
    }
    std::vector<Game> games;
    for (int k = 0; k < 5; ++k) games.push_back(UniformGame(arch.shape, s));
    const ForwardCache cache = Forward(arch, p, games, Mode::kTrain);
    bool tie = false;
    for (std::size_t b = 0; b < games.size(); ++b) {
      tie = tie || NashAprSubgradient(cache.Profile(b), games[b]).tie_flag;
    }
    if (tie) continue;
    ++usable;
    const Weights grad = Backward(arch, p, games, cache);
    const auto analytic = grad.Tensors();
    auto params = p.weights.Tensors();
    for (std::size_t ti = 0; ti < params.size(); ++ti) {
      for (std::size_t e = 0; e < params[ti].size(); ++e) {
        const double saved = params[ti][e];
        params[ti][e] = saved + h;
        const double plus = BatchLoss(arch, p, games, Mode::kTrain);
        params[ti][e] = saved - h;
        const double minus = BatchLoss(arch, p, games, Mode::kTrain);
        params[ti][e] = saved;
        const double fd = (plus - minus) / (2 * h);
        const double an = analytic[ti][e];
        const double ratio = std::abs(fd - an) /
                             (1e-3 * std::max(std::abs(fd), std::abs(an)) + 1e-8);
        ++r.checks;
        if (!(ratio <= 1.0)) ++r.failures;
        r.worst = std::max(r.worst, ratio);
      }
    }
  }
  if (2 * usable < opt.network_points) ++r.failures;
  Finish(r, start);
  return r;
}

SuiteResult CheckGoldenFixtures(const SelfcheckOptions& opt) {
  const auto start = Clock::now();
  const LossFunction loss = LossOf(opt);
  SuiteResult r{"golden"};
  r.limit = 1e-12;
  auto expect = [&](double got, double want) {
    const double err = std::abs(got - want);
    ++r.checks;
    if (!(err <= r.limit)) ++r.failures;
    r.worst = std::max(r.worst, err);
  };
  const Game g = TwoEquilibriumGame();
  const GameShape& shape = g.shape();
  expect(loss(StrategyProfile::Pure(shape, std::vector<int>{0, 1}), g), 0.0);
  expect(loss(StrategyProfile::Pure(shape, std::vector<int>{1, 0}), g), 0.0);
  expect(loss(StrategyProfile({{2.0 / 3, 1.0 / 3}, {2.0 / 3, 1.0 / 3}}), g),
         0.0);
  expect(loss(StrategyProfile::Pure(shape, std::vector<int>{0, 0}), g), 0.5);
  expect(loss(StrategyProfile::Pure(shape, std::vector<int>{0, 0}),
              PerturbedGame(0.1, false)),
         0.0);
  expect(loss(StrategyProfile::Pure(shape, std::vector<int>{1, 0}),
              PerturbedGame(0.1, true)),
         0.0);
  Finish(r, start);
  return r;
}

SuiteResult CheckSimplexProjection(const SelfcheckOptions& opt) {
  const auto start = Clock::now();
  SuiteResult r{"simplex_projection"};
  r.limit = 1e-12;
  for (int t = 0; t < 500; ++t) {
    Stream s(opt.seed ^ 0x66, t);
    const int k = static_cast<int>(s.UniformInt(1, 8));
    std::vector<double> v(k);
    for (double& x : v) x = s.Uniform(-2, 2);
    const std::vector<double> x = ProjectToSimplex(v);
    double sum = 0.0, violation = 0.0;
    for (double xi : x) {
      sum += xi;
      violation = std::max(violation, -xi);
    }
    violation = std::max(violation, std::abs(sum - 1.0));
    auto dist2 = [&](const std::vector<double>& y) {
      double d = 0.0;
      for (int a = 0; a < k; ++a) d += (y[a] - v[a]) * (y[a] - v[a]);
      return d;
    };
    // No sampled simplex point, vertex included, may be closer.
    const double best = dist2(x);
    for (int trial = 0; trial < 50 + k; ++trial) {
      std::vector<double> y(k, 0.0);
      if (trial < k) {
        y[trial] = 1.0;
      } else {
        double total = 0.0;
        for (double& yi : y) total += (yi = s.Exponential());
        for (double& yi : y) yi /= total;
      }
      violation = std::max(violation, best - dist2(y));
    }
    // Projection is idempotent.
    const std::vector<double> again = ProjectToSimplex(x);
    for (int a = 0; a < k; ++a) {
      violation = std::max(violation, std::abs(again[a] - x[a]));
    }
    ++r.checks;
    if (!(violation <= r.limit)) ++r.failures;
    r.worst = std::max(r.worst, violation);
  }
  Finish(r, start);
  return r;
}

bool SelfcheckReport::passed() const {
  if (suites.empty()) return false;
  for (const SuiteResult& s : suites) {
    if (!s.passed()) return false;
  }
  return true;
}

const SuiteResult* SelfcheckReport::Find(std::string_view name) const {
  for (const SuiteResult& s : suites) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

SelfcheckReport RunSelfcheck(const SelfcheckOptions& opt) {
  SelfcheckReport rep;
  rep.suites.push_back(CheckLipschitzProfile(opt));
  rep.suites.push_back(CheckLipschitzUtility(opt));
  rep.suites.push_back(CheckOracle(opt));
  rep.suites.push_back(CheckSubgradient(opt));
  rep.suites.push_back(CheckNetworkGradient(opt));
  rep.suites.push_back(CheckGoldenFixtures(opt));
  rep.suites.push_back(CheckSimplexProjection(opt));
  rep.worst_lipschitz_ratio =
      std::max(rep.suites[0].worst, rep.suites[1].worst);
  return rep;
}

void WriteSelfcheckCsv(std::ostream& out, const SelfcheckReport& report) {
  const auto precision = out.precision(17);
  out << kSelfcheckCsvHeader << '\n';
  for (const SuiteResult& s : report.suites) {
    out << s.name << ',' << s.checks << ',' << s.failures << ',' << s.worst
        << ',' << s.limit << ',' << s.seconds << ',' << (s.passed() ? 1 : 0)
        << '\n';
  }
  out.precision(precision);
}

}  // namespace nashapr
