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

#include "nashapr/solvers.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "nashapr/errors.h"
#include "nashapr/nash.h"

namespace nashapr {
namespace {

using Clock = std::chrono::steady_clock;

void CheckConfig(const SolverConfig& cfg, const Game& game) {
  if (cfg.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (cfg.target_nash_apr && !(*cfg.target_nash_apr >= 0.0)) {
    throw ConfigError("target must be >= 0");
  }
  if (cfg.record_every < 1) throw ConfigError("record_every must be >= 1");
  if (cfg.warm_start) CheckProfileShape(*cfg.warm_start, game.shape());
}

StrategyProfile InitialProfile(const SolverConfig& cfg, const Game& game) {
  // Valid profiles are used as given so the initial loss is exactly the
  // loss of the supplied profile.
  if (cfg.warm_start) {
    return cfg.warm_start->IsValid() ? *cfg.warm_start
                                     : cfg.warm_start->Normalized();
  }
  return StrategyProfile::Uniform(game.shape());
}

// Bookkeeping shared by all solvers: the loss curve, early stopping and
// the wall clock around the iteration loop.
class Recorder {
 public:
  explicit Recorder(const SolverConfig& cfg)
      : cfg_(cfg), start_(Clock::now()) {}

  // Returns true once `loss` meets the target.
  bool Observe(int iteration, double loss) {
    last_ = {iteration, loss, Elapsed()};
    if (iteration % cfg_.record_every == 0) trace_.loss_curve.push_back(last_);
    return cfg_.target_nash_apr && loss <= *cfg_.target_nash_apr;
  }

  SolverTrace Finish(StrategyProfile reported, StrategyProfile last_iterate,
                     bool reached) {
    if (trace_.loss_curve.empty() ||
        trace_.loss_curve.back().iteration != last_.iteration) {
      trace_.loss_curve.push_back(last_);
    }
    trace_.iterations_used = last_.iteration;
    trace_.wall_time_s = Elapsed();
    trace_.final_profile = std::move(reported);
    trace_.last_iterate = std::move(last_iterate);
    trace_.final_nash_apr = last_.nash_apr;
    trace_.reached_target = reached;
    return std::move(trace_);
  }

 private:
  double Elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }
  const SolverConfig& cfg_;
  Clock::time_point start_;
  TracePoint last_;
  SolverTrace trace_;
};

StrategyProfile Average(const std::vector<std::vector<double>>& sums) {
  std::vector<std::vector<double>> avg = sums;
  for (auto& v : avg) {
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= total;
  }
  return StrategyProfile(std::move(avg));
}

}  // namespace

std::string_view SolverName(SolverKind kind) {
  switch (kind) {
    case SolverKind::kFictitiousPlay: return "fp";
    case SolverKind::kRegretMatching: return "rm";
    case SolverKind::kReplicatorDynamics: return "rd";
    case SolverKind::kRegretDescent: return "descent";
  }
  return "?";
}

SolverKind ParseSolver(std::string_view name) {
  for (SolverKind k : {SolverKind::kFictitiousPlay, SolverKind::kRegretMatching,
                       SolverKind::kReplicatorDynamics,
                       SolverKind::kRegretDescent}) {
    if (SolverName(k) == name) return k;
  }
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

SolverTrace FictitiousPlay(const Game& game, const SolverConfig& cfg) {
  CheckConfig(cfg, game);
  const int n = game.num_players();
  const StrategyProfile init = InitialProfile(cfg, game);
  std::vector<std::vector<double>> counts(n);
  for (int i = 0; i < n; ++i) {
    counts[i].assign(init.strategy(i).begin(), init.strategy(i).end());
    for (double& c : counts[i]) c *= cfg.fp_prior_weight;
  }
  Recorder rec(cfg);
  StrategyProfile average = init;
  StrategyProfile played = init;
  if (rec.Observe(0, NashApr(average, game))) {
    return rec.Finish(average, played, true);
  }
  std::vector<int> responses(n);
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    // Simultaneous best responses to the current empirical averages.
    for (int i = 0; i < n; ++i) responses[i] = BestResponse(game, i, average);
    for (int i = 0; i < n; ++i) counts[i][responses[i]] += 1.0;
    average = Average(counts);
    played = StrategyProfile::Pure(game.shape(), responses);
    if (rec.Observe(t, NashApr(average, game))) {
      return rec.Finish(average, played, true);
    }
  }
  return rec.Finish(average, played, false);
}

SolverTrace RegretMatching(const Game& game, const SolverConfig& cfg) {
  CheckConfig(cfg, game);
  const int n = game.num_players();
  StrategyProfile current = InitialProfile(cfg, game);
  std::vector<std::vector<double>> regret(n), strategy_sum(n);
  for (int i = 0; i < n; ++i) {
    regret[i].assign(game.shape().num_actions(i), 0.0);
    strategy_sum[i].assign(game.shape().num_actions(i), 0.0);
  }
  Recorder rec(cfg);
  StrategyProfile average = current;
  StrategyProfile played = current;
  if (rec.Observe(0, NashApr(average, game))) {
    return rec.Finish(average, played, true);
  }
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    for (int i = 0; i < n; ++i) {
      const std::vector<double> dev = DeviationPayoffs(game, i, current);
      double expected = 0.0;
      for (std::size_t a = 0; a < dev.size(); ++a) {
        expected += dev[a] * current(i, static_cast<int>(a));
      }
      for (std::size_t a = 0; a < dev.size(); ++a) {
        regret[i][a] += dev[a] - expected;
        strategy_sum[i][a] += current(i, static_cast<int>(a));
      }
    }
    average = Average(strategy_sum);
    played = current;
    for (int i = 0; i < n; ++i) {
      std::vector<double>& next = current.mutable_strategy(i);
      double positive = 0.0;
      for (double r : regret[i]) positive += std::max(r, 0.0);
      for (std::size_t a = 0; a < next.size(); ++a) {
        next[a] = positive > 0.0 ? std::max(regret[i][a], 0.0) / positive
                                 : 1.0 / static_cast<double>(next.size());
      }
    }
    if (rec.Observe(t, NashApr(average, game))) {
      return rec.Finish(average, played, true);
    }
  }
  return rec.Finish(average, played, false);
}

SolverTrace ReplicatorDynamics(const Game& game, const SolverConfig& cfg) {
  CheckConfig(cfg, game);
  const int n = game.num_players();
  StrategyProfile current = InitialProfile(cfg, game);
  Recorder rec(cfg);
  if (rec.Observe(0, NashApr(current, game))) {
    return rec.Finish(current, current, true);
  }
  std::vector<std::vector<double>> dev(n);
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    for (int i = 0; i < n; ++i) dev[i] = DeviationPayoffs(game, i, current);
    for (int i = 0; i < n; ++i) {
      std::vector<double>& s = current.mutable_strategy(i);
      double expected = 0.0;
      for (std::size_t a = 0; a < s.size(); ++a) expected += dev[i][a] * s[a];
      double total = 0.0;
      for (std::size_t a = 0; a < s.size(); ++a) {
        s[a] *= (dev[i][a] + cfg.rd_shift) / (expected + cfg.rd_shift);
        total += s[a];
      }
      for (double& x : s) x /= total;
    }
    if (rec.Observe(t, NashApr(current, game))) {
      return rec.Finish(current, current, true);
    }
  }
  return rec.Finish(current, current, false);
}

SolverTrace RegretDescent(const Game& game, const SolverConfig& cfg) {
  CheckConfig(cfg, game);
  if (!(cfg.descent_step > 0.0)) throw ConfigError("descent_step must be > 0");
  const int n = game.num_players();
  StrategyProfile current = InitialProfile(cfg, game);
  StrategyProfile best = current;
  Recorder rec(cfg);
  double best_loss = NashApr(current, game);
  if (rec.Observe(0, best_loss)) return rec.Finish(best, current, true);
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    const SubgradientReport g = NashAprSubgradient(current, game);
    const double step = cfg.descent_step / std::sqrt(static_cast<double>(t));
    for (int i = 0; i < n; ++i) {
      std::vector<double>& s = current.mutable_strategy(i);
      for (std::size_t a = 0; a < s.size(); ++a) s[a] -= step * g.gradient[i][a];
      s = ProjectToSimplex(s);
    }
    const double loss = NashApr(current, game);
    if (loss < best_loss) {
      best_loss = loss;
      best = current;
    }
    if (rec.Observe(t, best_loss)) return rec.Finish(best, current, true);
  }
  return rec.Finish(best, current, false);
}

SolverTrace RunSolver(SolverKind kind, const Game& game,
                      const SolverConfig& cfg) {
  switch (kind) {
    case SolverKind::kFictitiousPlay: return FictitiousPlay(game, cfg);
    case SolverKind::kRegretMatching: return RegretMatching(game, cfg);
    case SolverKind::kReplicatorDynamics: return ReplicatorDynamics(game, cfg);
    case SolverKind::kRegretDescent: return RegretDescent(game, cfg);
  }
  throw ConfigError("unknown solver");
}

std::vector<double> ProjectToSimplex(std::span<const double> v) {
  if (v.empty()) throw DimensionError("cannot project an empty vector");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::max(v[k] - theta, 0.0);
  return out;
}

StrategyProfile RandomProfile(const GameShape& shape, Stream& stream) {
  std::vector<std::vector<double>> s(shape.num_players());
  for (int i = 0; i < shape.num_players(); ++i) {
    s[i].resize(shape.num_actions(i));
    double total = 0.0;
    for (double& x : s[i]) {
      x = stream.Exponential();
      total += x;
    }
    for (double& x : s[i]) x /= total;
  }
  return StrategyProfile(std::move(s));
}

void WriteTraceCsv(std::ostream& out, std::string_view solver,
                   std::size_t game_index, const SolverTrace& trace) {
  const auto precision = out.precision(17);
  for (const TracePoint& p : trace.loss_curve) {
    out << solver << ',' << game_index << ',' << p.iteration << ','
        << p.nash_apr << ',' << p.wall_time_s << '\n';
  }
  out.precision(precision);
}

}  // namespace nashapr
