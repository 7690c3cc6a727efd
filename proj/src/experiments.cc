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

#include "nashapr/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <tuple>

#include "nashapr/errors.h"
#include "nashapr/nash.h"
#include "nashapr/parallel.h"

namespace nashapr {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

LossSummary Summarize(std::span<const double> xs) {
  LossSummary s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  for (double x : xs) s.std += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(xs.size()));
  return s;
}

void RequireTrained(const TrainedModel& model, std::span<const Game> games) {
  if (model.steps <= 0) throw UsageError("model has not been trained");
  if (games.empty()) throw ConfigError("no games to evaluate");
  for (const Game& g : games) {
    if (g.shape() != model.arch.shape) {
      throw DimensionError("game shape does not match the model");
    }
  }
}

// Stable split order in reports.
int SplitRank(const std::string& s) {
  return s == "train" ? 0 : s == "test" ? 1 : 2;
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view tag,
                         std::uint64_t rep) {
  // FNV-1a of the tag keeps units with different names apart.
  std::uint64_t h = 1469598103934665603ull;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return StreamKey(seed ^ h, rep);
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

LossSummary RandomBaseline(std::span<const Game> games, std::uint64_t seed) {
  if (games.empty()) throw ConfigError("empty split");
  std::vector<double> losses(games.size());
  for (std::size_t k = 0; k < games.size(); ++k) {
    Stream s(seed, k);
    losses[k] = NashApr(RandomProfile(games[k].shape(), s), games[k]);
  }
  return Summarize(losses);
}

GeneralizationResult RunGeneralization(const GeneralizationConfig& cfg) {
  if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (cfg.datasets.empty()) throw ConfigError("no datasets");
  GeneralizationResult out;
  for (const Dataset& ds : cfg.datasets) {
    const std::string name(GameClassName(ds.spec.game_class));
    if (ds.games.empty() || ds.split.train.empty() || ds.split.test.empty()) {
      throw ConfigError("dataset for " + name + " lacks a train or test split");
    }
    const std::vector<Game> train = ds.Select(ds.split.train);
    const std::vector<Game> val = ds.Select(ds.split.validation);
    const std::vector<Game> test = ds.Select(ds.split.test);
    ApproximatorArch arch;
    arch.shape = ds.spec.shape;
    arch.hidden_layers = cfg.hidden_layers;
    auto& models = out.models.emplace_back();
    auto& logs = out.logs.emplace_back();
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      TrainConfig tc = cfg.train;
      tc.seed = DeriveSeed(cfg.seed, "train/" + name, rep);
      TrainState st = Train(arch, train, val, tc);
      const LossSummary tr = Evaluate(arch, st.params, train);
      const LossSummary te = Evaluate(arch, st.params, test);
      const LossSummary rnd =
          RandomBaseline(test, DeriveSeed(cfg.seed, "random/" + name, rep));
      out.rows.push_back({name, rep, "train", tr.mean, tr.std});
      out.rows.push_back({name, rep, "test", te.mean, te.std});
      out.rows.push_back({name, rep, "random", rnd.mean, rnd.std});
      models.push_back({arch, std::move(st.params),
                        static_cast<std::int64_t>(st.adam.step)});
      logs.push_back(std::move(st.log));
    }
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const GeneralizationRow& a, const GeneralizationRow& b) {
                     return std::make_tuple(a.game_class, a.repetition,
                                            SplitRank(a.split)) <
                            std::make_tuple(b.game_class, b.repetition,
                                            SplitRank(b.split));
                   });
  return out;
}

void WriteGeneralizationCsv(std::ostream& out,
                            std::span<const GeneralizationRow> rows) {
  const auto precision = out.precision(17);
  out << kGeneralizationCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.game_class << ',' << r.repetition << ',' << r.split << ','
        << r.mean << ',' << r.std << '\n';
  }
  out.precision(precision);
}

RaceResult RunEfficiencyRace(const TrainedModel& model,
                             std::span<const Game> games,
                             const RaceConfig& cfg) {
  RequireTrained(model, games);
  if (cfg.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(cfg.tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
  const std::size_t n = games.size();

  // One eval pass over the whole set is the approximator's "iteration".
  const auto start = Clock::now();
  const std::vector<StrategyProfile> predicted =
      Predict(model.arch, model.params, games);
  const double inference_s = Seconds(start);

  RaceResult out;
  std::vector<double> targets(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double loss = NashApr(predicted[k], games[k]);
    targets[k] = loss + cfg.tolerance;
    out.games.push_back({"nea", k, targets[k], 1, true, loss,
                         inference_s / static_cast<double>(n)});
  }
  out.summary.push_back(
      {"nea", cfg.game_class, inference_s / static_cast<double>(n), 1.0, 0,
       static_cast<int>(n)});

  for (SolverKind kind : cfg.solvers) {
    const std::string name(SolverName(kind));
    std::vector<RaceGameRow> rows(n);
    ParallelFor(n, [&](std::size_t k) {
      SolverConfig sc = cfg.solver;
      sc.max_iterations = cfg.max_iterations;
      sc.target_nash_apr = targets[k];
      sc.warm_start.reset();
      // Only the endpoints matter here.
      sc.record_every = cfg.max_iterations;
      const SolverTrace t = RunSolver(kind, games[k], sc);
      rows[k] = {name,         k,
                 targets[k],   t.reached_target ? t.iterations_used
                                                : cfg.max_iterations,
                 t.reached_target, t.final_nash_apr,
                 t.wall_time_s};
    });
    RaceSummaryRow s{name, cfg.game_class, 0.0, 0.0, 0, static_cast<int>(n)};
    for (const RaceGameRow& r : rows) {
      s.mean_time_s += r.wall_time_s;
      s.mean_iterations += r.iterations;
      if (!r.reached) ++s.failures;
    }
    s.mean_time_s /= static_cast<double>(n);
    s.mean_iterations /= static_cast<double>(n);
    out.summary.push_back(s);
    out.games.insert(out.games.end(), rows.begin(), rows.end());
  }
  return out;
}

void WriteRaceCsv(std::ostream& out, std::span<const RaceSummaryRow> rows) {
  const auto precision = out.precision(17);
  out << kRaceCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.solver << ',' << r.game_class << ',' << r.mean_time_s << ','
        << r.mean_iterations << ',' << r.failures << ',' << r.games << '\n';
  }
  out.precision(precision);
}

void WriteRaceGamesCsv(std::ostream& out, std::span<const RaceGameRow> rows) {
  const auto precision = out.precision(17);
  out << kRaceGamesCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.solver << ',' << r.game_index << ',' << r.target << ','
        << r.iterations << ',' << (r.reached ? 1 : 0) << ','
        << r.final_nash_apr << ',' << r.wall_time_s << '\n';
  }
  out.precision(precision);
}

WarmstartResult RunWarmstart(const TrainedModel& model,
                             std::span<const Game> games,
                             const WarmstartConfig& cfg) {
  RequireTrained(model, games);
  if (cfg.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(cfg.eta0 > 0.0)) throw ConfigError("eta0 must be > 0");
  const std::size_t n = games.size();
  const std::vector<StrategyProfile> predicted =
      Predict(model.arch, model.params, games);

  std::vector<WarmstartRow> rows(2 * n);
  ParallelFor(n, [&](std::size_t k) {
    for (int kind = 0; kind < 2; ++kind) {
      SolverConfig sc;
      sc.max_iterations = cfg.max_iterations;
      sc.target_nash_apr = cfg.target;
      sc.descent_step = cfg.eta0;
      sc.record_every = cfg.max_iterations;
      if (kind == 1) sc.warm_start = predicted[k];
      const SolverTrace t = RegretDescent(games[k], sc);
      rows[2 * k + kind] = {k,
                            kind == 0 ? "uniform" : "model",
                            t.reached_target ? t.iterations_used
                                             : cfg.max_iterations,
                            t.wall_time_s,
                            t.loss_curve.front().nash_apr,
                            t.final_nash_apr,
                            t.reached_target};
    }
  });

  WarmstartResult out;
  std::vector<double> cold, warm;
  for (const WarmstartRow& r : rows) {
    if (r.init_kind == "uniform") {
      cold.push_back(r.iterations);
    } else {
      warm.push_back(r.iterations);
      if (r.final_loss > r.initial_loss) ++out.summary.model_regressions;
    }
  }
  out.summary.games = static_cast<int>(n);
  out.summary.median_uniform_iterations = Median(cold);
  out.summary.median_model_iterations = Median(warm);
  out.rows = std::move(rows);
  return out;
}

void WriteWarmstartCsv(std::ostream& out, std::span<const WarmstartRow> rows) {
  const auto precision = out.precision(17);
  out << kWarmstartCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.game_index << ',' << r.init_kind << ',' << r.iterations << ','
        << r.wall_time_s << ',' << r.initial_loss << ',' << r.final_loss << ','
        << (r.reached ? 1 : 0) << '\n';
  }
  out.precision(precision);
}

void WriteWarmstartSummaryCsv(std::ostream& out, const WarmstartSummary& s) {
  const auto precision = out.precision(17);
  out << kWarmstartSummaryCsvHeader << '\n';
  out << s.games << ',' << s.median_uniform_iterations << ','
      << s.median_model_iterations << ',' << s.model_regressions << '\n';
  out.precision(precision);
}

}  // namespace nashapr
