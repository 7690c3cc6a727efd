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

// nashapr_cli: dataset generation, training, evaluation and the experiment
// reports. Every report is CSV with a header line; a JSON echo of the
// effective configuration goes beside it (<report>.config.json), or to
// stderr when the report is written to stdout.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nashapr/bound.h"
#include "nashapr/dataset_io.h"
#include "nashapr/errors.h"
#include "nashapr/experiments.h"
#include "nashapr/model_io.h"
#include "nashapr/parallel.h"
#include "nashapr/selfcheck.h"

namespace nashapr {
namespace {

using nlohmann::json;

// Writes the CSV produced by `emit` to `path` (stdout when empty) and the
// config echo beside it.
template <typename Emit>
void WriteReport(const std::string& path, json config, Emit emit) {
  config["threads"] = ThreadCount();
  if (path.empty()) {
    emit(std::cout);
    std::cerr << config.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  emit(out);
  std::ofstream echo(path + ".config.json");
  if (!echo) throw std::runtime_error("cannot write " + path + ".config.json");
  echo << config.dump(2) << '\n';
}

std::vector<int> ActionCounts(int players, std::vector<int> actions) {
  if (players < 2) throw ConfigError("--players must be >= 2");
  if (actions.size() == 1) actions.assign(players, actions[0]);
  if (static_cast<int>(actions.size()) != players) {
    throw ConfigError("--actions needs one value or one per player");
  }
  return actions;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> ParseWidths(const std::string& s) {
  std::vector<int> out;
  for (const std::string& w : SplitList(s)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(w, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != w.size() || v < 1) throw ConfigError("bad layer width: " + w);
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--arch needs at least one width");
  return out;
}

TrainedModel LoadTrained(const std::string& path) {
  ModelFile m = LoadModel(path);
  // Models saved without optimizer state carry no training record.
  const std::int64_t steps =
      m.adam ? static_cast<std::int64_t>(m.adam->step) : 0;
  return {std::move(m.arch), std::move(m.params), steps};
}

std::vector<Game> SplitGames(const Dataset& ds, const std::string& split) {
  if (split == "train") return ds.Select(ds.split.train);
  if (split == "validation") return ds.Select(ds.split.validation);
  if (split == "test") return ds.Select(ds.split.test);
  if (split == "all") return ds.games;
  throw ConfigError("unknown split: " + split);
}

// ---- subcommands ----

struct GenOptions {
  std::string game_class;
  int players = 2;
  std::vector<int> actions = {10};
  std::size_t count = 4600;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::size_t> validation;
  std::optional<std::size_t> test;
  std::string report;
};

void RunGen(const GenOptions& o) {
  const GeneratorSpec spec = MakeGeneratorSpec(
      ParseGameClass(o.game_class), ActionCounts(o.players, o.actions), o.seed);
  DatasetSplit split = DefaultSplit(o.count);
  if (o.validation || o.test) {
    split = MakeSplit(o.count, o.validation.value_or(split.validation.size()),
                      o.test.value_or(split.test.size()));
  }
  const Dataset ds = Generate(spec, o.count, split);
  SaveDataset(ds, o.out);
  json cfg = {{"command", "gen"},        {"class", o.game_class},
              {"action_counts", spec.shape.action_counts()},
              {"count", o.count},        {"seed", o.seed},
              {"out", o.out}};
  WriteReport(o.report, cfg, [&](std::ostream& out) {
    out << "path,class,players,count,train,validation,test\n"
        << o.out << ',' << o.game_class << ',' << o.players << ',' << o.count
        << ',' << ds.split.train.size() << ',' << ds.split.validation.size()
        << ',' << ds.split.test.size() << '\n';
  });
}

struct TrainOptions {
  std::string data;
  std::string arch = "128,128";
  std::int64_t iters = 20000;
  int batch = 64;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  std::int64_t val_interval = 500;
  std::string out;
  std::string report;
};

void RunTrain(const TrainOptions& o) {
  const Dataset ds = LoadDataset(o.data);
  ApproximatorArch arch;
  arch.shape = ds.spec.shape;
  arch.hidden_layers = ParseWidths(o.arch);
  TrainConfig tc;
  tc.iterations = o.iters;
  tc.batch_size = o.batch;
  tc.learning_rate = o.lr;
  tc.seed = o.seed;
  tc.validation_interval = o.val_interval;
  if (tc.iterations < 1 || tc.batch_size < 1 || !(tc.learning_rate > 0)) {
    throw ConfigError("--iters, --batch and --lr must be positive");
  }
  const TrainState st = Train(arch, ds.Select(ds.split.train),
                              ds.Select(ds.split.validation), tc);
  SaveModel(o.out, arch, st.params, &st.adam);
  json cfg = {{"command", "train"},  {"data", o.data},
              {"hidden_layers", arch.hidden_layers},
              {"iterations", o.iters}, {"batch_size", o.batch},
              {"learning_rate", o.lr}, {"seed", o.seed},
              {"validation_interval", o.val_interval},
              {"batchnorm_epsilon", arch.batchnorm_epsilon},
              {"bn_momentum", arch.bn_momentum},
              {"clip_range", {arch.clip_lower, arch.clip_upper}},
              {"out", o.out}};
  WriteReport(o.report, cfg,
              [&](std::ostream& out) { WriteTrainLogCsv(out, st.log); });
}

struct EvalOptions {
  std::string model;
  std::string data;
  std::string split = "test";
  std::uint64_t seed = 0;
  std::string report;
};

void RunEval(const EvalOptions& o) {
  const ModelFile m = LoadModel(o.model);
  const Dataset ds = LoadDataset(o.data);
  const std::vector<Game> games = SplitGames(ds, o.split);
  const std::string name(GameClassName(ds.spec.game_class));
  const LossSummary s = Evaluate(m.arch, m.params, games);
  const LossSummary r =
      RandomBaseline(games, DeriveSeed(o.seed, "random/" + name, 0));
  const std::vector<GeneralizationRow> rows = {
      {name, 0, o.split, s.mean, s.std}, {name, 0, "random", r.mean, r.std}};
  json cfg = {{"command", "eval"}, {"model", o.model}, {"data", o.data},
              {"split", o.split},  {"seed", o.seed},   {"games", games.size()}};
  WriteReport(o.report, cfg,
              [&](std::ostream& out) { WriteGeneralizationCsv(out, rows); });
}

struct RaceOptions {
  std::string model;
  std::string data;
  std::string solvers = "fp,rm,rd";
  int max_iters = 10000;
  double tol = 0.0;
  std::string report;
  std::string games_report;
};

void RunRace(const RaceOptions& o) {
  const TrainedModel model = LoadTrained(o.model);
  const Dataset ds = LoadDataset(o.data);
  RaceConfig rc;
  rc.solvers.clear();
  for (const std::string& s : SplitList(o.solvers)) {
    rc.solvers.push_back(ParseSolver(s));
  }
  rc.max_iterations = o.max_iters;
  rc.tolerance = o.tol;
  rc.game_class = std::string(GameClassName(ds.spec.game_class));
  const RaceResult r =
      RunEfficiencyRace(model, ds.Select(ds.split.test), rc);
  json cfg = {{"command", "race"},      {"model", o.model},
              {"data", o.data},         {"solvers", SplitList(o.solvers)},
              {"max_iterations", o.max_iters}, {"tolerance", o.tol},
              {"split", "test"}};
  WriteReport(o.report, cfg,
              [&](std::ostream& out) { WriteRaceCsv(out, r.summary); });
  if (!o.games_report.empty()) {
    WriteReport(o.games_report, cfg,
                [&](std::ostream& out) { WriteRaceGamesCsv(out, r.games); });
  }
}

struct WarmstartOptions {
  std::string model;
  std::string data;
  double target = 0.01;
  double eta0 = 0.1;
  int max_iters = 10000;
  std::string report;
  std::string summary;
};

void RunWarm(const WarmstartOptions& o) {
  const TrainedModel model = LoadTrained(o.model);
  const Dataset ds = LoadDataset(o.data);
  WarmstartConfig wc;
  wc.target = o.target;
  wc.eta0 = o.eta0;
  wc.max_iterations = o.max_iters;
  const WarmstartResult r = RunWarmstart(model, ds.Select(ds.split.test), wc);
  json cfg = {{"command", "warmstart"}, {"model", o.model},
              {"data", o.data},         {"target", o.target},
              {"eta0", o.eta0},         {"max_iterations", o.max_iters},
              {"split", "test"}};
  WriteReport(o.report, cfg,
              [&](std::ostream& out) { WriteWarmstartCsv(out, r.rows); });
  if (o.summary.empty()) {
    WriteWarmstartSummaryCsv(std::cerr, r.summary);
  } else {
    WriteReport(o.summary, cfg, [&](std::ostream& out) {
      WriteWarmstartSummaryCsv(out, r.summary);
    });
  }
}

struct BoundOptions {
  double m = 4000;
  double delta = 0.05;
  double lipschitz = 1.0;
  int players = 2;
  std::vector<int> actions = {2};
  std::string r_grid = "0.01,0.1,1,10";
  std::string report;
};

void RunBoundCommand(const BoundOptions& o) {
  BoundInputs in;
  in.m = o.m;
  in.delta = o.delta;
  in.lipschitz = o.lipschitz;
  in.shape = GameShape(ActionCounts(o.players, o.actions));
  for (const std::string& r : SplitList(o.r_grid)) {
    try {
      in.r_grid.push_back(std::stod(r));
    } catch (const std::exception&) {
      throw ConfigError("bad radius: " + r);
    }
  }
  const BoundResult b = EvaluateBound(in);
  json cfg = {{"command", "bound"},       {"m", o.m},
              {"delta", o.delta},         {"lipschitz", o.lipschitz},
              {"action_counts", in.shape.action_counts()},
              {"r_grid", in.r_grid},      {"best_r", b.best_r},
              {"overflow", b.overflow}};
  cfg["bound"] = std::isfinite(b.bound) ? json(b.bound) : json("inf");
  WriteReport(o.report, cfg, [&](std::ostream& out) {
    const auto precision = out.precision(17);
    out << "r,log_ln_cover,delta_m,overflow,confidence,bound\n";
    for (const RadiusTerm& t : b.per_radius) {
      out << t.r << ',' << t.log_ln_cover << ',' << t.delta_m << ','
          << (t.overflow ? 1 : 0) << ',' << b.confidence << ','
          << 2 * t.delta_m + b.confidence << '\n';
    }
    out.precision(precision);
  });
}

struct SelfcheckCliOptions {
  std::uint64_t seed = 2024;
  int samples = 10000;
  std::string report;
};

int RunSelfcheckCommand(const SelfcheckCliOptions& o) {
  SelfcheckOptions opt;
  opt.seed = o.seed;
  opt.lipschitz_samples = o.samples;
  const SelfcheckReport rep = RunSelfcheck(opt);
  json cfg = {{"command", "selfcheck"}, {"seed", o.seed},
              {"lipschitz_samples", o.samples},
              {"worst_lipschitz_ratio", rep.worst_lipschitz_ratio},
              {"passed", rep.passed()}};
  WriteReport(o.report, cfg,
              [&](std::ostream& out) { WriteSelfcheckCsv(out, rep); });
  std::cerr << "worst Lipschitz ratio " << rep.worst_lipschitz_ratio << ": "
            << (rep.passed() ? "all suites passed" : "FAILED") << '\n';
  return rep.passed() ? 0 : 1;
}

}  // namespace
}  // namespace nashapr

int main(int argc, char** argv) {
  using namespace nashapr;
  CLI::App app{"Nash equilibrium approximator: datasets, training, reports"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a game dataset");
  g->add_option("--class", gen.game_class,
                "travelers_dilemma, grab_the_dollar, war_of_attrition, "
                "bertrand_oligopoly or majority_voting")
      ->required();
  g->add_option("--players", gen.players, "Number of players");
  g->add_option("--actions", gen.actions,
                "Actions per player: one value or one per player");
  g->add_option("--count", gen.count, "Number of games");
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("--validation", gen.validation, "Validation games");
  g->add_option("--test", gen.test, "Test games (taken from the end)");
  g->add_option("--out", gen.out, "Dataset file")->required();
  g->add_option("--report", gen.report, "CSV summary path (default stdout)");

  TrainOptions train;
  auto* t = app.add_subcommand("train", "Train an approximator");
  t->add_option("--data", train.data, "Dataset file")->required();
  t->add_option("--arch", train.arch, "Hidden layer widths, comma separated");
  t->add_option("--iters", train.iters, "Training steps");
  t->add_option("--batch", train.batch, "Minibatch size");
  t->add_option("--lr", train.lr, "Adam learning rate");
  t->add_option("--seed", train.seed, "Initialization and shuffling seed");
  t->add_option("--val-interval", train.val_interval,
                "Steps between validation losses (0 disables)");
  t->add_option("--out", train.out, "Model file")->required();
  t->add_option("--report", train.report, "Training log CSV path");

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Evaluate a model on a split");
  e->add_option("--model", ev.model, "Model file")->required();
  e->add_option("--data", ev.data, "Dataset file")->required();
  e->add_option("--split", ev.split, "train, validation, test or all");
  e->add_option("--seed", ev.seed, "Random-baseline seed");
  e->add_option("--report", ev.report, "CSV path");

  RaceOptions race;
  auto* r = app.add_subcommand("race", "Iterations solvers need to match the model");
  r->add_option("--model", race.model, "Model file")->required();
  r->add_option("--data", race.data, "Dataset file")->required();
  r->add_option("--solvers", race.solvers, "Comma list of fp, rm, rd, descent");
  r->add_option("--max-iters", race.max_iters, "Iteration cap per game");
  r->add_option("--tol", race.tol, "Slack added to each per-game target");
  r->add_option("--report", race.report, "Summary CSV path");
  r->add_option("--games-report", race.games_report, "Per-game CSV path");

  WarmstartOptions warm;
  auto* w = app.add_subcommand("warmstart", "Regret descent from uniform vs model init");
  w->add_option("--model", warm.model, "Model file")->required();
  w->add_option("--data", warm.data, "Dataset file")->required();
  w->add_option("--target", warm.target, "Target loss");
  w->add_option("--eta0", warm.eta0, "Initial step size");
  w->add_option("--max-iters", warm.max_iters, "Iteration cap per run");
  w->add_option("--report", warm.report, "Paired CSV path");
  w->add_option("--summary", warm.summary, "Summary CSV path (default stderr)");

  BoundOptions bound;
  auto* b = app.add_subcommand("bound", "Evaluate the generalization bound");
  b->add_option("--m", bound.m, "Training set size");
  b->add_option("--delta", bound.delta, "Confidence parameter in (0, 1)");
  b->add_option("--lipschitz", bound.lipschitz, "Lipschitz constant of the model");
  b->add_option("--players", bound.players, "Number of players");
  b->add_option("--actions", bound.actions, "Actions per player");
  b->add_option("--r-grid", bound.r_grid, "Comma list of radii");
  b->add_option("--report", bound.report, "CSV path");

  SelfcheckCliOptions sc;
  auto* s = app.add_subcommand("selfcheck", "Run the property suites");
  s->add_option("--seed", sc.seed, "Sampling seed");
  s->add_option("--samples", sc.samples, "Samples per Lipschitz suite");
  s->add_option("--report", sc.report, "CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (g->parsed()) RunGen(gen);
    if (t->parsed()) RunTrain(train);
    if (e->parsed()) RunEval(ev);
    if (r->parsed()) RunRace(race);
    if (w->parsed()) RunWarm(warm);
    if (b->parsed()) RunBoundCommand(bound);
    if (s->parsed()) return RunSelfcheckCommand(sc);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
