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

#include "nashapr/nash.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashapr/errors.h"

namespace nashapr {
namespace {

void CheckPlayer(const Game& game, int player) {
  if (player < 0 || player >= game.num_players()) {
    throw DimensionError("player index out of range");
  }
}

const StrategyProfile& ValidOrNormalized(const StrategyProfile& profile,
                                         StrategyProfile& storage) {
  if (profile.IsValid()) return profile;
  storage = profile.Normalized();
  return storage;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

struct Gains {
  std::vector<std::vector<double>> deviation;  // u_i(a_i, s_{-i})
  std::vector<double> expected;                // u_i(s)
};

Gains ComputeGains(const StrategyProfile& profile, const Game& game) {
  Gains g;
  const int n = game.num_players();
  g.deviation.resize(n);
  g.expected.resize(n);
  for (int i = 0; i < n; ++i) {
    g.deviation[i] = DeviationPayoffs(game, i, profile);
    g.expected[i] = Dot(g.deviation[i], profile.strategy(i));
  }
  return g;
}

double MaxGain(const Gains& g) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.deviation.size(); ++i) {
    for (double d : g.deviation[i]) best = std::max(best, d - g.expected[i]);
  }
  return best;
}

}  // namespace

std::vector<double> ContractUtilities(const Game& game, int owner,
                                      const StrategyProfile& profile,
                                      std::span<const int> keep) {
  CheckPlayer(game, owner);
  CheckProfileShape(profile, game.shape());
  const int n = game.num_players();
  std::vector<int> dims = game.shape().action_counts();
  std::span<const double> source = game.utilities(owner);
  std::vector<double> current;
  bool owns = false;
  std::size_t keep_pos = keep.size();
  for (int axis = n - 1; axis >= 0; --axis) {
    if (keep_pos > 0 && keep[keep_pos - 1] == axis) {
      --keep_pos;
      continue;
    }
    std::size_t outer = 1;
    for (int k = 0; k < axis; ++k) outer *= dims[k];
    std::size_t inner = 1;
    for (std::size_t k = axis + 1; k < dims.size(); ++k) inner *= dims[k];
    const int width = dims[axis];
    std::span<const double> weights = profile.strategy(axis);
    std::vector<double> next(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
      double* out = next.data() + o * inner;
      const double* block = source.data() + o * width * inner;
      for (int a = 0; a < width; ++a) {
        const double w = weights[a];
        if (w == 0.0) continue;
        const double* row = block + a * inner;
        for (std::size_t j = 0; j < inner; ++j) out[j] += w * row[j];
      }
    }
    dims.erase(dims.begin() + axis);
    current = std::move(next);
    source = current;
    owns = true;
  }
  if (keep_pos != 0) throw DimensionError("keep axes must be sorted players");
  if (!owns) return std::vector<double>(source.begin(), source.end());
  return current;
}

double ExpectedUtility(const Game& game, int player,
                       const StrategyProfile& profile) {
  const std::vector<double> dev = DeviationPayoffs(game, player, profile);
  return Dot(dev, profile.strategy(player));
}

std::vector<double> DeviationPayoffs(const Game& game, int player,
                                     const StrategyProfile& profile) {
  const int keep[] = {player};
  return ContractUtilities(game, player, profile, keep);
}

int BestResponse(const Game& game, int player, const StrategyProfile& profile) {
  const std::vector<double> dev = DeviationPayoffs(game, player, profile);
  return static_cast<int>(std::max_element(dev.begin(), dev.end()) -
                          dev.begin());
}

double NashExploitability(const StrategyProfile& profile, const Game& game,
                          int player) {
  CheckPlayer(game, player);
  CheckProfileShape(profile, game.shape());
  StrategyProfile storage;
  const StrategyProfile& s = ValidOrNormalized(profile, storage);
  const std::vector<double> dev = DeviationPayoffs(game, player, s);
  // Non-negative on the simplex; clamp rounding noise.
  return std::max(0.0, *std::max_element(dev.begin(), dev.end()) -
                           Dot(dev, s.strategy(player)));
}

double NashApr(const StrategyProfile& profile, const Game& game) {
  CheckProfileShape(profile, game.shape());
  StrategyProfile storage;
  return std::max(0.0,
                  NashAprMultilinear(ValidOrNormalized(profile, storage), game));
}

double NashAprMultilinear(const StrategyProfile& profile, const Game& game) {
  CheckProfileShape(profile, game.shape());
  return MaxGain(ComputeGains(profile, game));
}

SubgradientReport NashAprSubgradient(const StrategyProfile& profile,
                                     const Game& game) {
  CheckProfileShape(profile, game.shape());
  StrategyProfile storage;
  const StrategyProfile& s = ValidOrNormalized(profile, storage);
  const Gains g = ComputeGains(s, game);
  const int n = game.num_players();

  SubgradientReport report;
  report.value = MaxGain(g);
  int maximizers = 0;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < game.shape().num_actions(i); ++a) {
      if (g.deviation[i][a] - g.expected[i] >= report.value - kTieTolerance) {
        if (maximizers == 0) {
          report.argmax_player = i;
          report.argmax_action = a;
        }
        ++maximizers;
      }
    }
  }
  report.tie_flag = maximizers > 1;

  const int star = report.argmax_player;
  const int best = report.argmax_action;
  const int star_width = game.shape().num_actions(star);
  report.gradient.resize(n);
  for (int j = 0; j < n; ++j) {
    const int width = game.shape().num_actions(j);
    std::vector<double>& grad = report.gradient[j];
    if (j == star) {
      grad.resize(width);
      for (int a = 0; a < width; ++a) grad[a] = -g.deviation[star][a];
      continue;
    }
    // pair[x][y] with x, y the actions of min(star, j), max(star, j).
    const int keep[] = {std::min(star, j), std::max(star, j)};
    const std::vector<double> pair = ContractUtilities(game, star, s, keep);
    auto at = [&](int star_action, int j_action) {
      return star < j ? pair[star_action * width + j_action]
                      : pair[j_action * star_width + star_action];
    };
    grad.assign(width, 0.0);
    for (int a = 0; a < width; ++a) {
      double mixed = 0.0;
      for (int b = 0; b < star_width; ++b) mixed += s(star, b) * at(b, a);
      grad[a] = at(best, a) - mixed;
    }
  }
  return report;
}

double L1Distance(const StrategyProfile& p, const StrategyProfile& q) {
  if (p.num_players() != q.num_players()) {
    throw DimensionError("profiles have different player counts");
  }
  double total = 0.0;
  for (int i = 0; i < p.num_players(); ++i) {
    if (p.num_actions(i) != q.num_actions(i)) {
      throw DimensionError("profiles have different action counts");
    }
    for (int a = 0; a < p.num_actions(i); ++a) total += std::abs(p(i, a) - q(i, a));
  }
  return total;
}

double MaxDistance(const Game& u, const Game& v) {
  if (!(u.shape() == v.shape())) {
    throw DimensionError("games have different shapes");
  }
  double worst = 0.0;
  const auto a = u.flat();
  const auto b = v.flat();
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  return worst;
}

double BruteForceNashApr(const StrategyProfile& profile, const Game& game) {
  CheckProfileShape(profile, game.shape());
  const GameShape& shape = game.shape();
  if (shape.num_joint_actions() > kBruteForceMaxJointActions) {
    throw SizeError("brute force limited to 10^6 joint actions");
  }
  StrategyProfile storage;
  const StrategyProfile& s = ValidOrNormalized(profile, storage);
  const int n = shape.num_players();
  const std::size_t joint = shape.num_joint_actions();

  // Walk joint actions in storage order with an odometer (last player
  // fastest), accumulating every player's expected and deviation payoffs
  // from the raw probability products.
  std::vector<double> expected(n, 0.0);
  std::vector<std::vector<double>> deviated(n);
  for (int i = 0; i < n; ++i) deviated[i].assign(shape.num_actions(i), 0.0);
  std::vector<int> actions(n, 0);
  for (std::size_t a = 0; a < joint; ++a) {
    for (int i = 0; i < n; ++i) {
      double others = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) others *= s(j, actions[j]);
      }
      const double u = game.utility(i, a);
      deviated[i][actions[i]] += others * u;
      expected[i] += others * s(i, actions[i]) * u;
    }
    for (int j = n - 1; j >= 0; --j) {
      if (++actions[j] < shape.num_actions(j)) break;
      actions[j] = 0;
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (double d : deviated[i]) best = std::max(best, d - expected[i]);
  }
  return best;
}

}  // namespace nashapr
