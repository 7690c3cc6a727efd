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

#include "nashapr/bound.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "nashapr/errors.h"

namespace nashapr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void BoundInputs::Validate() const {
  if (!(m >= 1.0) || !std::isfinite(m)) throw ConfigError("m must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("delta must lie in (0, 1)");
  }
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) {
    throw ConfigError("Lipschitz constant must be finite and >= 0");
  }
  if (r_grid.empty()) throw ConfigError("empty radius grid");
  for (double r : r_grid) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ConfigError("radii must be positive and finite");
    }
  }
}

double CoverSum(const GameShape& shape, double r) {
  const double e = std::numbers::e;
  const double n = shape.num_players();
  double sum = 0.0;
  for (int i = 0; i < shape.num_players(); ++i) {
    const double k = shape.num_actions(i);
    if (k < 2) continue;  // a single action needs no cover
    sum += (k - 1) * std::log((e * 40 * n * k / r + e * k) / (k - 1));
  }
  return sum;
}

BoundResult EvaluateBound(const BoundInputs& in) {
  in.Validate();
  BoundResult out;
  const double exponent = static_cast<double>(in.shape.num_utilities());
  out.delta_m = kInf;
  out.best_r = in.r_grid.front();
  for (double r : in.r_grid) {
    RadiusTerm t;
    t.r = r;
    const double base = std::ceil(4 * in.lipschitz / r);
    const double sum = CoverSum(in.shape, r);
    if (base == 0.0 || sum == 0.0) {
      t.log_ln_cover = -kInf;
      t.delta_m = 2 * r;
    } else {
      t.log_ln_cover = exponent * std::log(base) + std::log(sum);
      // sqrt(2 lnN / m) = exp((ln 2 + ln lnN - ln m) / 2)
      const double log_term =
          0.5 * (std::log(2.0) + t.log_ln_cover - std::log(in.m));
      const double term = std::exp(log_term);
      if (!std::isfinite(term)) {
        t.overflow = true;
        t.delta_m = kInf;
      } else {
        t.delta_m = term + 2 * r;
      }
    }
    if (t.delta_m < out.delta_m) {
      out.delta_m = t.delta_m;
      out.best_r = r;
    }
    out.per_radius.push_back(t);
  }
  out.confidence = 4 * std::sqrt(2 * std::log(4 / in.delta) / in.m);
  out.overflow = !std::isfinite(out.delta_m);
  out.bound = out.overflow ? kInf : 2 * out.delta_m + out.confidence;
  return out;
}

}  // namespace nashapr
