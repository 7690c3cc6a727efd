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

#include "doctest.h"
#include "nashapr/errors.h"

namespace nashapr {
namespace {

BoundInputs Spot() {
  BoundInputs in;
  in.m = 1e6;
  in.delta = 0.05;
  in.lipschitz = 1.0;
  in.shape = GameShape({2, 2});
  in.r_grid = {0.25};
  return in;
}

// Reference values computed separately with 50-digit arithmetic.
TEST_CASE("spot value for two players with two actions each") {
  const BoundResult b = EvaluateBound(Spot());
  REQUIRE(b.per_radius.size() == 1);
  CHECK(std::exp(b.per_radius[0].log_ln_cover) ==
        doctest::Approx(64120325284.9050).epsilon(1e-9));
  CHECK(b.delta_m == doctest::Approx(358.607037866906).epsilon(1e-9));
  CHECK(b.bound == doctest::Approx(717.225917391311).epsilon(1e-9));
  CHECK_FALSE(b.overflow);
}

TEST_CASE("single-action players contribute nothing") {
  BoundInputs in;
  in.m = 1e9;
  in.delta = 0.1;
  in.lipschitz = 0.7;
  in.shape = GameShape({2, 3, 1});
  in.r_grid = {0.5};
  CHECK(EvaluateBound(in).bound ==
        doctest::Approx(4128.53993209170).epsilon(1e-9));

  in.shape = GameShape({1, 1});
  const BoundResult b = EvaluateBound(in);
  CHECK(b.delta_m == 1.0);
  CHECK(std::isinf(b.per_radius[0].log_ln_cover));
}

TEST_CASE("minimum over the grid") {
  BoundInputs in = Spot();
  in.r_grid = {4.0, 0.25, 1.0, 2.0};
  const BoundResult b = EvaluateBound(in);
  REQUIRE(b.per_radius.size() == 4);
  double best = INFINITY;
  for (const RadiusTerm& t : b.per_radius) best = std::min(best, t.delta_m);
  CHECK(b.delta_m == best);
  // Larger radii shrink the grid factor far faster than 2r grows.
  CHECK(b.best_r != 0.25);
  CHECK(b.bound == 2 * b.delta_m + b.confidence);
}

TEST_CASE("monotone in m and delta") {
  BoundInputs in = Spot();
  in.r_grid = {0.25, 1.0, 8.0};
  double previous = INFINITY;
  for (double m : {1.0, 10.0, 1e3, 1e6, 1e9, 1e15}) {
    in.m = m;
    const double b = EvaluateBound(in).bound;
    CHECK(b <= previous);
    previous = b;
  }
  in = Spot();
  previous = 0.0;
  for (double delta : {0.9, 0.5, 0.1, 1e-3, 1e-9, 1e-300}) {
    in.delta = delta;
    const double b = EvaluateBound(in).bound;
    CHECK(b > previous);
    previous = b;
  }
}

TEST_CASE("large shapes overflow to infinity with a flag") {
  BoundInputs in = Spot();
  in.shape = GameShape({300, 300});
  in.lipschitz = 10;
  in.r_grid = {0.01, 0.1};
  const BoundResult b = EvaluateBound(in);
  CHECK(b.overflow);
  CHECK(std::isinf(b.bound));
  for (const RadiusTerm& t : b.per_radius) {
    CHECK(t.overflow);
    CHECK(std::isfinite(t.log_ln_cover));
  }
  // A huge radius rescues the grid.
  in.r_grid = {0.01, 1e6};
  const BoundResult c = EvaluateBound(in);
  CHECK_FALSE(c.overflow);
  CHECK(c.best_r == 1e6);
}

TEST_CASE("invalid inputs") {
  BoundInputs in = Spot();
  in.delta = 1.0;
  CHECK_THROWS_AS(EvaluateBound(in), ConfigError);
  in = Spot();
  in.m = 0.5;
  CHECK_THROWS_AS(EvaluateBound(in), ConfigError);
  in = Spot();
  in.r_grid = {};
  CHECK_THROWS_AS(EvaluateBound(in), ConfigError);
  in.r_grid = {0.1, -1};
  CHECK_THROWS_AS(EvaluateBound(in), ConfigError);
  in = Spot();
  in.lipschitz = -1;
  CHECK_THROWS_AS(EvaluateBound(in), ConfigError);
}

}  // namespace
}  // namespace nashapr
