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

// Explicit generalization bound for the learned approximator:
//
//   ln N(r) <= ceil(4L/r)^(n|A|) * sum_i (|A_i| - 1) *
//              ln((e * 40 n |A_i| / r + e |A_i|) / (|A_i| - 1))
//   Delta   =  min_r sqrt(2 ln N(r) / m) + 2r
//   gap     <= 2 Delta + 4 sqrt(2 ln(4/delta) / m)
//
// where n|A| is the number of utility entries and L the approximator's
// Lipschitz constant. Evaluated in log space; the values are astronomically
// large except for tiny shapes, so this is a diagnostic, not a guarantee
// anyone should expect to be tight.

#ifndef NASHAPR_BOUND_H_
#define NASHAPR_BOUND_H_

#include <vector>

#include "nashapr/game.h"

namespace nashapr {

struct BoundInputs {
  double m = 1.0;  // training set size
  double delta = 0.05;
  double lipschitz = 1.0;
  GameShape shape;
  std::vector<double> r_grid;

  // Throws ConfigError unless m >= 1, 0 < delta < 1, L >= 0 and every
  // radius is positive and finite.
  void Validate() const;
};

struct RadiusTerm {
  double r = 0.0;
  // Natural log of ln N(r); -inf when ln N(r) = 0.
  double log_ln_cover = 0.0;
  // sqrt(2 ln N / m) + 2r; +inf when it does not fit in a double.
  double delta_m = 0.0;
  bool overflow = false;
};

struct BoundResult {
  std::vector<RadiusTerm> per_radius;
  double best_r = 0.0;
  double delta_m = 0.0;     // minimum over the grid
  double confidence = 0.0;  // 4 sqrt(2 ln(4/delta) / m)
  double bound = 0.0;       // 2 delta_m + confidence
  // Every radius overflowed; bound is +inf.
  bool overflow = false;
};

// ln of the covering-number sum, i.e. the second factor above.
double CoverSum(const GameShape& shape, double r);

BoundResult EvaluateBound(const BoundInputs& inputs);

}  // namespace nashapr

#endif  // NASHAPR_BOUND_H_
