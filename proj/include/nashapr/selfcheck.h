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

// Executable property suites: the loss's Lipschitz bounds in the profile
// and in the utilities, agreement with the brute-force oracle, subgradient
// and network-gradient checks against finite differences, golden fixtures
// and simplex projection. Failures are counted, never thrown.

#ifndef NASHAPR_SELFCHECK_H_
#define NASHAPR_SELFCHECK_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nashapr/game.h"

namespace nashapr {

using LossFunction =
    std::function<double(const StrategyProfile&, const Game&)>;

struct SelfcheckOptions {
  int lipschitz_samples = 10000;  // per Lipschitz suite
  int oracle_instances = 1000;
  int max_joint_actions = 10000;  // largest |A| in the oracle suite
  int gradient_points = 300;
  int network_points = 6;
  std::uint64_t seed = 2024;
  // The loss under test in the Lipschitz, oracle and fixture suites.
  // Defaults to NashApr; replaced by mutation tests.
  LossFunction loss;
};

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  // Largest observed value of the suite's statistic and the limit it is
  // held to (ratio for Lipschitz suites, error for the others).
  double worst = 0.0;
  double limit = 0.0;
  double seconds = 0.0;
  bool passed() const { return checks > 0 && failures == 0; }
};

struct SelfcheckReport {
  std::vector<SuiteResult> suites;
  double worst_lipschitz_ratio = 0.0;
  bool passed() const;
  const SuiteResult* Find(std::string_view name) const;
};

// Individual suites, named as in the report.
SuiteResult CheckLipschitzProfile(const SelfcheckOptions& opt);  // "lipschitz_profile"
SuiteResult CheckLipschitzUtility(const SelfcheckOptions& opt);  // "lipschitz_utility"
SuiteResult CheckOracle(const SelfcheckOptions& opt);            // "oracle"
SuiteResult CheckSubgradient(const SelfcheckOptions& opt);       // "subgradient"
SuiteResult CheckNetworkGradient(const SelfcheckOptions& opt);   // "network_gradient"
SuiteResult CheckGoldenFixtures(const SelfcheckOptions& opt);    // "golden"
SuiteResult CheckSimplexProjection(const SelfcheckOptions& opt); // "simplex_projection"

SelfcheckReport RunSelfcheck(const SelfcheckOptions& opt = {});

inline constexpr std::string_view kSelfcheckCsvHeader =
    "suite,checks,failures,worst,limit,seconds,passed";
void WriteSelfcheckCsv(std::ostream& out, const SelfcheckReport& report);

// The fixed games used by the fixture suite. In the first, player 1 picks
// the row, player 2 the column:
//        U          D
//   L  (0, 0)    (1, 0.5)
//   R  (0.5, 1)  (0, 0)
Game TwoEquilibriumGame();
// u_1(L,U) = u_2(L,U) = 0.5, u_1(L,D) = 1, u_1(R,U) = 0.5 -/+ eps,
// u_2(R,U) = 1, all else 0.
Game PerturbedGame(double eps, bool plus_variant);

}  // namespace nashapr

#endif  // NASHAPR_SELFCHECK_H_
