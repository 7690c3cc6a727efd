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
#include <sstream>

#include "doctest.h"
#include "nashapr/nash.h"

namespace nashapr {
namespace {

SelfcheckOptions Quick() {
  SelfcheckOptions opt;
  opt.lipschitz_samples = 2000;
  opt.oracle_instances = 200;
  opt.max_joint_actions = 400;
  opt.gradient_points = 60;
  opt.network_points = 3;
  return opt;
}

TEST_CASE("fresh build passes every suite") {
  const SelfcheckReport rep = RunSelfcheck(Quick());
  CHECK(rep.passed());
  CHECK(rep.suites.size() == 7);
  for (const SuiteResult& s : rep.suites) {
    INFO(s.name);
    CHECK(s.passed());
    CHECK(s.worst <= s.limit);
  }
  CHECK(rep.worst_lipschitz_ratio > 0.0);
  CHECK(rep.worst_lipschitz_ratio <= 2.0);
  REQUIRE(rep.Find("oracle") != nullptr);
  CHECK(rep.Find("missing") == nullptr);
}

TEST_CASE("a scaled loss breaks the Lipschitz and oracle suites") {
  SelfcheckOptions opt = Quick();
  opt.loss = [](const StrategyProfile& s, const Game& g) {
    return 3.0 * NashApr(s, g);
  };
  const SelfcheckReport rep = RunSelfcheck(opt);
  CHECK_FALSE(rep.passed());
  CHECK_FALSE(rep.Find("lipschitz_utility")->passed());
  CHECK_FALSE(rep.Find("oracle")->passed());
  CHECK(rep.worst_lipschitz_ratio > 2.0);
  // Suites that do not use the hook are unaffected.
  CHECK(rep.Find("subgradient")->passed());
}

TEST_CASE("ignoring the last player breaks the oracle") {
  SelfcheckOptions opt = Quick();
  opt.loss = [](const StrategyProfile& s, const Game& g) {
    const auto dev = DeviationPayoffs(g, 0, s);
    const double u = ExpectedUtility(g, 0, s);
    double best = 0.0;
    for (double d : dev) best = std::max(best, d - u);
    return best;
  };
  const SelfcheckReport rep = RunSelfcheck(opt);
  CHECK_FALSE(rep.Find("oracle")->passed());
  // Both players gain exactly 0.5 at (L, U), so the fixtures cannot tell.
  CHECK(rep.Find("golden")->passed());
}

TEST_CASE("report CSV") {
  SelfcheckReport rep;
  rep.suites.push_back({"golden", 6, 0, 0.0, 1e-12, 0.5});
  rep.suites.push_back({"oracle", 0, 0, 0.0, 1e-10, 0.25});
  std::ostringstream out;
  WriteSelfcheckCsv(out, rep);
  CHECK(out.str() ==
        "suite,checks,failures,worst,limit,seconds,passed\n"
        "golden,6,0,0,9.9999999999999998e-13,0.5,1\n"
        "oracle,0,0,0,1e-10,0.25,0\n");
  // A suite that checked nothing does not pass.
  CHECK_FALSE(rep.passed());
}

}  // namespace
}  // namespace nashapr
