// Copyright 2026 The sweepctl Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Problem instances shared by the unit and acceptance tests.

#ifndef SWEEPCTL_TESTS_SUPPORT_FIXTURES_H_
#define SWEEPCTL_TESTS_SUPPORT_FIXTURES_H_

#include <random>
#include <vector>

#include "sweepctl/model.h"

namespace sweepctl::testing {

struct RobotRow {
  double x;
  double y;
  double speed;
};

// All robots share the heading theta_deg.
ProblemSpec MakeSpec(const std::vector<RobotRow>& rows, double radius,
                     double horizon, double bound, double theta_deg,
                     ThetaMode mode = ThetaMode::kFrozen);

// x1=(2,2), x2=(3,3), s=(3,1), T=2, R=1, bound 10, theta 45 degrees.
ProblemSpec TwoRobotSpec(ThetaMode mode = ThetaMode::kFrozen);
ProblemSpec FiveRobotSpec(ThetaMode mode = ThetaMode::kFrozen);
ProblemSpec TenRobotSpec(ThetaMode mode = ThetaMode::kFrozen);

// Diagonal fleet of n robots with random spacing at least 2R in coordinate
// sum, random speeds and controls.
struct RandomCorridorCase {
  ProblemSpec spec;
  Vector x;
  Vector u;
  double h;
};
RandomCorridorCase RandomCorridorInstance(std::mt19937_64& rng, int n);

}  // namespace sweepctl::testing

#endif  // SWEEPCTL_TESTS_SUPPORT_FIXTURES_H_
