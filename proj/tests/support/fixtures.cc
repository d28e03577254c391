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

#include "support/fixtures.h"

#include <numbers>

#include "sweepctl/model.h"

namespace sweepctl::testing {

ProblemSpec MakeSpec(const std::vector<RobotRow>& rows, double radius,
                     double horizon, double bound, double theta_deg,
                     ThetaMode mode) {
  std::vector<RobotSpec> robots;
  for (const RobotRow& row : rows) {
    robots.push_back(
        {{row.x, row.y}, row.speed, theta_deg * std::numbers::pi / 180.0});
  }
  const int n = static_cast<int>(rows.size());
  return ProblemSpec{FleetConfig(std::move(robots), radius),
                     UniformControlRegion(n, bound), horizon, mode};
}

ProblemSpec TwoRobotSpec(ThetaMode mode) {
  return MakeSpec({{2, 2, 3}, {3, 3, 1}}, 1.0, 2.0, 10.0, 45.0, mode);
}

ProblemSpec FiveRobotSpec(ThetaMode mode) {
  return MakeSpec(
      {{5, 5, 2}, {11, 11, 2}, {16, 16, 1}, {20, 20, 3}, {27, 27, 3}}, 1.0, 8.0,
      5.0, 45.0, mode);
}

ProblemSpec TenRobotSpec(ThetaMode mode) {
  return MakeSpec({{-10, -10, 1},
                   {-13, -13, 1},
                   {-18, -18, 1},
                   {-22, -22, 2},
                   {-25, -25, 2},
                   {-29, -29, 2},
                   {-32, -32, 3},
                   {-35, -35, 3},
                   {-38, -38, 3},
                   {-40, -40, 3}},
                  1.0, 8.0, 5.0, 225.0, mode);
}

RandomCorridorCase RandomCorridorInstance(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = 0.5 + unit(rng);
  std::vector<RobotRow> rows;
  double sum = 2.0 + 4.0 * unit(rng);
  for (int i = 0; i < n; ++i) {
    // Half of the gaps start exactly in contact.
    const double gap =
        unit(rng) < 0.5 ? 2.0 * radius : 2.0 * radius + 3.0 * unit(rng);
    if (i > 0) sum += gap;
    const double skew = 2.0 * unit(rng) - 1.0;
    rows.push_back({sum / 2 + skew, sum / 2 - skew, 0.5 + 3.0 * unit(rng)});
  }
  RandomCorridorCase c{MakeSpec(rows, radius, 4.0, 3.0, 45.0), Vector(),
                       Vector(), 0.0};
  c.x = c.spec.fleet.InitialState();
  c.u = Vector::NullaryExpr(n, [&](Eigen::Index) { return 3.0 * unit(rng); });
  c.h = 0.01 + 0.2 * unit(rng);
  return c;
}

}  // namespace sweepctl::testing
