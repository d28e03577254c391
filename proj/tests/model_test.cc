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

#include "sweepctl/model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/fixtures.h"
#include "sweepctl/errors.h"

namespace sweepctl {
namespace {

using testing::MakeSpec;

constexpr double kInvSqrt2 = 0.70710678118654752440;

TEST(CorridorPolyhedronTest, TwoRobots) {
  const Polyhedron p = CorridorPolyhedron(testing::TwoRobotSpec().fleet);
  ASSERT_EQ(p.size(), 1);
  ASSERT_EQ(p.dimension(), 4);
  EXPECT_EQ(p.normals().row(0), Eigen::RowVector4d(1, 1, -1, -1));
  EXPECT_EQ(p.offsets()(0), -2.0);
}

TEST(CorridorPolyhedronTest, ThreeRobots) {
  const ProblemSpec spec =
      MakeSpec({{5, 5, 2}, {11, 11, 2}, {16, 16, 1}}, 1.0, 1.0, 1.0, 45.0);
  const Polyhedron p = CorridorPolyhedron(spec.fleet);
  ASSERT_EQ(p.size(), 2);
  Matrix expected(2, 6);
  expected << 1, 1, -1, -1, 0, 0,  //
      0, 0, 1, 1, -1, -1;
  EXPECT_EQ(p.normals(), expected);
  EXPECT_EQ(p.offsets(), Vector::Constant(2, -2.0));
}

TEST(CorridorPolyhedronTest, ZeroRadius) {
  const ProblemSpec spec =
      MakeSpec({{0, 0, 1}, {1, 1, 1}}, 0.0, 1.0, 1.0, 45.0);
  const Polyhedron p = CorridorPolyhedron(spec.fleet);
  EXPECT_EQ(p.normals().row(0), Eigen::RowVector4d(1, 1, -1, -1));
  EXPECT_EQ(p.offsets()(0), 0.0);
}

TEST(CorridorPolyhedronTest, SingleRobotIsRejected) {
  const ProblemSpec spec = MakeSpec({{1, 1, 1}}, 1.0, 1.0, 1.0, 45.0);
  EXPECT_THROW(CorridorPolyhedron(spec.fleet), InvalidFleet);
  EXPECT_EQ(CorridorOrEmpty(spec.fleet).size(), 0);
}

TEST(CorridorPolyhedronTest, QuadrantThreeFleetIsFeasibleAtStart) {
  const ProblemSpec spec = testing::TenRobotSpec();
  const Polyhedron p = CorridorPolyhedron(spec.fleet);
  EXPECT_EQ(CorridorOrientation(spec.fleet), -1);
  EXPECT_LE(p.MaxResidual(spec.fleet.InitialState()), 0.0);
}

TEST(CorridorPolyhedronTest, NormalsMeasureCoordinateSumGaps) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int n = 2; n <= 6; ++n) {
    std::vector<testing::RobotRow> rows;
    for (int i = 0; i < n; ++i) rows.push_back({3.0 * i, 3.0 * i, 1.0});
    const Polyhedron p =
        CorridorPolyhedron(MakeSpec(rows, 1.0, 1.0, 1.0, 45.0).fleet);
    for (int trial = 0; trial < 50; ++trial) {
      const Vector x =
          Vector::NullaryExpr(2 * n, [&](Eigen::Index) { return normal(rng); });
      for (int j = 0; j < n - 1; ++j) {
        const double gap =
            (x(2 * j) + x(2 * j + 1)) - (x(2 * j + 2) + x(2 * j + 3));
        EXPECT_NEAR(p.normals().row(j).dot(x), gap, 1e-12);
      }
    }
  }
}

TEST(FleetConfigTest, ValidatesRobots) {
  EXPECT_THROW(FleetConfig({}, 1.0), InvalidFleet);
  EXPECT_THROW(FleetConfig({{{1, 1}, 0.0, 0.0}}, 1.0), InvalidFleet);
  EXPECT_THROW(FleetConfig({{{1, 1}, 1.0, 7.0}}, 1.0), InvalidFleet);
  EXPECT_THROW(FleetConfig({{{1, 1}, 1.0, 0.0}}, -1.0), InvalidFleet);
}

TEST(PositionAngleTest, StandardPosition) {
  EXPECT_NEAR(PositionAngle({1, 1}), std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(PositionAngle({-1, -1}), 5 * std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(PositionAngle({0, -2}), 3 * std::numbers::pi / 2, 1e-15);
  EXPECT_EQ(PositionAngle({3, 0}), 0.0);
}

TEST(DriftTest, PointsTowardOriginInQuadrantOne) {
  const ProblemSpec spec = MakeSpec({{1, 1, 3}}, 1.0, 1.0, 1.0, 45.0);
  const Vector d = Drift(spec, spec.fleet.InitialState(), Vector::Ones(1));
  EXPECT_NEAR(d(0), -3 * kInvSqrt2, 1e-14);
  EXPECT_NEAR(d(1), -3 * kInvSqrt2, 1e-14);
}

TEST(DriftTest, PointsTowardOriginInQuadrantThree) {
  const ProblemSpec spec = MakeSpec({{-1, -1, 2}}, 1.0, 1.0, 1.0, 225.0);
  const Vector d = Drift(spec, spec.fleet.InitialState(), Vector::Ones(1));
  EXPECT_NEAR(d(0), 2 * kInvSqrt2, 1e-14);
  EXPECT_NEAR(d(1), 2 * kInvSqrt2, 1e-14);
}

TEST(DriftTest, ZeroControlGivesZeroDrift) {
  const ProblemSpec spec = testing::FiveRobotSpec();
  EXPECT_EQ(Drift(spec, spec.fleet.InitialState(), Vector::Zero(5)),
            Vector::Zero(10));
}

TEST(DriftTest, TrackingHeadingAtOriginIsZero) {
  const ProblemSpec spec = testing::TwoRobotSpec(ThetaMode::kTracking);
  Vector x(4);
  x << 0, 0, 3, 4;
  const Vector d = Drift(spec, x, Vector::Ones(2));
  EXPECT_EQ(d(0), 0.0);
  EXPECT_EQ(d(1), 0.0);
  EXPECT_NEAR(d(2), -0.6, 1e-15);
  EXPECT_NEAR(d(3), -0.8, 1e-15);
}

TEST(DriftTest, BlockwisePositiveHomogeneity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (ThetaMode mode : {ThetaMode::kFrozen, ThetaMode::kTracking}) {
    const ProblemSpec spec = testing::FiveRobotSpec(mode);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector x =
          spec.fleet.InitialState() +
          Vector::NullaryExpr(10, [&](Eigen::Index) { return unit(rng); });
      const Vector u =
          5.0 * Vector::NullaryExpr(5, [&](Eigen::Index) { return unit(rng); });
      const int i = trial % 5;
      const double alpha = 3.0 * unit(rng);
      Vector scaled = u;
      scaled(i) *= alpha;
      const Vector d0 = Drift(spec, x, u);
      const Vector d1 = Drift(spec, x, scaled);
      EXPECT_NEAR((d1.segment<2>(2 * i) - alpha * d0.segment<2>(2 * i)).norm(),
                  0.0, 1e-12);
    }
  }
}

TEST(DriftTest, JacobiansMatchFiniteDifferences) {
  const ProblemSpec spec = testing::FiveRobotSpec(ThetaMode::kTracking);
  Vector x = spec.fleet.InitialState();
  x(3) += 0.7;
  Vector u(5);
  u << 1.0, 0.5, 2.0, 0.25, 3.0;
  const double eps = 1e-6;
  const Matrix jx = DriftStateJacobian(spec, x, u);
  const Matrix ju = DriftControlJacobian(spec, x);
  for (int c = 0; c < 10; ++c) {
    Vector xp = x, xm = x;
    xp(c) += eps;
    xm(c) -= eps;
    const Vector fd = (Drift(spec, xp, u) - Drift(spec, xm, u)) / (2 * eps);
    EXPECT_LT((jx.col(c) - fd).norm(), 1e-7) << "state column " << c;
  }
  for (int c = 0; c < 5; ++c) {
    Vector up = u, um = u;
    up(c) += eps;
    um(c) -= eps;
    const Vector fd = (Drift(spec, x, up) - Drift(spec, x, um)) / (2 * eps);
    EXPECT_LT((ju.col(c) - fd).norm(), 1e-8) << "control column " << c;
  }
  EXPECT_EQ(DriftStateJacobian(testing::FiveRobotSpec(), x, u),
            Matrix::Zero(10, 10));
}

TEST(TerminalCostTest, Examples) {
  EXPECT_EQ(TerminalCost(Vector::Zero(4)), 0.0);
  Vector straddle(4);
  straddle << -0.5, -0.5, 0.5, 0.5;
  EXPECT_DOUBLE_EQ(TerminalCost(straddle), 0.5);
  EXPECT_DOUBLE_EQ(TerminalCost(Eigen::Vector2d(3, 4)), 12.5);
}

TEST(TerminalCostTest, NonnegativeAndZeroOnlyAtOrigin) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const Vector x =
        Vector::NullaryExpr(6, [&](Eigen::Index) { return normal(rng); });
    EXPECT_GT(TerminalCost(x), 0.0);
  }
}

TEST(ControlRegionTest, BoxMembershipAndClamp) {
  const ControlRegion region = UniformControlRegion(3, 2.0);
  EXPECT_TRUE(region.Contains(Vector::Zero(3)));
  EXPECT_TRUE(region.Contains(Vector::Constant(3, 2.0)));
  EXPECT_FALSE(region.Contains(Vector::Constant(3, 2.1)));
  EXPECT_FALSE(region.Contains(Vector::Constant(3, -0.1)));
  Vector u(3);
  u << -1.0, 1.0, 5.0;
  EXPECT_EQ(region.Clamp(u), Eigen::Vector3d(0.0, 1.0, 2.0));
}

TEST(ControlScheduleTest, FlatRoundTripAndCellLookup) {
  Matrix values(4, 2);
  values << 0, 1, 2, 3, 4, 5, 6, 7;
  const ControlSchedule s = ControlSchedule::Piecewise(values);
  EXPECT_EQ(ControlSchedule::FromFlat(s.Flat(), 4, 2).values, values);
  EXPECT_EQ(s.AtStep(0, 16), Eigen::Vector2d(0, 1));
  EXPECT_EQ(s.AtStep(4, 16), Eigen::Vector2d(2, 3));
  EXPECT_EQ(s.AtStep(15, 16), Eigen::Vector2d(6, 7));
}

TEST(ProblemSpecTest, ValidateRejectsBadHorizonAndBounds) {
  ProblemSpec spec = testing::TwoRobotSpec();
  spec.horizon = 0.0;
  EXPECT_THROW(spec.Validate(), InvalidArgument);
  spec = testing::TwoRobotSpec();
  spec.controls.upper = Vector::Ones(3);
  EXPECT_THROW(spec.Validate(), InvalidArgument);
}

}  // namespace
}  // namespace sweepctl
