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

#include "sweepctl/geometry.h"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "support/fixtures.h"
#include "support/oracles.h"
#include "sweepctl/errors.h"
#include "sweepctl/model.h"

namespace sweepctl {
namespace {

Vector Vec(std::initializer_list<double> values) {
  Vector v(values.size());
  int i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Polyhedron TwoRobotCorridor() {
  return CorridorPolyhedron(testing::TwoRobotSpec().fleet);
}

Polyhedron CorridorOf(int n) {
  std::vector<testing::RobotRow> rows;
  for (int i = 0; i < n; ++i) rows.push_back({3.0 * i, 3.0 * i, 1.0});
  return CorridorPolyhedron(testing::MakeSpec(rows, 1.0, 1.0, 1.0, 45.0).fleet);
}

// Random polyhedron in R^dim with s halfspaces that contains a random point.
Polyhedron RandomPolyhedron(std::mt19937_64& rng, int dim, int s) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vector anchor =
      Vector::NullaryExpr(dim, [&](Eigen::Index) { return normal(rng); });
  Matrix a(s, dim);
  Vector c(s);
  for (int j = 0; j < s; ++j) {
    a.row(j) = Vector::NullaryExpr(dim, [&](Eigen::Index) {
                 return normal(rng);
               }).transpose();
    c(j) = a.row(j).dot(anchor) + unit(rng);
  }
  return Polyhedron(a, c);
}

TEST(ActiveIndicesTest, TwoRobotStartIsOnBoundary) {
  const ActiveSet active = ActiveIndices(TwoRobotCorridor(), Vec({2, 2, 3, 3}));
  EXPECT_EQ(active.indices, std::vector<int>{0});
}

TEST(ActiveIndicesTest, InteriorPointHasNoActiveIndices) {
  EXPECT_TRUE(ActiveIndices(TwoRobotCorridor(), Vec({0, 0, 5, 5})).empty());
  const Polyhedron p = CorridorPolyhedron(
      testing::MakeSpec({{5, 5, 2}, {11, 11, 2}, {16, 16, 1}}, 1.0, 1.0, 1.0,
                        45.0)
          .fleet);
  EXPECT_TRUE(ActiveIndices(p, Vec({5, 5, 11, 11, 16, 16})).empty());
}

TEST(ActiveIndicesTest, ViolationReportsWorstIndex) {
  const Polyhedron p = CorridorOf(3);
  try {
    ActiveIndices(p, Vec({0, 0, 0.5, 0.5, 6, 6}));
    FAIL() << "expected ConstraintViolation";
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.worst_index(), 0);
    EXPECT_NEAR(e.residual(), 1.0, 1e-12);
  }
}

TEST(ActiveIndicesTest, BandScalesWithOffset) {
  const Polyhedron p = TwoRobotCorridor();
  // Residual 1e-9 lies inside eps (1 + |c|) = 3e-9.
  EXPECT_EQ(ActiveIndices(p, Vec({2, 2, 3, 3 + 1e-9})).indices.size(), 1u);
  EXPECT_TRUE(ActiveIndices(p, Vec({2, 2, 3, 3 + 1e-6})).empty());
}

TEST(LicqTest, CorridorSubsetsAreIndependent) {
  for (int n = 2; n <= 6; ++n) {
    const Polyhedron p = CorridorOf(n);
    const int s = n - 1;
    for (unsigned mask = 0; mask < (1u << s); ++mask) {
      ActiveSet active;
      for (int j = 0; j < s; ++j) {
        if (mask & (1u << j)) active.indices.push_back(j);
      }
      const LicqReport report = CheckLicq(p, active);
      EXPECT_TRUE(report.independent);
      // Independent oracle: a Gram determinant bounded away from zero.
      Matrix rows(active.indices.size(), p.dimension());
      for (size_t r = 0; r < active.indices.size(); ++r) {
        rows.row(r) = p.normals().row(active.indices[r]);
      }
      if (rows.rows() > 0) {
        EXPECT_GT((rows * rows.transpose()).determinant(), 1.0);
      }
      EXPECT_EQ(report.rank, static_cast<int>(active.indices.size()));
    }
  }
}

TEST(LicqTest, DuplicatedHalfspaceFails) {
  const Polyhedron p(4, {{Vec({1, 1, -1, -1}), -2}, {Vec({1, 1, -1, -1}), -2}});
  const LicqReport report = CheckLicq(p, ActiveSet{{0, 1}});
  EXPECT_FALSE(report.independent);
  EXPECT_EQ(report.rank, 1);
}

TEST(LicqTest, EmptySetIsVacuouslyIndependent) {
  EXPECT_TRUE(CheckLicq(TwoRobotCorridor(), ActiveSet{}).independent);
}

TEST(ProjectionTest, InteriorPointIsFixed) {
  const Vector z = Vec({0, 0, 5, 5});
  const Projection proj = ProjectOntoPolyhedron(TwoRobotCorridor(), z);
  EXPECT_EQ(proj.point, z);
  EXPECT_EQ(proj.multipliers, Vector::Zero(1));
}

TEST(ProjectionTest, SingleHalfspaceClosedForm) {
  const Polyhedron p = TwoRobotCorridor();
  const Projection proj = ProjectOntoPolyhedron(p, Vector::Zero(4));
  EXPECT_LT((proj.point - Vec({-0.5, -0.5, 0.5, 0.5})).norm(), 1e-14);
  EXPECT_NEAR(proj.multipliers(0), 0.5, 1e-14);
  EXPECT_LT((proj.point - testing::HalfspaceProjection(Vec({1, 1, -1, -1}), -2,
                                                       Vector::Zero(4)))
                .norm(),
            1e-14);
}

TEST(ProjectionTest, MatchesSubsetOracleOnRandomPolyhedra) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 300; ++trial) {
    const int s = 1 + trial % 4;
    const Polyhedron p = RandomPolyhedron(rng, 4, s);
    const Vector z =
        3.0 * Vector::NullaryExpr(4, [&](Eigen::Index) { return normal(rng); });
    const Vector oracle = testing::BruteForceProjection(p, z);
    for (ProjectionMethod method :
         {ProjectionMethod::kEnumeration, ProjectionMethod::kDualActiveSet}) {
      const Projection proj = ProjectOntoPolyhedron(p, z, method);
      EXPECT_LT((proj.point - oracle).norm(), 1e-9) << "trial " << trial;
    }
  }
}

TEST(ProjectionTest, NoSampledFeasiblePointIsCloser) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 40; ++trial) {
    const Polyhedron p = RandomPolyhedron(rng, 4, 4);
    const Vector z =
        2.0 * Vector::NullaryExpr(4, [&](Eigen::Index) { return normal(rng); });
    const Projection proj = ProjectOntoPolyhedron(p, z);
    const double d = (proj.point - z).norm();
    for (int k = 0; k < 2000; ++k) {
      const Vector y =
          proj.point + 0.5 * Vector::NullaryExpr(
                                 4, [&](Eigen::Index) { return normal(rng); });
      if (p.MaxResidual(y) <= 0.0) {
        EXPECT_GE((y - z).norm(), d - 1e-12);
      }
    }
  }
}

TEST(ProjectionTest, KktAndMetricProperties) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const int s = 1 + trial % 6;
    const Polyhedron p = RandomPolyhedron(rng, 5, s);
    auto draw = [&]() {
      return Vector(3.0 * Vector::NullaryExpr(
                              5, [&](Eigen::Index) { return normal(rng); }));
    };
    const Vector z1 = draw();
    const Vector z2 = draw();
    const Projection p1 = ProjectOntoPolyhedron(p, z1);
    const Projection p2 = ProjectOntoPolyhedron(p, z2);
    // Stationarity, sign and complementarity.
    EXPECT_LT(
        (p1.point - (z1 - p.normals().transpose() * p1.multipliers)).norm(),
        1e-10);
    EXPECT_GE(p1.multipliers.minCoeff(), 0.0);
    const Vector slack = p.offsets() - p.normals() * p1.point;
    EXPECT_LT(p1.multipliers.cwiseProduct(slack).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(p.MaxResidual(p1.point), 1e-10);
    // Idempotence and nonexpansiveness.
    EXPECT_LT((ProjectOntoPolyhedron(p, p1.point).point - p1.point).norm(),
              1e-12);
    EXPECT_LE((p1.point - p2.point).norm(), (z1 - z2).norm() + 1e-12);
  }
}

TEST(ProjectionTest, LargeCorridorUsesDualActiveSet) {
  const int n = 20;
  const Polyhedron p = CorridorOf(n);
  ASSERT_GT(p.size(), kMaxEnumerationHalfspaces);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  const Vector z =
      Vector::NullaryExpr(2 * n, [&](Eigen::Index) { return normal(rng); });
  const Projection proj = ProjectOntoPolyhedron(p, z);
  EXPECT_LE(p.MaxResidual(proj.point), 1e-9);
  EXPECT_GE(proj.multipliers.minCoeff(), 0.0);
  EXPECT_LT(
      (proj.point - (z - p.normals().transpose() * proj.multipliers)).norm(),
      1e-9);
  const Vector slack = p.offsets() - p.normals() * proj.point;
  EXPECT_LT(proj.multipliers.cwiseProduct(slack).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ProjectionTest, EmptyPolyhedronIsInfeasible) {
  const Polyhedron p(1, {{Vec({1}), -1}, {Vec({-1}), -1}});
  EXPECT_THROW(ProjectOntoPolyhedron(p, Vec({0})), Infeasible);
  EXPECT_THROW(
      ProjectOntoPolyhedron(p, Vec({0}), ProjectionMethod::kDualActiveSet),
      Infeasible);
}

TEST(NormalConeTest, ZeroVector) {
  const ConeDecomposition cone = DecomposeNormalCone(
      TwoRobotCorridor(), Vec({2, 2, 3, 3}), Vector::Zero(4));
  EXPECT_EQ(cone.eta(0), 0.0);
  EXPECT_EQ(cone.residual, 0.0);
  EXPECT_TRUE(cone.in_cone);
}

TEST(NormalConeTest, MemberOfCone) {
  const ConeDecomposition cone = DecomposeNormalCone(
      TwoRobotCorridor(), Vec({2, 2, 3, 3}), 1.5 * Vec({1, 1, -1, -1}));
  EXPECT_NEAR(cone.eta(0), 1.5, 1e-14);
  EXPECT_NEAR(cone.residual, 0.0, 1e-14);
  EXPECT_TRUE(cone.unique);
}

TEST(NormalConeTest, OppositeDirectionIsNotInCone) {
  const Vector a = Vec({1, 1, -1, -1});
  const ConeDecomposition cone =
      DecomposeNormalCone(TwoRobotCorridor(), Vec({2, 2, 3, 3}), -a);
  EXPECT_EQ(cone.eta(0), 0.0);
  EXPECT_NEAR(cone.residual, 2.0, 1e-14);
  EXPECT_FALSE(cone.in_cone);
  EXPECT_LT((testing::BruteForceNnls(a.transpose(), -a)).norm(), 1e-15);
}

TEST(NormalConeTest, InactiveNormalsCarryNoWeight) {
  const Vector w = Vec({1, 1, -1, -1});
  const ConeDecomposition cone =
      DecomposeNormalCone(TwoRobotCorridor(), Vec({0, 0, 5, 5}), w);
  EXPECT_EQ(cone.eta(0), 0.0);
  EXPECT_FALSE(cone.in_cone);
}

TEST(NormalConeTest, MatchesEnumerationOracleAndResynthesizes) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  for (int n = 2; n <= 6; ++n) {
    const Polyhedron p = CorridorOf(n);
    // Every robot packed against its neighbor: all constraints active.
    Vector x(2 * n);
    for (int i = 0; i < n; ++i) x.segment<2>(2 * i) = Eigen::Vector2d(i, i);
    for (int trial = 0; trial < 30; ++trial) {
      const Vector w =
          Vector::NullaryExpr(2 * n, [&](Eigen::Index) { return normal(rng); });
      const ConeDecomposition cone = DecomposeNormalCone(p, x, w);
      const Vector oracle = testing::BruteForceNnls(p.normals(), w);
      EXPECT_LT((cone.eta - oracle).norm(), 1e-9);
      EXPECT_NEAR((w - p.normals().transpose() * cone.eta).norm(),
                  cone.residual, 1e-12);
      EXPECT_GE(cone.eta.minCoeff(), 0.0);
    }
  }
}

TEST(DiskGapTest, TableOneNeighbors) {
  const DiskGap gap = ComputeDiskGap(Vec({5, 5, 11, 11}), 0, 1, 1.0);
  EXPECT_NEAR(gap.value, 6 * std::sqrt(2.0) - 2, 1e-13);
}

TEST(DiskGapTest, TouchingDisks) {
  const DiskGap gap = ComputeDiskGap(Vec({0, 0, 2, 0}), 0, 1, 1.0);
  EXPECT_EQ(gap.value, 0.0);
  EXPECT_EQ(gap.gradient, Vec({-1, 0, 1, 0}));
}

TEST(DiskGapTest, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x =
        3.0 * Vector::NullaryExpr(6, [&](Eigen::Index) { return normal(rng); });
    const int i = trial % 3;
    const int j = (i + 1 + trial % 2) % 3;
    const DiskGap gap = ComputeDiskGap(x, i, j, 0.7);
    const double eps = 1e-5;
    for (int c = 0; c < 6; ++c) {
      Vector xp = x, xm = x;
      xp(c) += eps;
      xm(c) -= eps;
      const double fd = (ComputeDiskGap(xp, i, j, 0.7).value -
                         ComputeDiskGap(xm, i, j, 0.7).value) /
                        (2 * eps);
      EXPECT_NEAR(gap.gradient(c), fd, 1e-7);
    }
    const Vector step = 1e-4 * Vector::NullaryExpr(6, [&](Eigen::Index) {
                          return normal(rng);
                        });
    const double linear_error =
        std::abs(ComputeDiskGap(x + step, i, j, 0.7).value - gap.value -
                 gap.gradient.dot(step));
    EXPECT_LT(linear_error,
              10 * step.squaredNorm() /
                      (x.segment<2>(2 * i) - x.segment<2>(2 * j)).norm() +
                  1e-15);
  }
}

TEST(DiskGapTest, CoincidentCentersHaveNoGradient) {
  EXPECT_THROW(ComputeDiskGap(Vec({1, 1, 1, 1}), 0, 1, 1.0), UndefinedGradient);
}

TEST(PolyhedronTest, EmptyPolyhedronHasNoResidual) {
  const Polyhedron p(3);
  EXPECT_EQ(p.size(), 0);
  EXPECT_EQ(p.MaxResidual(Vector::Zero(3)),
            -std::numeric_limits<double>::infinity());
}

}  // namespace
}  // namespace sweepctl
