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

#include "sweepctl/nnls.h"

#include <gtest/gtest.h>

#include <random>

#include "support/oracles.h"

namespace sweepctl {
namespace {

TEST(NnlsTest, MatchesSupportEnumeration) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 300; ++trial) {
    const int s = 1 + trial % 6;
    const int dim = 2 + trial % 7;
    const Matrix a = Matrix::NullaryExpr(
        s, dim, [&](Eigen::Index, Eigen::Index) { return normal(rng); });
    const Vector w =
        Vector::NullaryExpr(dim, [&](Eigen::Index) { return normal(rng); });
    const NnlsResult result = SolveNnlsGram(a * a.transpose(), a * w);
    ASSERT_TRUE(result.converged);
    const Vector oracle = testing::BruteForceNnls(a, w);
    const double res = (w - a.transpose() * result.x).norm();
    const double res_oracle = (w - a.transpose() * oracle).norm();
    EXPECT_NEAR(res, res_oracle, 1e-9) << "trial " << trial;
    EXPECT_GE(result.x.minCoeff(), 0.0);
  }
}

TEST(NnlsTest, ZeroRightHandSide) {
  const NnlsResult result =
      SolveNnlsGram(Matrix::Identity(3, 3), Vector::Zero(3));
  EXPECT_EQ(result.x, Vector::Zero(3));
}

TEST(NnlsTest, UnconstrainedSolutionWhenNonnegative) {
  Matrix g(2, 2);
  g << 2, 1, 1, 2;
  const Vector b = g * Eigen::Vector2d(0.5, 0.25);
  const NnlsResult result = SolveNnlsGram(g, b);
  EXPECT_LT((result.x - Eigen::Vector2d(0.5, 0.25)).norm(), 1e-13);
}

}  // namespace
}  // namespace sweepctl
