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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace sweepctl {
namespace {

// Solves G_PP z = b_P on the passive set; entries outside P are zero.
Eigen::VectorXd SolvePassive(const Eigen::MatrixXd& gram,
                             const Eigen::VectorXd& b,
                             const std::vector<int>& passive) {
  const int k = static_cast<int>(passive.size());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(b.size());
  if (k == 0) return z;
  Eigen::MatrixXd g(k, k);
  Eigen::VectorXd rhs(k);
  for (int r = 0; r < k; ++r) {
    rhs(r) = b(passive[r]);
    for (int c = 0; c < k; ++c) g(r, c) = gram(passive[r], passive[c]);
  }
  Eigen::VectorXd sub = g.completeOrthogonalDecomposition().solve(rhs);
  for (int r = 0; r < k; ++r) z(passive[r]) = sub(r);
  return z;
}

}  // namespace

NnlsResult SolveNnlsGram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& b,
                         int max_iterations) {
  const int n = static_cast<int>(b.size());
  NnlsResult result;
  result.x = Eigen::VectorXd::Zero(n);
  if (n == 0) return result;
  if (max_iterations <= 0) max_iterations = 3 * n + 30;

  const double scale =
      std::max({1.0, b.cwiseAbs().maxCoeff(), gram.cwiseAbs().maxCoeff()});
  const double tol = 1e-13 * scale;
  std::vector<bool> is_passive(n, false);
  Eigen::VectorXd& x = result.x;

  while (true) {
    Eigen::VectorXd w = b - gram * x;
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j) {
      if (!is_passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    if (++result.iterations > max_iterations) {
      result.converged = false;
      break;
    }
    is_passive[best] = true;

    bool first_pass = true;
    while (true) {
      std::vector<int> passive;
      for (int j = 0; j < n; ++j)
        if (is_passive[j]) passive.push_back(j);
      if (passive.empty()) break;
      Eigen::VectorXd z = SolvePassive(gram, b, passive);
      if (first_pass && z(best) <= 0.0) {
        // The entering coordinate cannot move; the current x is optimal to
        // working precision.
        is_passive[best] = false;
        return result;
      }
      first_pass = false;
      bool all_positive = true;
      for (int j : passive) all_positive = all_positive && z(j) > 0.0;
      if (all_positive) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (int j : passive) {
        if (z(j) <= 0.0) {
          const double denom = x(j) - z(j);
          if (denom > 0.0) alpha = std::min(alpha, x(j) / denom);
        }
      }
      x += alpha * (z - x);
      for (int j : passive) {
        if (x(j) <= 1e-15 * scale) {
          x(j) = 0.0;
          is_passive[j] = false;
        }
      }
    }
  }
  x = x.cwiseMax(0.0);
  return result;
}

}  // namespace sweepctl
