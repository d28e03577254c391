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

#ifndef SWEEPCTL_NNLS_H_
#define SWEEPCTL_NNLS_H_

#include <Eigen/Core>

namespace sweepctl {

struct NnlsResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = true;
};

// Lawson-Hanson active-set method for min_{x >= 0} 1/2 x'Gx - b'x with G
// symmetric positive semidefinite. With G = M'M and b = M'd this is the
// usual nonnegative least squares min |Mx - d|. Rank-deficient passive
// sets are solved in the minimum-norm sense.
NnlsResult SolveNnlsGram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& b,
                         int max_iterations = 0);

}  // namespace sweepctl

#endif  // SWEEPCTL_NNLS_H_
