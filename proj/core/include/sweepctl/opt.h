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

#ifndef SWEEPCTL_OPT_H_
#define SWEEPCTL_OPT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sweepctl/model.h"
#include "sweepctl/sweep.h"

namespace sweepctl {

struct OptResult {
  std::string method;
  ControlSchedule schedule;
  double cost = 0.0;
  // Cost of `schedule` re-simulated two refinement levels finer; NaN when
  // not verified.
  double verified_cost = 0.0;
  Trajectory trajectory;
  std::vector<double> log;  // best cost after each iteration
  int evaluations = 0;
  bool budget_exhausted = false;
  double wall_seconds = 0.0;
};

struct SearchOptions {
  int exponent = 9;
  ConstraintFamily family = ConstraintFamily::kCorridor;
  int budget = 4000;       // objective evaluations
  double min_step = 1e-6;  // stop once every step is below min_step * b_i
  double initial_step = 0.25;
};

// Terminal cost 1/2 |x(T)|^2 of the simulated schedule.
double Evaluate(const ProblemSpec& spec, const ControlSchedule& schedule,
                int exponent,
                ConstraintFamily family = ConstraintFamily::kCorridor);

// Exhaustive search over the G^n lattice of constant controls
// {b_i k / (G - 1)}. At most `max_evaluations` lattice points are visited;
// a truncated search is flagged through budget_exhausted.
OptResult GridOracle(const ProblemSpec& spec, int exponent, int density,
                     long long max_evaluations = 2'000'000,
                     ConstraintFamily family = ConstraintFamily::kCorridor);

// Coordinate pattern search with halving steps, projected onto the control
// boxes. The cost log is monotone nonincreasing.
OptResult PatternSearch(const ProblemSpec& spec, const ControlSchedule& init,
                        const SearchOptions& options);

// Projected gradient descent on central finite differences (step 1e-5 b_i)
// with backtracking; falls back to a coordinate poll when the gradient step
// does not decrease the cost.
OptResult FdGradientDescent(const ProblemSpec& spec,
                            const ControlSchedule& init,
                            const SearchOptions& options);

// Finite-difference gradient of Evaluate with respect to the flattened
// schedule, central differences with per-coordinate step rel_step * b_i.
Vector FiniteDifferenceGradient(
    const ProblemSpec& spec, const ControlSchedule& schedule, int exponent,
    double rel_step, ConstraintFamily family = ConstraintFamily::kCorridor);

struct OptimizeOptions {
  SearchOptions search;
  int cells = 1;  // 1: constant controls; K: piecewise on K cells
  int random_starts = 3;
  std::uint64_t seed = 1;
  bool polish = true;  // finish the best start with FdGradientDescent
  bool verify = true;  // re-evaluate at exponent + 2
};

// Multi-start driver: zero, full and random starts, pattern search from
// each, optional gradient polish of the winner.
OptResult Optimize(const ProblemSpec& spec, const OptimizeOptions& options);

}  // namespace sweepctl

#endif  // SWEEPCTL_OPT_H_
