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

#ifndef SWEEPCTL_SWEEP_H_
#define SWEEPCTL_SWEEP_H_

#include <cstdint>
#include <optional>

#include "sweepctl/geometry.h"
#include "sweepctl/model.h"

namespace sweepctl {

// Dyadic grid on [0, T]: 2^exponent cells of width T / 2^exponent.
struct Grid {
  double horizon = 1.0;
  int exponent = 0;

  int steps() const { return 1 << exponent; }
  double step() const { return horizon / steps(); }
  double time(int k) const { return k * step(); }
  bool operator==(const Grid&) const = default;
};

// Throws InvalidArgument unless T > 0 and 0 <= exponent <= 24.
Grid MakeGrid(double horizon, int exponent);

struct Trajectory {
  Grid grid;
  ConstraintFamily family = ConstraintFamily::kCorridor;
  Matrix states;      // (N+1) x 2n
  Matrix controls;    // N x n
  Matrix etas;        // N x (n-1), contact reactions between consecutive robots
  Matrix velocities;  // N x 2n
  Vector violation;   // N+1; max constraint violation (<= 0 when feasible)

  int steps() const { return static_cast<int>(controls.rows()); }
  int robots() const { return static_cast<int>(controls.cols()); }
  Vector state(int k) const { return states.row(k).transpose(); }
  Vector final_state() const {
    return states.row(states.rows() - 1).transpose();
  }
};

// Largest constraint violation of x for the family: max_j(<a_j,x> - c_j) on
// the corridor, max_{i<j}(-D_ij(x)) for disks. Negative means slack.
double FamilyViolation(const ProblemSpec& spec, const Vector& x,
                       ConstraintFamily family);

// Smallest Euclidean disk gap min_{i<j} D_ij(x).
double MinDiskGap(const Vector& x, double radius);

// Admissible velocities at x for one step of size h. Corridor: <h a_j, v> <=
// c_j - <a_j, x>. Disks: one halfspace per pair i<j with normal -h grad D_ij
// and offset D_ij.
Polyhedron VelocityConstraints(const ProblemSpec& spec, const Vector& x,
                               double h, ConstraintFamily family);

// The linearized state set K(x): <a_j, y> <= c_j on the corridor,
// D_ij(x) + <grad D_ij(x), y - x> >= 0 for disks.
Polyhedron LinearizedStateSet(const ProblemSpec& spec, const Vector& x,
                              ConstraintFamily family);

struct StepResult {
  Vector next_state;
  Vector velocity;
  Vector eta;  // n-1 consecutive-pair reactions
  std::uint32_t support = 0;
};

// One catching-up step: V = proj(drift(x,u); V_h(x)), x' = x + h V.
StepResult CatchingUpStep(const ProblemSpec& spec, const Vector& x,
                          const Vector& u, double h, ConstraintFamily family,
                          std::optional<std::uint32_t> hint = std::nullopt);

// The same step written in state space: x' = proj(x + h drift; K(x)).
Vector StateProjectionStep(const ProblemSpec& spec, const Vector& x,
                           const Vector& u, double h, ConstraintFamily family);

// Runs the catching-up scheme on the grid 2^m. Throws InvalidArgument when
// the initial state or the schedule is inadmissible and StepFailure when a
// step cannot be completed.
Trajectory Simulate(const ProblemSpec& spec, const ControlSchedule& schedule,
                    int exponent,
                    ConstraintFamily family = ConstraintFamily::kCorridor);

// Sup-norm distance between two trajectories over the nodes of the coarser
// grid; both must share the horizon.
double SupNormDistance(const Trajectory& coarse, const Trajectory& fine);

}  // namespace sweepctl

#endif  // SWEEPCTL_SWEEP_H_
