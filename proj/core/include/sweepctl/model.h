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

#ifndef SWEEPCTL_MODEL_H_
#define SWEEPCTL_MODEL_H_

#include <Eigen/Core>
#include <vector>

#include "sweepctl/geometry.h"

namespace sweepctl {

// One robot: initial center, speed multiplier and heading angle (radians,
// the angle of the position vector measured from the positive x-axis).
struct RobotSpec {
  Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
  double speed = 1.0;
  double theta0 = 0.0;
};

// Angle of the position vector in [0, 2*pi); zero at the origin.
double PositionAngle(const Eigen::Vector2d& p);

// A fleet of equal disks heading for the origin.
class FleetConfig {
 public:
  // Throws InvalidFleet on an empty fleet, nonpositive speed, negative
  // radius, or theta0 outside [0, 2*pi).
  FleetConfig(std::vector<RobotSpec> robots, double radius);

  int size() const { return static_cast<int>(robots_.size()); }
  const std::vector<RobotSpec>& robots() const { return robots_; }
  const RobotSpec& robot(int i) const { return robots_[i]; }
  double radius() const { return radius_; }
  // Stacked initial state (x^1_1, x^1_2, ..., x^n_1, x^n_2).
  Vector InitialState() const;

 private:
  std::vector<RobotSpec> robots_;
  double radius_;
};

// Per-robot box [0, b_i] on the control magnitude.
struct ControlRegion {
  Vector upper;

  int size() const { return static_cast<int>(upper.size()); }
  bool Contains(const Vector& u, double tol = 0.0) const;
  Vector Clamp(const Vector& u) const;
};

ControlRegion UniformControlRegion(int n, double bound);

enum class ThetaMode {
  kFrozen,    // theta_i(t) = theta_i(0)
  kTracking,  // theta_i(t) recomputed from x^i(t)
};

enum class ConstraintFamily {
  kCorridor,  // coordinate-sum separation polyhedron
  kDisks,     // Euclidean nonoverlap |x^i - x^j| >= 2R
};

struct ProblemSpec {
  FleetConfig fleet;
  ControlRegion controls;
  double horizon = 1.0;
  ThetaMode theta_mode = ThetaMode::kFrozen;

  int robots() const { return fleet.size(); }
  // Throws InvalidArgument when the pieces disagree or horizon <= 0.
  void Validate() const;
};

// Piecewise-constant controls: row k holds the control on the k-th of
// cells() equal subintervals of [0, T].
struct ControlSchedule {
  Matrix values;

  static ControlSchedule Constant(const Vector& u);
  static ControlSchedule Piecewise(Matrix values);

  int cells() const { return static_cast<int>(values.rows()); }
  int robots() const { return static_cast<int>(values.cols()); }
  bool is_constant() const { return cells() == 1; }
  // Control on grid step `step` of a uniform grid with `steps` cells.
  Vector AtStep(int step, int steps) const;
  // Flattened values, cell-major; the inverse of FromFlat.
  Vector Flat() const;
  static ControlSchedule FromFlat(const Vector& flat, int cells, int robots);
};

// Direction of the corridor relative to the robot ordering: +1 when the
// coordinate sums grow with the robot index (fleet in quadrant I), -1 when
// they shrink (fleet in quadrant III).
int CorridorOrientation(const FleetConfig& fleet);

// The n-1 halfspaces <a_j, x> <= -2R with a_j = sigma * (e_j1 + e_j2 -
// e_(j+1)1 - e_(j+1)2), sigma = CorridorOrientation(fleet). Throws
// InvalidFleet for n < 2.
Polyhedron CorridorPolyhedron(const FleetConfig& fleet);

// Constraint set used by the simulator: the corridor for n >= 2 and the
// unconstrained plane for a single robot.
Polyhedron CorridorOrEmpty(const FleetConfig& fleet);

// Heading (cos, sin) of robot i at state x under the spec's theta mode.
// Returns zero in tracking mode when the robot sits on the target.
Eigen::Vector2d Heading(const ProblemSpec& spec, const Vector& x, int i);

// Target-directed drift: block i is -s_i u_i (cos theta_i, sin theta_i).
Vector Drift(const ProblemSpec& spec, const Vector& x, const Vector& u);

// d drift / d u (2n x n). Independent of u.
Matrix DriftControlJacobian(const ProblemSpec& spec, const Vector& x);

// d drift / d x (2n x 2n); identically zero in frozen mode.
Matrix DriftStateJacobian(const ProblemSpec& spec, const Vector& x,
                          const Vector& u);

// 1/2 |x|^2.
double TerminalCost(const Vector& x);

}  // namespace sweepctl

#endif  // SWEEPCTL_MODEL_H_
