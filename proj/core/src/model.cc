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

#include <cmath>
#include <numbers>
#include <string>

#include "sweepctl/errors.h"

namespace sweepctl {

double PositionAngle(const Eigen::Vector2d& p) {
  if (p.isZero(0.0)) return 0.0;
  double angle = std::atan2(p.y(), p.x());
  if (angle < 0.0) angle += 2.0 * std::numbers::pi;
  if (angle >= 2.0 * std::numbers::pi) angle = 0.0;
  return angle;
}

FleetConfig::FleetConfig(std::vector<RobotSpec> robots, double radius)
    : robots_(std::move(robots)), radius_(radius) {
  if (robots_.empty()) throw InvalidFleet("fleet has no robots");
  if (!(radius_ >= 0.0)) throw InvalidFleet("radius must be nonnegative");
  for (size_t i = 0; i < robots_.size(); ++i) {
    const RobotSpec& r = robots_[i];
    if (!(r.speed > 0.0)) {
      throw InvalidFleet("robot " + std::to_string(i) +
                         ": speed must be positive");
    }
    if (!(r.theta0 >= 0.0 && r.theta0 < 2.0 * std::numbers::pi)) {
      throw InvalidFleet("robot " + std::to_string(i) +
                         ": theta0 must lie in [0, 2pi)");
    }
  }
}

Vector FleetConfig::InitialState() const {
  Vector x(2 * size());
  for (int i = 0; i < size(); ++i) x.segment<2>(2 * i) = robots_[i].x0;
  return x;
}

bool ControlRegion::Contains(const Vector& u, double tol) const {
  if (u.size() != upper.size()) return false;
  for (int i = 0; i < u.size(); ++i) {
    if (u(i) < -tol || u(i) > upper(i) + tol) return false;
  }
  return true;
}

Vector ControlRegion::Clamp(const Vector& u) const {
  return u.cwiseMax(0.0).cwiseMin(upper);
}

ControlRegion UniformControlRegion(int n, double bound) {
  return ControlRegion{Vector::Constant(n, bound)};
}

void ProblemSpec::Validate() const {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (controls.size() != fleet.size()) {
    throw InvalidArgument("control bounds do not match the fleet size");
  }
  if ((controls.upper.array() < 0.0).any()) {
    throw InvalidArgument("control bounds must be nonnegative");
  }
}

ControlSchedule ControlSchedule::Constant(const Vector& u) {
  return ControlSchedule{u.transpose()};
}

ControlSchedule ControlSchedule::Piecewise(Matrix values) {
  if (values.rows() < 1) throw InvalidArgument("schedule needs a cell");
  return ControlSchedule{std::move(values)};
}

Vector ControlSchedule::AtStep(int step, int steps) const {
  const int cell =
      static_cast<int>((static_cast<long long>(step) * cells()) / steps);
  return values.row(cell).transpose();
}

Vector ControlSchedule::Flat() const {
  Vector flat(values.size());
  for (int k = 0; k < cells(); ++k) {
    flat.segment(k * robots(), robots()) = values.row(k).transpose();
  }
  return flat;
}

ControlSchedule ControlSchedule::FromFlat(const Vector& flat, int cells,
                                          int robots) {
  Matrix values(cells, robots);
  for (int k = 0; k < cells; ++k) {
    values.row(k) = flat.segment(k * robots, robots).transpose();
  }
  return ControlSchedule{std::move(values)};
}

int CorridorOrientation(const FleetConfig& fleet) {
  if (fleet.size() < 2) return 1;
  const auto sum = [&](int i) {
    return fleet.robot(i).x0.x() + fleet.robot(i).x0.y();
  };
  return sum(fleet.size() - 1) >= sum(0) ? 1 : -1;
}

Polyhedron CorridorPolyhedron(const FleetConfig& fleet) {
  const int n = fleet.size();
  if (n < 2) throw InvalidFleet("corridor needs n >= 2 robots");
  const double sigma = CorridorOrientation(fleet);
  Matrix normals = Matrix::Zero(n - 1, 2 * n);
  for (int j = 0; j < n - 1; ++j) {
    normals(j, 2 * j) = sigma;
    normals(j, 2 * j + 1) = sigma;
    normals(j, 2 * j + 2) = -sigma;
    normals(j, 2 * j + 3) = -sigma;
  }
  return Polyhedron(std::move(normals),
                    Vector::Constant(n - 1, -2.0 * fleet.radius()));
}

Polyhedron CorridorOrEmpty(const FleetConfig& fleet) {
  if (fleet.size() < 2) return Polyhedron(2 * fleet.size());
  return CorridorPolyhedron(fleet);
}

Eigen::Vector2d Heading(const ProblemSpec& spec, const Vector& x, int i) {
  if (spec.theta_mode == ThetaMode::kFrozen) {
    const double theta = spec.fleet.robot(i).theta0;
    return {std::cos(theta), std::sin(theta)};
  }
  const Eigen::Vector2d p = x.segment<2>(2 * i);
  const double r = p.norm();
  if (r == 0.0) return Eigen::Vector2d::Zero();
  return p / r;
}

Vector Drift(const ProblemSpec& spec, const Vector& x, const Vector& u) {
  const int n = spec.robots();
  Vector g(2 * n);
  for (int i = 0; i < n; ++i) {
    g.segment<2>(2 * i) =
        -spec.fleet.robot(i).speed * u(i) * Heading(spec, x, i);
  }
  return g;
}

Matrix DriftControlJacobian(const ProblemSpec& spec, const Vector& x) {
  const int n = spec.robots();
  Matrix b = Matrix::Zero(2 * n, n);
  for (int i = 0; i < n; ++i) {
    b.block<2, 1>(2 * i, i) = -spec.fleet.robot(i).speed * Heading(spec, x, i);
  }
  return b;
}

Matrix DriftStateJacobian(const ProblemSpec& spec, const Vector& x,
                          const Vector& u) {
  const int n = spec.robots();
  Matrix jac = Matrix::Zero(2 * n, 2 * n);
  if (spec.theta_mode == ThetaMode::kFrozen) return jac;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d p = x.segment<2>(2 * i);
    const double r = p.norm();
    if (r == 0.0) continue;
    const Eigen::Vector2d e = p / r;
    // d(p/|p|)/dp = (I - e e') / |p|
    jac.block<2, 2>(2 * i, 2 * i) =
        -spec.fleet.robot(i).speed * u(i) *
        (Eigen::Matrix2d::Identity() - e * e.transpose()) / r;
  }
  return jac;
}

double TerminalCost(const Vector& x) { return 0.5 * x.squaredNorm(); }

}  // namespace sweepctl
