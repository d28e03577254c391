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

#include "sweepctl/sweep.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "sweepctl/errors.h"

namespace sweepctl {

Grid MakeGrid(double horizon, int exponent) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (exponent < 0 || exponent > 24) {
    throw InvalidArgument("grid exponent must lie in [0, 24]");
  }
  return Grid{horizon, exponent};
}

double MinDiskGap(const Vector& x, double radius) {
  const int n = static_cast<int>(x.size() / 2);
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      gap = std::min(gap, (x.segment<2>(2 * i) - x.segment<2>(2 * j)).norm() -
                              2.0 * radius);
    }
  }
  return gap;
}

double FamilyViolation(const ProblemSpec& spec, const Vector& x,
                       ConstraintFamily family) {
  if (spec.robots() < 2) return -std::numeric_limits<double>::infinity();
  if (family == ConstraintFamily::kCorridor) {
    return CorridorPolyhedron(spec.fleet).MaxResidual(x);
  }
  return -MinDiskGap(x, spec.fleet.radius());
}

namespace {

struct PairConstraint {
  int i;
  int j;
  HalfSpace velocity;  // in velocity space
};

std::vector<PairConstraint> DiskVelocityPairs(const ProblemSpec& spec,
                                              const Vector& x, double h,
                                              double prune_gap) {
  const int n = spec.robots();
  std::vector<PairConstraint> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const DiskGap gap = ComputeDiskGap(x, i, j, spec.fleet.radius());
      if (gap.value >= prune_gap) continue;
      pairs.push_back({i, j, HalfSpace{-h * gap.gradient, gap.value}});
    }
  }
  return pairs;
}

Polyhedron PairsToPolyhedron(int dim, const std::vector<PairConstraint>& p) {
  std::vector<HalfSpace> hs;
  hs.reserve(p.size());
  for (const auto& c : p) hs.push_back(c.velocity);
  return Polyhedron(dim, hs);
}

StepResult CorridorStep(const ProblemSpec& spec, const Vector& x,
                        const Vector& u, double h,
                        std::optional<std::uint32_t> hint) {
  const int n = spec.robots();
  const Vector drift = Drift(spec, x, u);
  const Polyhedron velocity =
      VelocityConstraints(spec, x, h, ConstraintFamily::kCorridor);
  const Projection proj =
      ProjectOntoPolyhedron(velocity, drift, ProjectionMethod::kAuto, hint);
  StepResult out;
  out.velocity = proj.point;
  out.next_state = x + h * proj.point;
  out.support = proj.support;
  out.eta = Vector::Zero(std::max(n - 1, 0));
  if (n >= 2 && proj.multipliers.size() > 0 &&
      proj.multipliers.maxCoeff() > 0.0) {
    const ConeDecomposition cone = DecomposeNormalCone(
        CorridorPolyhedron(spec.fleet), out.next_state, drift - proj.point);
    out.eta = cone.eta;
  }
  return out;
}

StepResult DiskStep(const ProblemSpec& spec, const Vector& x, const Vector& u,
                    double h) {
  const int n = spec.robots();
  const Vector drift = Drift(spec, x, u);
  double max_speed = 0.0;
  for (int i = 0; i < n; ++i) {
    max_speed = std::max(max_speed, spec.fleet.robot(i).speed);
  }
  const double max_control = n > 0 ? spec.controls.upper.maxCoeff() : 0.0;
  const double prune_gap = 4.0 * max_speed * max_control * h;

  auto solve = [&](double gap_limit) {
    std::vector<PairConstraint> pairs =
        DiskVelocityPairs(spec, x, h, gap_limit);
    Projection proj =
        ProjectOntoPolyhedron(PairsToPolyhedron(2 * n, pairs), drift);
    return std::make_pair(std::move(pairs), std::move(proj));
  };
  auto [pairs, proj] = solve(prune_gap);
  // Pruned pairs must be slack at the projected velocity; otherwise redo the
  // projection with every pair.
  const std::vector<PairConstraint> all =
      DiskVelocityPairs(spec, x, h, std::numeric_limits<double>::infinity());
  if (all.size() != pairs.size()) {
    for (const auto& c : all) {
      if (c.velocity.normal.dot(proj.point) > c.velocity.offset + 1e-12) {
        std::tie(pairs, proj) = solve(std::numeric_limits<double>::infinity());
        break;
      }
    }
  }
  StepResult out;
  out.velocity = proj.point;
  out.next_state = x + h * proj.point;
  out.eta = Vector::Zero(std::max(n - 1, 0));
  for (size_t p = 0; p < pairs.size(); ++p) {
    if (pairs[p].j == pairs[p].i + 1) {
      out.eta(pairs[p].i) = h * proj.multipliers(static_cast<int>(p));
    }
  }
  return out;
}

}  // namespace

Polyhedron VelocityConstraints(const ProblemSpec& spec, const Vector& x,
                               double h, ConstraintFamily family) {
  const int n = spec.robots();
  if (n < 2) return Polyhedron(2 * n);
  if (family == ConstraintFamily::kCorridor) {
    const Polyhedron corridor = CorridorPolyhedron(spec.fleet);
    return Polyhedron(h * corridor.normals(),
                      corridor.offsets() - corridor.normals() * x);
  }
  return PairsToPolyhedron(
      2 * n,
      DiskVelocityPairs(spec, x, h, std::numeric_limits<double>::infinity()));
}

Polyhedron LinearizedStateSet(const ProblemSpec& spec, const Vector& x,
                              ConstraintFamily family) {
  const int n = spec.robots();
  if (n < 2) return Polyhedron(2 * n);
  if (family == ConstraintFamily::kCorridor) {
    return CorridorPolyhedron(spec.fleet);
  }
  std::vector<HalfSpace> hs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const DiskGap gap = ComputeDiskGap(x, i, j, spec.fleet.radius());
      hs.push_back({-gap.gradient, gap.value - gap.gradient.dot(x)});
    }
  }
  return Polyhedron(2 * n, hs);
}

StepResult CatchingUpStep(const ProblemSpec& spec, const Vector& x,
                          const Vector& u, double h, ConstraintFamily family,
                          std::optional<std::uint32_t> hint) {
  if (family == ConstraintFamily::kCorridor || spec.robots() < 2) {
    return CorridorStep(spec, x, u, h, hint);
  }
  return DiskStep(spec, x, u, h);
}

Vector StateProjectionStep(const ProblemSpec& spec, const Vector& x,
                           const Vector& u, double h, ConstraintFamily family) {
  const Polyhedron k_set = LinearizedStateSet(spec, x, family);
  return ProjectOntoPolyhedron(k_set, x + h * Drift(spec, x, u)).point;
}

Trajectory Simulate(const ProblemSpec& spec, const ControlSchedule& schedule,
                    int exponent, ConstraintFamily family) {
  spec.Validate();
  const Grid grid = MakeGrid(spec.horizon, exponent);
  const int n = spec.robots();
  const int steps = grid.steps();
  if (schedule.robots() != n) {
    throw InvalidArgument("schedule does not match the fleet size");
  }
  if (schedule.cells() < 1 || schedule.cells() > steps ||
      steps % schedule.cells() != 0) {
    throw InvalidArgument("schedule cells must divide the number of steps");
  }
  for (int k = 0; k < schedule.cells(); ++k) {
    if (!spec.controls.Contains(schedule.values.row(k).transpose(), 1e-12)) {
      throw InvalidArgument("schedule leaves the control region in cell " +
                            std::to_string(k));
    }
  }
  const Vector x0 = spec.fleet.InitialState();
  const double tol = kDefaultActivityTol * (1.0 + 2.0 * spec.fleet.radius());
  const double v0 = FamilyViolation(spec, x0, family);
  if (v0 > tol) {
    std::ostringstream msg;
    msg << "initial state is outside the admissible set (violation " << v0
        << ")";
    throw InvalidArgument(msg.str());
  }

  Trajectory traj;
  traj.grid = grid;
  traj.family = family;
  traj.states.resize(steps + 1, 2 * n);
  traj.controls.resize(steps, n);
  traj.etas.resize(steps, std::max(n - 1, 0));
  traj.velocities.resize(steps, 2 * n);
  traj.violation.resize(steps + 1);
  traj.states.row(0) = x0.transpose();
  traj.violation(0) = v0;

  const double h = grid.step();
  Vector x = x0;
  std::optional<std::uint32_t> hint;
  for (int k = 0; k < steps; ++k) {
    const Vector u = schedule.AtStep(k, steps);
    StepResult step;
    try {
      step = CatchingUpStep(spec, x, u, h, family, hint);
    } catch (const Error& e) {
      throw StepFailure("step " + std::to_string(k) + ": " + e.what(), k, x);
    }
    if (!step.next_state.allFinite()) {
      throw StepFailure("step " + std::to_string(k) + ": non-finite state", k,
                        x);
    }
    const double violation = FamilyViolation(spec, step.next_state, family);
    if (family == ConstraintFamily::kCorridor && violation > tol) {
      std::ostringstream msg;
      msg << "step " << k << ": corridor violated by " << violation;
      throw StepFailure(msg.str(), k, x);
    }
    hint = step.support;
    x = step.next_state;
    traj.controls.row(k) = u.transpose();
    traj.velocities.row(k) = step.velocity.transpose();
    traj.etas.row(k) = step.eta.transpose();
    traj.states.row(k + 1) = x.transpose();
    traj.violation(k + 1) = violation;
  }
  return traj;
}

double SupNormDistance(const Trajectory& coarse, const Trajectory& fine) {
  if (coarse.grid.horizon != fine.grid.horizon ||
      fine.grid.exponent < coarse.grid.exponent ||
      coarse.states.cols() != fine.states.cols()) {
    throw GridMismatch("trajectories are not on nested grids");
  }
  const int ratio = 1 << (fine.grid.exponent - coarse.grid.exponent);
  double dist = 0.0;
  for (int k = 0; k <= coarse.grid.steps(); ++k) {
    dist = std::max(dist, (coarse.states.row(k) - fine.states.row(k * ratio))
                              .cwiseAbs()
                              .maxCoeff());
  }
  return dist;
}

}  // namespace sweepctl
