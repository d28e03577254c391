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

#ifndef SWEEPCTL_PMP_H_
#define SWEEPCTL_PMP_H_

#include <array>
#include <string>
#include <vector>

#include "sweepctl/geometry.h"
#include "sweepctl/model.h"
#include "sweepctl/sweep.h"

namespace sweepctl {

// Two-body contact reaction for each consecutive pair under constant
// controls and frozen headings. For a flagged pair the value is the
// nonnegative eta that equalizes the pair's coordinate-sum velocities,
// max(0, <a_j, drift> / |a_j|^2); at 45 or 225 degrees this is
// 1/2 (s_{j+1} u_{j+1} - s_j u_j) |cos theta|. Unflagged pairs get 0.
// Throws MisalignedContact when a flagged pair has different cos(theta).
Vector EtaClosedForm(const ProblemSpec& spec, const Vector& u,
                     const std::vector<bool>& contact);

// Piecewise-constant contact reactions: etas[i] holds on
// [breakpoints[i], breakpoints[i+1]) with the last piece running to T.
struct EtaSchedule {
  std::vector<double> breakpoints;
  std::vector<Vector> etas;

  Vector At(double t) const;
  // Integral of eta over [0, t].
  Vector Integral(double t) const;
};

// Exact reactions for constant controls and frozen headings on the corridor.
// Between contact events each chain of touching robots moves with the
// equal-weight isotonic regression (pool adjacent violators) of its
// coordinate-sum velocities; events are the first roots of the gaps under
// the current velocities.
EtaSchedule ContactEtaSchedule(const ProblemSpec& spec, const Vector& u);

// Newton-Leibniz integration of x' = drift(u) - sum_j eta_j(t) a_j sampled
// on the grid 2^exponent. Cell etas are cell averages. Throws
// OrderingError for negative or decreasing breakpoints.
Trajectory TrajectoryClosedForm(const ProblemSpec& spec, const Vector& u,
                                const EtaSchedule& eta, int exponent);

// Convenience: ContactEtaSchedule followed by TrajectoryClosedForm.
Trajectory TrajectoryClosedForm(const ProblemSpec& spec, const Vector& u,
                                int exponent);

// Multipliers and adjoint arcs for a candidate (x, u) on the corridor.
struct Certificate {
  double lambda = 1.0;
  Matrix p;           // (N+1) x 2n
  Matrix q;           // (N+1) x 2n, q_k = p_k - sum_{i >= k} gamma_i a
  Matrix gamma;       // (N+1) x (n-1) signed atoms at grid nodes
  Matrix gamma_pos;   // nonnegative part kept off int(E_0)
  Matrix gamma_zero;  // remainder, gamma = gamma_pos + gamma_zero
  Vector eta_terminal;
  double activity_tol = kDefaultActivityTol;
  bool eta_unique = true;
};

struct AdjointOptions {
  double lambda = 1.0;
  // Relative band used to decide which corridor constraints are active.
  double activity_tol = kDefaultActivityTol;
};

// Backward construction: transversality fixes p(T), the discrete adjoint
// p_k = p_{k+1} + h (d drift/dx)' q_{k+1} propagates it, and an atom is
// placed at every node where constraints are active so that <a_j, q_k> = 0
// for active j. Requires a corridor trajectory.
Certificate AdjointBackward(const ProblemSpec& spec, const Trajectory& traj,
                            const AdjointOptions& options = {});

// Per cell: max_{u in U} <psi, u> - <psi, u_k> with
// psi = (d drift/du)' q on the cell.
Vector MaximizationResidual(const ProblemSpec& spec, const Trajectory& traj,
                            const Certificate& cert);

struct ConditionReport {
  static constexpr int kConditions = 9;
  std::array<double, kConditions> residual{};
  std::array<bool, kConditions> pass{};
  double tolerance = 0.0;
  bool nontrivial = false;
  bool eta_unique = true;

  bool all_pass() const;
  // Flat "key = value" text block.
  std::string ToText() const;
};

// Residual tolerance for a grid step: max(1e-8, 10 h).
double CertificationTolerance(double h);

// Audits (traj, cert) against the nine necessary conditions. Throws
// GridMismatch when the certificate was built on a different grid.
ConditionReport Certify(const ProblemSpec& spec, const Trajectory& traj,
                        const Certificate& cert, double tol);

}  // namespace sweepctl

#endif  // SWEEPCTL_PMP_H_
