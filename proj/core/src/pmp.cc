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

#include "sweepctl/pmp.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "sweepctl/errors.h"

namespace sweepctl {
namespace {

Vector FrozenDrift(const ProblemSpec& spec, const Vector& u) {
  ProblemSpec frozen = spec;
  frozen.theta_mode = ThetaMode::kFrozen;
  return Drift(frozen, spec.fleet.InitialState(), u);
}

// Equal-weight isotonic regression (nondecreasing) by pooling adjacent
// violators.
std::vector<double> PoolAdjacentViolators(const std::vector<double>& w) {
  std::vector<double> mean;
  std::vector<int> count;
  for (double v : w) {
    mean.push_back(v);
    count.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const int c = count.back() + count[count.size() - 2];
      const double m = (mean.back() * count.back() +
                        mean[mean.size() - 2] * count[count.size() - 2]) /
                       c;
      mean.pop_back();
      count.pop_back();
      mean.back() = m;
      count.back() = c;
    }
  }
  std::vector<double> out;
  out.reserve(w.size());
  for (size_t b = 0; b < mean.size(); ++b) {
    out.insert(out.end(), count[b], mean[b]);
  }
  return out;
}

std::vector<int> ActiveAt(const Polyhedron& poly, const Vector& x,
                          double eps_act) {
  std::vector<int> active;
  const Vector r = poly.Residuals(x);
  for (int j = 0; j < poly.size(); ++j) {
    if (r(j) >= -poly.Band(j, eps_act)) active.push_back(j);
  }
  return active;
}

}  // namespace

Vector EtaClosedForm(const ProblemSpec& spec, const Vector& u,
                     const std::vector<bool>& contact) {
  const int n = spec.robots();
  if (n < 2) throw InvalidFleet("contact reactions need n >= 2 robots");
  if (static_cast<int>(contact.size()) != n - 1 || u.size() != n) {
    throw InvalidArgument("contact flags or controls have the wrong size");
  }
  const Polyhedron corridor = CorridorPolyhedron(spec.fleet);
  const Vector g = FrozenDrift(spec, u);
  Vector eta = Vector::Zero(n - 1);
  for (int j = 0; j < n - 1; ++j) {
    if (!contact[j]) continue;
    const double c0 = std::cos(spec.fleet.robot(j).theta0);
    const double c1 = std::cos(spec.fleet.robot(j + 1).theta0);
    if (std::abs(c0 - c1) > 1e-12) {
      throw MisalignedContact("pair " + std::to_string(j) +
                              " is in contact with different headings");
    }
    const Vector a = corridor.normals().row(j).transpose();
    eta(j) = std::max(0.0, a.dot(g) / a.squaredNorm());
  }
  return eta;
}

Vector EtaSchedule::At(double t) const {
  Vector out;
  for (size_t i = 0; i < breakpoints.size(); ++i) {
    if (breakpoints[i] <= t) out = etas[i];
  }
  if (out.size() == 0 && !etas.empty()) out = Vector::Zero(etas[0].size());
  return out;
}

Vector EtaSchedule::Integral(double t) const {
  if (etas.empty()) return Vector();
  Vector total = Vector::Zero(etas[0].size());
  for (size_t i = 0; i < breakpoints.size(); ++i) {
    const double start = breakpoints[i];
    const double end = i + 1 < breakpoints.size()
                           ? breakpoints[i + 1]
                           : std::numeric_limits<double>::infinity();
    const double overlap = std::min(end, t) - start;
    if (overlap > 0.0) total += overlap * etas[i];
  }
  return total;
}

EtaSchedule ContactEtaSchedule(const ProblemSpec& spec, const Vector& u) {
  spec.Validate();
  const int n = spec.robots();
  EtaSchedule schedule;
  if (n < 2) return schedule;
  const double sigma = CorridorOrientation(spec.fleet);
  const double two_r = 2.0 * spec.fleet.radius();
  const Vector g = FrozenDrift(spec, u);
  const Vector x0 = spec.fleet.InitialState();

  std::vector<double> sums(n), free_rate(n);
  for (int i = 0; i < n; ++i) {
    sums[i] = sigma * (x0(2 * i) + x0(2 * i + 1));
    free_rate[i] = sigma * (g(2 * i) + g(2 * i + 1));
  }
  double scale = 1.0 + two_r;
  for (double s : sums) scale = std::max(scale, std::abs(s));
  const double gap_tol = 1e-12 * scale;

  double t = 0.0;
  const int max_events = 10 * n * n + 100;
  for (int event = 0; t < spec.horizon; ++event) {
    if (event > max_events) {
      throw Error("contact event loop did not terminate");
    }
    std::vector<bool> active(n - 1);
    for (int j = 0; j < n - 1; ++j) {
      const double gap = sums[j + 1] - sums[j] - two_r;
      if (gap < -1e-9 * scale) {
        throw InvalidArgument("initial state is outside the corridor");
      }
      active[j] = gap <= gap_tol;
    }
    std::vector<double> rate = free_rate;
    Vector eta = Vector::Zero(n - 1);
    int start = 0;
    while (start < n) {
      int end = start;
      while (end < n - 1 && active[end]) ++end;
      if (end > start) {
        std::vector<double> chain(free_rate.begin() + start,
                                  free_rate.begin() + end + 1);
        const std::vector<double> pooled = PoolAdjacentViolators(chain);
        double flux = 0.0;
        for (int i = start; i <= end; ++i) {
          rate[i] = pooled[i - start];
          if (i < end) {
            flux -= 0.5 * (rate[i] - free_rate[i]);
            eta(i) = std::max(flux, 0.0);
          }
        }
      }
      start = end + 1;
    }
    double dt = spec.horizon - t;
    int hit = -1;
    for (int j = 0; j < n - 1; ++j) {
      const double closing = rate[j] - rate[j + 1];
      if (active[j] || closing <= 0.0) continue;
      const double gap = sums[j + 1] - sums[j] - two_r;
      if (gap / closing < dt) {
        dt = gap / closing;
        hit = j;
      }
    }
    schedule.breakpoints.push_back(t);
    schedule.etas.push_back(eta);
    for (int i = 0; i < n; ++i) sums[i] += dt * rate[i];
    if (hit >= 0) sums[hit + 1] = sums[hit] + two_r;
    t += dt;
  }
  return schedule;
}

Trajectory TrajectoryClosedForm(const ProblemSpec& spec, const Vector& u,
                                const EtaSchedule& eta, int exponent) {
  spec.Validate();
  const int n = spec.robots();
  for (size_t i = 0; i < eta.breakpoints.size(); ++i) {
    if (eta.breakpoints[i] < 0.0 ||
        (i > 0 && eta.breakpoints[i] < eta.breakpoints[i - 1])) {
      throw OrderingError("contact times must be nonnegative and ordered");
    }
    if (eta.etas[i].size() != std::max(n - 1, 0)) {
      throw InvalidArgument("eta piece has the wrong size");
    }
  }
  if (eta.breakpoints.size() != eta.etas.size()) {
    throw InvalidArgument("eta schedule is malformed");
  }
  const Grid grid = MakeGrid(spec.horizon, exponent);
  const int steps = grid.steps();
  const Vector x0 = spec.fleet.InitialState();
  const Vector g = FrozenDrift(spec, u);
  const Polyhedron corridor = CorridorOrEmpty(spec.fleet);
  const Matrix& a = corridor.normals();
  const int s = corridor.size();

  Trajectory traj;
  traj.grid = grid;
  traj.family = ConstraintFamily::kCorridor;
  traj.states.resize(steps + 1, 2 * n);
  traj.controls.resize(steps, n);
  traj.etas = Matrix::Zero(steps, s);
  traj.velocities.resize(steps, 2 * n);
  traj.violation.resize(steps + 1);

  auto integral = [&](double t) {
    return eta.etas.empty() ? Vector(Vector::Zero(s)) : eta.Integral(t);
  };
  Vector prev_integral = Vector::Zero(s);
  for (int k = 0; k <= steps; ++k) {
    const double t = grid.time(k);
    const Vector acc = integral(t);
    Vector x = x0 + t * g;
    if (s > 0) x -= a.transpose() * acc;
    traj.states.row(k) = x.transpose();
    traj.violation(k) = FamilyViolation(spec, x, ConstraintFamily::kCorridor);
    if (k > 0) {
      traj.etas.row(k - 1) = ((acc - prev_integral) / grid.step()).transpose();
      traj.velocities.row(k - 1) =
          (traj.states.row(k) - traj.states.row(k - 1)) / grid.step();
      traj.controls.row(k - 1) = u.transpose();
    }
    prev_integral = acc;
  }
  return traj;
}

Trajectory TrajectoryClosedForm(const ProblemSpec& spec, const Vector& u,
                                int exponent) {
  return TrajectoryClosedForm(spec, u, ContactEtaSchedule(spec, u), exponent);
}

Certificate AdjointBackward(const ProblemSpec& spec, const Trajectory& traj,
                            const AdjointOptions& options) {
  if (traj.family != ConstraintFamily::kCorridor) {
    throw InvalidArgument("certificates are built on the corridor polyhedron");
  }
  const int n = spec.robots();
  const int steps = traj.steps();
  if (traj.states.cols() != 2 * n || traj.grid.steps() != steps) {
    throw GridMismatch("trajectory does not match the problem");
  }
  const Polyhedron corridor = CorridorOrEmpty(spec.fleet);
  const Matrix& a = corridor.normals();
  const int s = corridor.size();
  const double h = traj.grid.step();

  Certificate cert;
  cert.lambda = options.lambda;
  cert.activity_tol = options.activity_tol;
  cert.p.resize(steps + 1, 2 * n);
  cert.q.resize(steps + 1, 2 * n);
  cert.gamma = Matrix::Zero(steps + 1, s);

  const Vector x_terminal = traj.final_state();
  const std::vector<int> active_terminal =
      ActiveAt(corridor, x_terminal, options.activity_tol);
  cert.eta_terminal = Vector::Zero(s);
  if (steps > 0) {
    for (int j : active_terminal) {
      cert.eta_terminal(j) = std::max(traj.etas(steps - 1, j), 0.0);
    }
  }

  Vector p = -cert.lambda * x_terminal;
  if (s > 0) p -= a.transpose() * cert.eta_terminal;
  Vector cumulative = Vector::Zero(s);  // gamma([t_k, T])
  Vector q_next;
  for (int k = steps; k >= 0; --k) {
    if (k < steps) {
      p += h *
           DriftStateJacobian(spec, traj.state(k),
                              traj.controls.row(k).transpose())
               .transpose() *
           q_next;
    }
    const Vector previous = cumulative;
    const std::vector<int> active =
        ActiveAt(corridor, traj.state(k), options.activity_tol);
    if (!active.empty()) {
      const int m = static_cast<int>(active.size());
      Matrix a_act(m, 2 * n);
      for (int r = 0; r < m; ++r) a_act.row(r) = a.row(active[r]);
      Vector others = cumulative;
      for (int j : active) others(j) = 0.0;
      const Vector target = a_act * (p - a.transpose() * others);
      const Matrix gram = a_act * a_act.transpose();
      auto cod = gram.completeOrthogonalDecomposition();
      if (cod.rank() < m) cert.eta_unique = false;
      const Vector sol = cod.solve(target);
      for (int r = 0; r < m; ++r) cumulative(active[r]) = sol(r);
    }
    Vector q = p;
    if (s > 0) q -= a.transpose() * cumulative;
    cert.p.row(k) = p.transpose();
    cert.q.row(k) = q.transpose();
    cert.gamma.row(k) = (cumulative - previous).transpose();
    q_next = q;
  }

  // E_0: cells whose right-end active set is nonempty with every active eta
  // strictly positive.
  std::vector<bool> in_e0(steps, false);
  for (int k = 0; k < steps; ++k) {
    const std::vector<int> active =
        ActiveAt(corridor, traj.state(k + 1), options.activity_tol);
    bool all_positive = !active.empty();
    for (int j : active) all_positive = all_positive && traj.etas(k, j) > 0.0;
    in_e0[k] = all_positive;
  }
  cert.gamma_pos = Matrix::Zero(steps + 1, s);
  cert.gamma_zero = Matrix::Zero(steps + 1, s);
  for (int k = 0; k <= steps; ++k) {
    const bool interior = k > 0 && k < steps && in_e0[k - 1] && in_e0[k];
    for (int j = 0; j < s; ++j) {
      const double atom = cert.gamma(k, j);
      if (!interior && atom > 0.0) {
        cert.gamma_pos(k, j) = atom;
      } else {
        cert.gamma_zero(k, j) = atom;
      }
    }
  }
  ActiveSet terminal_set;
  terminal_set.indices = active_terminal;
  terminal_set.eps_act = options.activity_tol;
  cert.eta_unique =
      cert.eta_unique && CheckLicq(corridor, terminal_set).independent;
  return cert;
}

Vector MaximizationResidual(const ProblemSpec& spec, const Trajectory& traj,
                            const Certificate& cert) {
  const int steps = traj.steps();
  Vector residual(steps);
  for (int k = 0; k < steps; ++k) {
    const Matrix b = DriftControlJacobian(spec, traj.state(k));
    const Vector psi = b.transpose() * cert.q.row(k + 1).transpose();
    const Vector u = traj.controls.row(k).transpose();
    double best = 0.0;
    for (int i = 0; i < psi.size(); ++i) {
      best += std::max(psi(i) * spec.controls.upper(i), 0.0);
    }
    residual(k) = std::max(best - psi.dot(u), 0.0);
  }
  return residual;
}

bool ConditionReport::all_pass() const {
  return std::all_of(pass.begin(), pass.end(), [](bool b) { return b; });
}

std::string ConditionReport::ToText() const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "tolerance = " << tolerance << "\n";
  for (int c = 0; c < kConditions; ++c) {
    out << "condition_" << c + 1 << "_residual = " << residual[c] << "\n";
    out << "condition_" << c + 1 << "_pass = " << (pass[c] ? "true" : "false")
        << "\n";
  }
  out << "nontrivial = " << (nontrivial ? "true" : "false") << "\n";
  out << "eta_unique = " << (eta_unique ? "true" : "false") << "\n";
  out << "all_pass = " << (all_pass() ? "true" : "false") << "\n";
  return out.str();
}

double CertificationTolerance(double h) { return std::max(1e-8, 10.0 * h); }

ConditionReport Certify(const ProblemSpec& spec, const Trajectory& traj,
                        const Certificate& cert, double tol) {
  const int n = spec.robots();
  const int steps = traj.steps();
  const Polyhedron corridor = CorridorOrEmpty(spec.fleet);
  const Matrix& a = corridor.normals();
  const int s = corridor.size();
  if (cert.p.rows() != steps + 1 || cert.q.rows() != steps + 1 ||
      cert.p.cols() != 2 * n || cert.gamma.rows() != steps + 1 ||
      cert.gamma.cols() != s || traj.etas.cols() != s) {
    throw GridMismatch("certificate and trajectory live on different grids");
  }
  const double h = traj.grid.step();
  const double band = cert.activity_tol;
  ConditionReport report;
  report.tolerance = tol;
  report.eta_unique = cert.eta_unique;
  auto& res = report.residual;
  res.fill(0.0);

  std::vector<std::vector<int>> active(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    active[k] = ActiveAt(corridor, traj.state(k), band);
  }
  auto is_active = [&](int k, int j) {
    return std::find(active[k].begin(), active[k].end(), j) != active[k].end();
  };

  for (int k = 0; k < steps; ++k) {
    const Vector x = traj.state(k);
    const Vector u = traj.controls.row(k).transpose();
    const Vector eta = traj.etas.row(k).transpose();
    const Vector q_cell = cert.q.row(k + 1).transpose();
    // (1) primal arc representation
    Vector rep = (traj.state(k + 1) - x) / h - Drift(spec, x, u);
    if (s > 0) rep += a.transpose() * eta;
    res[0] = std::max(res[0], rep.cwiseAbs().maxCoeff());
    for (int j = 0; j < s; ++j) {
      // (2) slackness and eta >= 0
      res[1] = std::max(res[1], -eta(j));
      if (!is_active(k + 1, j)) res[1] = std::max(res[1], std::abs(eta(j)));
      // (3) eta > 0 => <a_j, q> = 0
      if (eta(j) > tol) {
        res[2] = std::max(res[2], std::abs(a.row(j).dot(q_cell)));
      }
    }
    // (4) adjoint equation
    const Vector dp = (cert.p.row(k + 1) - cert.p.row(k)).transpose() / h +
                      DriftStateJacobian(spec, x, u).transpose() * q_cell;
    res[3] = std::max(res[3], dp.cwiseAbs().maxCoeff());
  }
  for (int j = 0; j < s; ++j) {
    if (!is_active(steps, j)) {
      res[1] = std::max(res[1], std::abs(cert.eta_terminal(j)));
    }
  }

  // (5) q = p - gamma([t, T]) from the stored atoms
  Vector cumulative = Vector::Zero(s);
  for (int k = steps; k >= 0; --k) {
    cumulative += cert.gamma.row(k).transpose();
    Vector q = cert.p.row(k).transpose();
    if (s > 0) q -= a.transpose() * cumulative;
    res[4] =
        std::max(res[4], (q - cert.q.row(k).transpose()).cwiseAbs().maxCoeff());
  }
  if (cert.gamma_pos.rows() == steps + 1 && cert.gamma_pos.cols() == s) {
    res[4] = std::max(
        res[4],
        (cert.gamma - cert.gamma_pos - cert.gamma_zero).cwiseAbs().maxCoeff());
  }

  // (6) maximization
  if (steps > 0) {
    res[5] = MaximizationResidual(spec, traj, cert).maxCoeff();
  }

  // (7) transversality
  const Vector x_terminal = traj.final_state();
  Vector normal_part = Vector::Zero(2 * n);
  for (int j : active[steps]) {
    normal_part += cert.eta_terminal(j) * a.row(j).transpose();
  }
  res[6] =
      (cert.p.row(steps).transpose() + cert.lambda * x_terminal + normal_part)
          .norm();

  // (8) terminal cone membership
  try {
    const ConeDecomposition cone =
        DecomposeNormalCone(corridor, x_terminal, normal_part, band);
    res[7] = cone.residual;
  } catch (const ConstraintViolation& e) {
    res[7] = std::numeric_limits<double>::infinity();
  }
  if (s > 0) res[7] = std::max(res[7], -cert.eta_terminal.minCoeff());

  // (9) support conditions and nontriviality
  std::vector<bool> in_e0(steps, false);
  for (int k = 0; k < steps; ++k) {
    bool all_positive = !active[k + 1].empty();
    for (int j : active[k + 1]) {
      all_positive = all_positive && traj.etas(k, j) > 0.0;
    }
    in_e0[k] = all_positive;
  }
  double total_variation = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const bool interior = k > 0 && k < steps && in_e0[k - 1] && in_e0[k];
    for (int j = 0; j < s; ++j) {
      const double atom = cert.gamma(k, j);
      total_variation += std::abs(atom);
      if (!is_active(k, j)) res[8] += std::abs(atom);
      if (cert.gamma_pos.rows() == steps + 1) {
        res[8] += std::max(-cert.gamma_pos(k, j), 0.0);
        if (interior) res[8] += std::abs(cert.gamma_pos(k, j));
      }
    }
  }
  report.nontrivial = cert.lambda > 0.0 || cert.p.cwiseAbs().maxCoeff() > 0.0 ||
                      total_variation > 0.0;

  for (int c = 0; c < ConditionReport::kConditions; ++c) {
    report.pass[c] = res[c] <= tol;
  }
  report.pass[8] = report.pass[8] && report.nontrivial;
  return report;
}

}  // namespace sweepctl
