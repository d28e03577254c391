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

#include "sweepctl/geometry.h"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "sweepctl/errors.h"
#include "sweepctl/nnls.h"

namespace sweepctl {

Polyhedron::Polyhedron(int dimension) : normals_(0, dimension), offsets_(0) {}

Polyhedron::Polyhedron(int dimension, const std::vector<HalfSpace>& halfspaces)
    : normals_(static_cast<Eigen::Index>(halfspaces.size()), dimension),
      offsets_(static_cast<Eigen::Index>(halfspaces.size())) {
  for (size_t j = 0; j < halfspaces.size(); ++j) {
    if (halfspaces[j].normal.size() != dimension) {
      throw InvalidArgument("halfspace normal has wrong dimension");
    }
    normals_.row(j) = halfspaces[j].normal.transpose();
    offsets_(j) = halfspaces[j].offset;
  }
  Validate();
}

Polyhedron::Polyhedron(Matrix normals, Vector offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  if (normals_.rows() != offsets_.size()) {
    throw InvalidArgument("normals and offsets disagree in count");
  }
  Validate();
}

void Polyhedron::Validate() const {
  for (int j = 0; j < size(); ++j) {
    if (normals_.row(j).squaredNorm() == 0.0) {
      throw InvalidArgument("halfspace " + std::to_string(j) +
                            " has a zero normal");
    }
  }
}

HalfSpace Polyhedron::halfspace(int j) const {
  return HalfSpace{normals_.row(j).transpose(), offsets_(j)};
}

Vector Polyhedron::Residuals(const Vector& x) const {
  return normals_ * x - offsets_;
}

double Polyhedron::MaxResidual(const Vector& x) const {
  if (size() == 0) return -std::numeric_limits<double>::infinity();
  return Residuals(x).maxCoeff();
}

double Polyhedron::Band(int j, double eps_act) const {
  return eps_act * (1.0 + std::abs(offsets_(j)));
}

bool ActiveSet::contains(int j) const {
  return std::binary_search(indices.begin(), indices.end(), j);
}

ActiveSet ActiveIndices(const Polyhedron& polyhedron, const Vector& x,
                        double eps_act) {
  ActiveSet active;
  active.eps_act = eps_act;
  const Vector r = polyhedron.Residuals(x);
  int worst = -1;
  double worst_excess = 0.0;
  for (int j = 0; j < polyhedron.size(); ++j) {
    const double band = polyhedron.Band(j, eps_act);
    if (r(j) > band && r(j) - band > worst_excess) {
      worst = j;
      worst_excess = r(j) - band;
    }
    if (r(j) >= -band) active.indices.push_back(j);
  }
  if (worst >= 0) {
    std::ostringstream msg;
    msg << "point violates halfspace " << worst << " by " << r(worst);
    throw ConstraintViolation(msg.str(), worst, r(worst));
  }
  return active;
}

LicqReport CheckLicq(const Polyhedron& polyhedron, const ActiveSet& active) {
  LicqReport report;
  report.active_count = static_cast<int>(active.indices.size());
  if (active.indices.empty()) return report;
  Matrix rows(report.active_count, polyhedron.dimension());
  for (int r = 0; r < report.active_count; ++r) {
    rows.row(r) = polyhedron.normals().row(active.indices[r]);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(rows.transpose());
  qr.setThreshold(1e-10);
  report.rank = static_cast<int>(qr.rank());
  report.independent = report.rank == report.active_count;
  return report;
}

namespace {

// Tolerances used to accept a candidate KKT subset.
struct KktTolerance {
  double feasibility;
  double multiplier;
};

// Tries the subset encoded by `mask`. Returns true and fills `out` when the
// subset's equality-constrained projection is a KKT point of the full
// problem.
bool TrySubset(const Polyhedron& poly, const Vector& z, std::uint32_t mask,
               const KktTolerance& tol, Projection& out) {
  const int s = poly.size();
  const int k = std::popcount(mask);
  if (k > poly.dimension()) return false;
  Vector mu = Vector::Zero(s);
  Vector y = z;
  if (k > 0) {
    Matrix a(k, poly.dimension());
    Vector rhs(k);
    std::vector<int> idx;
    idx.reserve(k);
    for (int j = 0; j < s; ++j) {
      if (mask & (1u << j)) {
        a.row(static_cast<Eigen::Index>(idx.size())) = poly.normals().row(j);
        rhs(static_cast<Eigen::Index>(idx.size())) =
            poly.normals().row(j).dot(z) - poly.offsets()(j);
        idx.push_back(j);
      }
    }
    const Matrix gram = a * a.transpose();
    Eigen::LDLT<Matrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
    const Vector d = ldlt.vectorD();
    if (d.minCoeff() <= 1e-12 * d.maxCoeff()) return false;
    const Vector sub = ldlt.solve(rhs);
    for (int r = 0; r < k; ++r) {
      if (sub(r) < -tol.multiplier) return false;
      mu(idx[r]) = std::max(sub(r), 0.0);
    }
    y = z - a.transpose() * sub;
  }
  const Vector r = poly.Residuals(y);
  for (int j = 0; j < s; ++j) {
    if (mask & (1u << j)) continue;
    if (r(j) > tol.feasibility * (1.0 + std::abs(poly.offsets()(j)))) {
      return false;
    }
  }
  out.point = std::move(y);
  out.multipliers = std::move(mu);
  out.support = mask;
  return true;
}

// Next bit pattern with the same popcount (Gosper's hack).
std::uint32_t NextCombination(std::uint32_t v) {
  const std::uint32_t t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

bool Enumerate(const Polyhedron& poly, const Vector& z,
               std::optional<std::uint32_t> hint, const KktTolerance& tol,
               Projection& out) {
  const int s = poly.size();
  if (hint && *hint < (1u << s) && TrySubset(poly, z, *hint, tol, out)) {
    return true;
  }
  const int max_k = std::min(s, poly.dimension());
  for (int k = 0; k <= max_k; ++k) {
    if (k == 0) {
      if (TrySubset(poly, z, 0u, tol, out)) return true;
      continue;
    }
    const std::uint32_t limit = 1u << s;
    for (std::uint32_t mask = (1u << k) - 1; mask < limit;
         mask = NextCombination(mask)) {
      if (TrySubset(poly, z, mask, tol, out)) return true;
    }
  }
  return false;
}

bool DualActiveSet(const Polyhedron& poly, const Vector& z, double feas_tol,
                   Projection& out) {
  const Matrix& a = poly.normals();
  const Matrix gram = a * a.transpose();
  const Vector b = a * z - poly.offsets();
  NnlsResult dual = SolveNnlsGram(gram, b, 20 * poly.size() + 50);
  Vector y = z - a.transpose() * dual.x;
  const Vector r = poly.Residuals(y);
  for (int j = 0; j < poly.size(); ++j) {
    if (r(j) > feas_tol * (1.0 + std::abs(poly.offsets()(j)))) return false;
  }
  out.point = std::move(y);
  out.multipliers = std::move(dual.x);
  out.support = 0;
  return true;
}

}  // namespace

Projection ProjectOntoPolyhedron(const Polyhedron& polyhedron, const Vector& z,
                                 ProjectionMethod method,
                                 std::optional<std::uint32_t> hint) {
  if (z.size() != polyhedron.dimension()) {
    throw InvalidArgument("projection point has wrong dimension");
  }
  Projection out;
  const int s = polyhedron.size();
  if (s == 0) {
    out.point = z;
    out.multipliers = Vector::Zero(0);
    return out;
  }
  if (method == ProjectionMethod::kAuto) {
    method = s <= kMaxEnumerationHalfspaces ? ProjectionMethod::kEnumeration
                                            : ProjectionMethod::kDualActiveSet;
  }
  const double scale = 1.0 + z.cwiseAbs().maxCoeff();
  if (method == ProjectionMethod::kEnumeration) {
    if (s > 31) throw InvalidArgument("too many halfspaces to enumerate");
    if (Enumerate(polyhedron, z, hint, {1e-10 * scale, 1e-10 * scale}, out)) {
      return out;
    }
    // Rounding can reject the true subset on nearly degenerate instances.
    if (Enumerate(polyhedron, z, std::nullopt, {1e-7 * scale, 1e-7 * scale},
                  out)) {
      return out;
    }
  } else if (DualActiveSet(polyhedron, z, 1e-9 * scale, out)) {
    return out;
  }
  throw Infeasible("polyhedron is empty: no KKT point for the projection");
}

ConeDecomposition DecomposeNormalCone(const Polyhedron& polyhedron,
                                      const Vector& x, const Vector& w,
                                      double eps_act, double tol) {
  ConeDecomposition out;
  out.active = ActiveIndices(polyhedron, x, eps_act);
  out.eta = Vector::Zero(polyhedron.size());
  const auto& idx = out.active.indices;
  const int k = static_cast<int>(idx.size());
  if (k > 0) {
    Matrix m(polyhedron.dimension(), k);
    for (int c = 0; c < k; ++c) {
      m.col(c) = polyhedron.normals().row(idx[c]).transpose();
    }
    NnlsResult nnls = SolveNnlsGram(m.transpose() * m, m.transpose() * w);
    for (int c = 0; c < k; ++c) out.eta(idx[c]) = nnls.x(c);
  }
  out.residual = (w - polyhedron.normals().transpose() * out.eta).norm();
  out.in_cone = out.residual <= tol * (1.0 + w.norm());
  out.unique = CheckLicq(polyhedron, out.active).independent;
  return out;
}

DiskGap ComputeDiskGap(const Vector& x, int i, int j, double radius) {
  const int n = static_cast<int>(x.size() / 2);
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw InvalidArgument("disk gap needs two distinct robot indices");
  }
  const Eigen::Vector2d diff = x.segment<2>(2 * i) - x.segment<2>(2 * j);
  const double dist = diff.norm();
  if (dist == 0.0) {
    throw UndefinedGradient("coincident disk centers " + std::to_string(i) +
                            " and " + std::to_string(j));
  }
  DiskGap gap;
  gap.value = dist - 2.0 * radius;
  gap.gradient = Vector::Zero(x.size());
  gap.gradient.segment<2>(2 * i) = diff / dist;
  gap.gradient.segment<2>(2 * j) = -diff / dist;
  return gap;
}

}  // namespace sweepctl
