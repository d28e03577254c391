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

#ifndef SWEEPCTL_GEOMETRY_H_
#define SWEEPCTL_GEOMETRY_H_

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

namespace sweepctl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Default relative activity band: constraint j is active at x when
// <a_j, x> >= c_j - kDefaultActivityTol * (1 + |c_j|).
inline constexpr double kDefaultActivityTol = 1e-9;

// The closed halfspace {x : <normal, x> <= offset}.
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
};

// Intersection of finitely many halfspaces in R^m. Stored row-wise so the
// constraint matrix can be used directly in linear algebra.
class Polyhedron {
 public:
  // The whole space R^dimension (no halfspaces).
  explicit Polyhedron(int dimension);
  // Throws InvalidArgument on a zero normal or dimension mismatch.
  Polyhedron(int dimension, const std::vector<HalfSpace>& halfspaces);
  Polyhedron(Matrix normals, Vector offsets);

  int dimension() const { return static_cast<int>(normals_.cols()); }
  int size() const { return static_cast<int>(normals_.rows()); }
  const Matrix& normals() const { return normals_; }
  const Vector& offsets() const { return offsets_; }
  HalfSpace halfspace(int j) const;

  // <a_j, x> - c_j for every j; nonpositive entries are satisfied.
  Vector Residuals(const Vector& x) const;
  // max_j (<a_j, x> - c_j), or -inf for an empty constraint list.
  double MaxResidual(const Vector& x) const;
  double Band(int j, double eps_act) const;

 private:
  void Validate() const;

  Matrix normals_;
  Vector offsets_;
};

struct ActiveSet {
  std::vector<int> indices;  // sorted, 0-based
  double eps_act = kDefaultActivityTol;

  bool contains(int j) const;
  bool empty() const { return indices.empty(); }
};

// Indices with c_j - band_j <= <a_j, x>. Throws ConstraintViolation when x
// violates some halfspace by more than its band.
ActiveSet ActiveIndices(const Polyhedron& polyhedron, const Vector& x,
                        double eps_act = kDefaultActivityTol);

struct LicqReport {
  bool independent = true;
  int rank = 0;
  int active_count = 0;
};

LicqReport CheckLicq(const Polyhedron& polyhedron, const ActiveSet& active);

enum class ProjectionMethod { kAuto, kEnumeration, kDualActiveSet };

// Subsets are enumerated exhaustively up to this many halfspaces.
inline constexpr int kMaxEnumerationHalfspaces = 12;

struct Projection {
  Vector point;
  Vector multipliers;         // one per halfspace, all >= 0
  std::uint32_t support = 0;  // bitmask of the KKT subset (enumeration only)
};

// Euclidean projection of z onto the polyhedron together with KKT
// multipliers: point = z - sum_j mu_j a_j, mu_j * (c_j - <a_j, point>) = 0.
// `hint` is a subset bitmask tried before the full enumeration.
// Throws Infeasible if no KKT point exists.
Projection ProjectOntoPolyhedron(
    const Polyhedron& polyhedron, const Vector& z,
    ProjectionMethod method = ProjectionMethod::kAuto,
    std::optional<std::uint32_t> hint = std::nullopt);

struct ConeDecomposition {
  Vector eta;             // length s, zero off the active set
  double residual = 0.0;  // || w - sum_j eta_j a_j ||
  bool in_cone = true;
  bool unique = true;  // LICQ holds on the active set
  ActiveSet active;
};

// Nonnegative least squares of w over the normals active at x. Under LICQ
// and a small residual the returned eta is the unique cone representation.
ConeDecomposition DecomposeNormalCone(const Polyhedron& polyhedron,
                                      const Vector& x, const Vector& w,
                                      double eps_act = kDefaultActivityTol,
                                      double tol = 1e-9);

struct DiskGap {
  double value = 0.0;
  Vector gradient;
};

// D_ij(x) = |x^i - x^j| - 2R and its gradient in R^{2n}. Robot indices are
// 0-based. Throws UndefinedGradient for coincident centers.
DiskGap ComputeDiskGap(const Vector& x, int i, int j, double radius);

}  // namespace sweepctl

#endif  // SWEEPCTL_GEOMETRY_H_
