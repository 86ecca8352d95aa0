#ifndef TORUSDIRAC_LATTICE_HPP
#define TORUSDIRAC_LATTICE_HPP

#include <array>
#include <cstdint>

#include <Eigen/Core>

namespace torusdirac {

using Vec2 = Eigen::Vector2d;

// Absolute tolerance for moduli-domain membership and boundary tests.
inline constexpr double kModuliTolerance = 1e-9;

// Oriented basis of a rank-2 lattice in R^2. The torus is R^2 / lattice with
// the euclidean metric.
struct LatticeBasis {
  Vec2 v1{1.0, 0.0};
  Vec2 v2{0.0, 1.0};

  double det() const { return v1.x() * v2.y() - v1.y() * v2.x(); }
  double area() const { return det(); }
};

// Throws InvalidLattice unless det(v1, v2) is positive and not negligible
// against |v1| |v2|.
void validate(const LatticeBasis& basis);

// Holonomy of the spin structure on the basis vectors: eps_i = 1 means the
// spinor changes sign along v_i.
struct SpinStructure {
  int eps1 = 0;
  int eps2 = 0;

  bool trivial() const { return eps1 == 0 && eps2 == 0; }

  // chi(a v1 + b v2) in {-1, +1}.
  int character(std::int64_t a, std::int64_t b) const;

  friend bool operator==(const SpinStructure&, const SpinStructure&) = default;
};

// Coordinates (x, y) of the canonical basis ((1,0), (x,y)) with parities (0,1).
struct ModuliPoint {
  double x = 0.0;
  double y = 1.0;
};

// Integer basis change: row i gives new basis vector i in terms of the old
// basis, new_i = m[i][0] v1 + m[i][1] v2.
using IntMatrix = std::array<std::array<std::int64_t, 2>, 2>;

inline constexpr IntMatrix kIdentityMatrix{{{1, 0}, {0, 1}}};

IntMatrix multiply(const IntMatrix& lhs, const IntMatrix& rhs);
std::int64_t determinant(const IntMatrix& m);

// Audit trail of reduce_to_moduli: canonical = scale * R(rotation) * (matrix
// applied to the input basis).
struct BasisChange {
  IntMatrix matrix = kIdentityMatrix;
  double rotation = 0.0;
  double scale = 1.0;
};

LatticeBasis apply(const IntMatrix& m, const LatticeBasis& basis);
LatticeBasis apply(const BasisChange& change, const LatticeBasis& basis);

// Parities of the spin structure with respect to the new basis.
SpinStructure transform(const IntMatrix& m, const SpinStructure& spin);

LatticeBasis dual_basis(const LatticeBasis& basis);

// delta = (eps1 d1 + eps2 d2) / 2 for the dual basis (d1, d2). The twisted
// frequencies of the spinor bundle are 2 pi (dual lattice + delta).
Vec2 spin_shift(const LatticeBasis& basis, const SpinStructure& spin);

// Lagrange-Gauss reduction keeping the orientation. Used to keep lattice
// enumerations small; the spin parities follow the basis change.
struct ReducedLattice {
  LatticeBasis basis;
  SpinStructure spin;
  IntMatrix matrix = kIdentityMatrix;
};
ReducedLattice gauss_reduce(const LatticeBasis& basis, const SpinStructure& spin);

struct ModuliReduction {
  ModuliPoint point;
  BasisChange change;
};

// Maps a torus with nontrivial spin structure to its representative in the
// fundamental domain M1 = { |x| <= 1/2, y > 0, y^2 + (|x| - 1/2)^2 >= 1/4 }.
// Boundary points are reported with x >= 0.
ModuliReduction reduce_to_moduli(const LatticeBasis& basis, const SpinStructure& spin);

bool moduli_contains(const ModuliPoint& p, double tolerance = kModuliTolerance);

// Identifies (x, y) ~ (-x, y) on the boundary of M1 by choosing x >= 0.
// Points off the boundary are returned unchanged.
ModuliPoint canonicalize(const ModuliPoint& p, double tolerance = kModuliTolerance);

LatticeBasis canonical_basis(const ModuliPoint& p);
inline constexpr SpinStructure kCanonicalSpin{0, 1};

}  // namespace torusdirac

#endif  // TORUSDIRAC_LATTICE_HPP
