#include "torusdirac/lattice.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "torusdirac/errors.hpp"

namespace torusdirac {

namespace {

constexpr int kMaxReductionSteps = 10000;
// A move is applied only when the violation exceeds this, so that points
// sitting on the boundary do not ping-pong between the two sides.
constexpr double kMoveSlack = 1e-13;

int parity(std::int64_t v) { return static_cast<int>(((v % 2) + 2) % 2); }

// Ratio v2 / v1 as complex numbers; lies in the upper half plane for an
// oriented basis.
std::complex<double> modulus_of(const LatticeBasis& b) {
  const double n1 = b.v1.squaredNorm();
  return {b.v1.dot(b.v2) / n1, b.det() / n1};
}

struct ReductionState {
  LatticeBasis basis;
  SpinStructure spin;
  IntMatrix matrix = kIdentityMatrix;

  void move(const IntMatrix& m) {
    basis = torusdirac::apply(m, basis);
    spin = transform(m, spin);
    matrix = multiply(m, matrix);
  }
};

// Moebius maps of the upper half plane expressed as basis changes. Each keeps
// chi(v1) = +1 and chi(v2) = -1, i.e. is lower-left-even mod 2.
IntMatrix translate(std::int64_t n) { return {{{1, 0}, {-n, 1}}}; }  // tau -> tau - n
constexpr IntMatrix kInvertRight{{{-1, 2}, {-1, 1}}};  // tau -> (tau - 1) / (2 tau - 1)
constexpr IntMatrix kInvertLeft{{{-1, -2}, {1, 1}}};   // tau -> (tau + 1) / (-2 tau - 1)
constexpr IntMatrix kPairCircles{{{1, 2}, {0, 1}}};    // tau -> tau / (2 tau + 1)
constexpr IntMatrix kSwap{{{0, 1}, {-1, 0}}};          // (v1, v2) -> (v2, -v1)

}  // namespace

void validate(const LatticeBasis& basis) {
  const double d = basis.det();
  const double scale = basis.v1.norm() * basis.v2.norm();
  if (!std::isfinite(d) || !std::isfinite(scale) || !(d > 1e-12 * scale)) {
    std::ostringstream os;
    os << "basis (" << basis.v1.x() << "," << basis.v1.y() << "), (" << basis.v2.x() << ","
       << basis.v2.y() << ") is degenerate or negatively oriented (det = " << d << ")";
    throw InvalidLattice(os.str());
  }
}

int SpinStructure::character(std::int64_t a, std::int64_t b) const {
  return parity(a * eps1 + b * eps2) == 0 ? 1 : -1;
}

IntMatrix multiply(const IntMatrix& lhs, const IntMatrix& rhs) {
  IntMatrix out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = lhs[i][0] * rhs[0][j] + lhs[i][1] * rhs[1][j];
  return out;
}

std::int64_t determinant(const IntMatrix& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

LatticeBasis apply(const IntMatrix& m, const LatticeBasis& basis) {
  const auto combine = [&](int row) {
    return Vec2(static_cast<double>(m[row][0]) * basis.v1 +
                static_cast<double>(m[row][1]) * basis.v2);
  };
  return {combine(0), combine(1)};
}

LatticeBasis apply(const BasisChange& change, const LatticeBasis& basis) {
  const LatticeBasis moved = torusdirac::apply(change.matrix, basis);
  Eigen::Matrix2d rot;
  const double c = std::cos(change.rotation), s = std::sin(change.rotation);
  rot << c, -s, s, c;
  return {change.scale * rot * moved.v1, change.scale * rot * moved.v2};
}

SpinStructure transform(const IntMatrix& m, const SpinStructure& spin) {
  return {parity(m[0][0] * spin.eps1 + m[0][1] * spin.eps2),
          parity(m[1][0] * spin.eps1 + m[1][1] * spin.eps2)};
}

LatticeBasis dual_basis(const LatticeBasis& basis) {
  validate(basis);
  const double d = basis.det();
  // Rows of the inverse transpose of [v1 v2].
  return {Vec2(basis.v2.y() / d, -basis.v2.x() / d), Vec2(-basis.v1.y() / d, basis.v1.x() / d)};
}

Vec2 spin_shift(const LatticeBasis& basis, const SpinStructure& spin) {
  const LatticeBasis dual = dual_basis(basis);
  return 0.5 * (spin.eps1 * dual.v1 + spin.eps2 * dual.v2);
}

ReducedLattice gauss_reduce(const LatticeBasis& basis, const SpinStructure& spin) {
  validate(basis);
  ReductionState st{basis, spin};
  for (int step = 0; step < kMaxReductionSteps; ++step) {
    if (st.basis.v2.squaredNorm() < st.basis.v1.squaredNorm()) st.move(kSwap);
    const double mu = st.basis.v1.dot(st.basis.v2) / st.basis.v1.squaredNorm();
    const auto n = static_cast<std::int64_t>(std::llround(mu));
    if (n == 0) {
      if (st.basis.v2.squaredNorm() >= st.basis.v1.squaredNorm()) break;
      continue;
    }
    st.move(translate(n));
    if (st.basis.v2.squaredNorm() >= st.basis.v1.squaredNorm()) break;
  }
  return {st.basis, st.spin, st.matrix};
}

ModuliReduction reduce_to_moduli(const LatticeBasis& basis, const SpinStructure& spin) {
  if (spin.trivial())
    throw UnsupportedSpin("the trivial spin structure has no point in the spin-conformal moduli space");
  const ReducedLattice gauss = gauss_reduce(basis, spin);
  ReductionState st{gauss.basis, gauss.spin, gauss.matrix};

  // Bring the parities to (0, 1).
  if (st.spin.eps1 == 1 && st.spin.eps2 == 1) st.move(translate(1));
  if (st.spin.eps1 == 1 && st.spin.eps2 == 0) st.move(kSwap);

  int step = 0;
  for (; step < kMaxReductionSteps; ++step) {
    const std::complex<double> tau = modulus_of(st.basis);
    if (std::abs(tau.real()) > 0.5 + kMoveSlack) {
      st.move(translate(std::llround(tau.real())));
    } else if (std::norm(tau - 0.5) < 0.25 - kMoveSlack) {
      st.move(kInvertRight);
    } else if (std::norm(tau + 0.5) < 0.25 - kMoveSlack) {
      st.move(kInvertLeft);
    } else {
      break;
    }
  }
  if (step == kMaxReductionSteps)
    throw ReductionFailed("reduction to the moduli domain did not terminate");

  // Boundary identification: keep the x >= 0 representative.
  {
    const std::complex<double> tau = modulus_of(st.basis);
    if (std::abs(tau.real() + 0.5) <= kModuliTolerance) {
      st.move(translate(-1));
    } else if (tau.real() < 0.0 && std::abs(std::norm(tau + 0.5) - 0.25) <= kModuliTolerance) {
      st.move(kPairCircles);
    }
  }

  const std::complex<double> tau = modulus_of(st.basis);
  BasisChange change;
  change.matrix = st.matrix;
  change.rotation = -std::atan2(st.basis.v1.y(), st.basis.v1.x());
  change.scale = 1.0 / st.basis.v1.norm();
  return {{tau.real(), tau.imag()}, change};
}

bool moduli_contains(const ModuliPoint& p, double tolerance) {
  const double ax = std::abs(p.x);
  return ax <= 0.5 + tolerance && p.y > 0.0 &&
         p.y * p.y + (ax - 0.5) * (ax - 0.5) >= 0.25 - tolerance;
}

ModuliPoint canonicalize(const ModuliPoint& p, double tolerance) {
  if (p.x >= 0.0) return p;
  const double ax = std::abs(p.x);
  const bool on_edge = std::abs(ax - 0.5) <= tolerance;
  const bool on_arc = std::abs(p.y * p.y + (ax - 0.5) * (ax - 0.5) - 0.25) <= tolerance;
  return (on_edge || on_arc) ? ModuliPoint{ax, p.y} : p;
}

LatticeBasis canonical_basis(const ModuliPoint& p) { return {Vec2(1.0, 0.0), Vec2(p.x, p.y)}; }

}  // namespace torusdirac
