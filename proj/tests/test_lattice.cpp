#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "torusdirac/errors.hpp"
#include "torusdirac/lattice.hpp"
#include "torusdirac/spectrum.hpp"

using namespace torusdirac;
using namespace torusdirac::testing;

namespace {

void check_dual(const LatticeBasis& b, const LatticeBasis& d) {
  CHECK(d.v1.dot(b.v1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(d.v1.dot(b.v2)) < 1e-12);
  CHECK(std::abs(d.v2.dot(b.v1)) < 1e-12);
  CHECK(d.v2.dot(b.v2) == doctest::Approx(1.0).epsilon(1e-12));
}

}  // namespace

TEST_CASE("dual basis examples") {
  const LatticeBasis sq;
  const LatticeBasis d = dual_basis(sq);
  CHECK((d.v1 - Vec2(1, 0)).norm() < 1e-15);
  CHECK((d.v2 - Vec2(0, 1)).norm() < 1e-15);

  const double x = 0.3, y = 1.7;
  const LatticeBasis d2 = dual_basis({{1, 0}, {x, y}});
  CHECK((d2.v1 - Vec2(1, -x / y)).norm() < 1e-14);
  CHECK((d2.v2 - Vec2(0, 1 / y)).norm() < 1e-14);

  const LatticeBasis d3 = dual_basis({{2, 0}, {0, 2}});
  CHECK((d3.v1 - Vec2(0.5, 0)).norm() < 1e-15);
  CHECK((d3.v2 - Vec2(0, 0.5)).norm() < 1e-15);
}

TEST_CASE("dual basis pairs to the identity and is an involution") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const LatticeBasis b = random_basis(rng);
    const LatticeBasis d = dual_basis(b);
    check_dual(b, d);
    const LatticeBasis dd = dual_basis(d);
    CHECK((dd.v1 - b.v1).norm() < 1e-12 * b.v1.norm() * 10);
    CHECK((dd.v2 - b.v2).norm() < 1e-12 * b.v2.norm() * 10);
  }
}

TEST_CASE("degenerate and negatively oriented bases are rejected") {
  CHECK_THROWS_AS(validate({{1, 0}, {2, 0}}), InvalidLattice);
  CHECK_THROWS_AS(validate({{0, 1}, {1, 0}}), InvalidLattice);
  CHECK_THROWS_AS(dual_basis({{1, 1}, {1, 1}}), InvalidLattice);
  CHECK_THROWS_AS(validate({{1, 0}, {0, std::nan("")}}), InvalidLattice);
  CHECK_NOTHROW(validate({{1, 0}, {0.3, 0.01}}));
}

TEST_CASE("spin shift examples") {
  CHECK(spin_shift({}, {0, 0}).norm() == 0.0);
  const double y0 = 0.8;
  CHECK((spin_shift({{1, 0}, {0, y0}}, {0, 1}) - Vec2(0, 1 / (2 * y0))).norm() < 1e-15);
  CHECK((spin_shift({}, {1, 0}) - Vec2(0.5, 0)).norm() < 1e-15);
}

TEST_CASE("spin shift lies in half the dual lattice, in the dual lattice iff trivial") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const LatticeBasis b = random_basis(rng);
    for (int e1 = 0; e1 < 2; ++e1)
      for (int e2 = 0; e2 < 2; ++e2) {
        // coordinates of delta in the dual basis are <delta, v_i>
        const Vec2 delta = spin_shift(b, {e1, e2});
        const double c1 = delta.dot(b.v1), c2 = delta.dot(b.v2);
        CHECK(std::abs(2 * c1 - std::round(2 * c1)) < 1e-12);
        CHECK(std::abs(2 * c2 - std::round(2 * c2)) < 1e-12);
        const bool integral = std::abs(c1 - std::round(c1)) < 1e-12 && std::abs(c2 - std::round(c2)) < 1e-12;
        CHECK(integral == (e1 == 0 && e2 == 0));
      }
  }
}

TEST_CASE("spin character is a homomorphism") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::int64_t> u(-1000, 1000);
  for (int e = 0; e < 4; ++e) {
    const SpinStructure s{e & 1, e >> 1};
    for (int i = 0; i < 500; ++i) {
      const auto a = u(rng), b = u(rng), c = u(rng), d = u(rng);
      CHECK(s.character(a + c, b + d) == s.character(a, b) * s.character(c, d));
    }
    CHECK(s.character(1, 0) == (s.eps1 ? -1 : 1));
    CHECK(s.character(0, 1) == (s.eps2 ? -1 : 1));
  }
}

TEST_CASE("moduli domain membership") {
  CHECK(moduli_contains({0, 1}));
  CHECK(moduli_contains({0, 0.2}));  // 0.04 + 0.25 >= 0.25
  CHECK_FALSE(moduli_contains({0.4, 0.1}));
  CHECK_FALSE(moduli_contains({0.6, 1.0}));
  CHECK_FALSE(moduli_contains({0.0, 0.0}));
  CHECK(moduli_contains({0.5, 0.5}));
  CHECK(moduli_contains({-0.5, 0.01}) == moduli_contains({0.5, 0.01}));
}

TEST_CASE("boundary canonicalization picks x >= 0") {
  const ModuliPoint a = canonicalize({-0.5, 0.7});
  CHECK(a.x == doctest::Approx(0.5));
  CHECK(a.y == doctest::Approx(0.7));
  const double yc = std::sqrt(0.25 - 0.2 * 0.2);  // on the circle |tau + 1/2| = 1/2
  const ModuliPoint b = canonicalize({-0.3, yc});
  CHECK(b.x == doctest::Approx(0.3));
  CHECK(b.y == doctest::Approx(yc));
  const ModuliPoint c = canonicalize({-0.3, 1.0});
  CHECK(c.x == doctest::Approx(-0.3));
}

TEST_CASE("reduction examples") {
  {
    const auto r = reduce_to_moduli({}, {0, 1});
    CHECK(r.point.x == doctest::Approx(0.0));
    CHECK(r.point.y == doctest::Approx(1.0));
    CHECK(r.change.matrix == kIdentityMatrix);
    CHECK(r.change.scale == doctest::Approx(1.0));
  }
  {
    const auto r = reduce_to_moduli({{2, 0}, {0, 2}}, {1, 0});
    CHECK(std::abs(r.point.x) < 1e-12);
    CHECK(r.point.y == doctest::Approx(1.0));
    CHECK(r.change.scale == doctest::Approx(0.5));
  }
  {
    const auto r = reduce_to_moduli({{1, 0}, {0.7, 1.0}}, {0, 1});
    CHECK(r.point.x == doctest::Approx(-0.3));
    CHECK(r.point.y == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(reduce_to_moduli({}, {0, 0}), UnsupportedSpin);
  CHECK_THROWS_AS(reduce_to_moduli({{1, 0}, {1, 0}}, {0, 1}), InvalidLattice);
}

TEST_CASE("reduction is an audited similarity plus unimodular change") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    const LatticeBasis b = random_basis(rng);
    const SpinStructure s = random_nontrivial_spin(rng);
    const auto r = reduce_to_moduli(b, s);
    REQUIRE(moduli_contains(r.point));
    CHECK(determinant(r.change.matrix) == 1);
    CHECK(transform(r.change.matrix, s) == kCanonicalSpin);
    const LatticeBasis c = torusdirac::apply(r.change, b);
    CHECK((c.v1 - Vec2(1, 0)).norm() < 1e-9);
    CHECK((c.v2 - Vec2(r.point.x, r.point.y)).norm() < 1e-9 * std::max(1.0, r.point.y));
    CHECK(rel(normalized_first(canonical_basis(r.point), kCanonicalSpin), normalized_first(b, s)) < 1e-10);
  }
}

TEST_CASE("reduction of boundary points is deterministic") {
  const auto left = reduce_to_moduli({{1, 0}, {-0.5, 0.8}}, {0, 1});
  const auto right = reduce_to_moduli({{1, 0}, {0.5, 0.8}}, {0, 1});
  CHECK(left.point.x == doctest::Approx(0.5));
  CHECK(right.point.x == doctest::Approx(0.5));
  CHECK(left.point.y == doctest::Approx(0.8));
}

TEST_CASE("gauss reduction keeps the lattice and the spin structure") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 200; ++i) {
    const LatticeBasis b = random_basis(rng);
    const SpinStructure s{static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)};
    const ReducedLattice r = gauss_reduce(b, s);
    CHECK(determinant(r.matrix) == 1);
    CHECK(r.basis.area() == doctest::Approx(b.area()).epsilon(1e-10));
    CHECK(r.basis.v1.norm() <= r.basis.v2.norm() * (1 + 1e-12));
    CHECK(std::abs(r.basis.v1.dot(r.basis.v2)) <= 0.5 * r.basis.v1.squaredNorm() * (1 + 1e-12));
    CHECK(r.spin == transform(r.matrix, s));
  }
}
