#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "test_support.hpp"
#include "torusdirac/errors.hpp"
#include "torusdirac/field.hpp"
#include "torusdirac/io.hpp"
#include "torusdirac/spectrum.hpp"

using namespace torusdirac;
using namespace torusdirac::testing;

namespace {

constexpr double kPi = std::numbers::pi;

double max_grid_difference(const GridSamples& a, const GridSamples& b) {
  double m = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t n = 0; n < a.planes[c].size(); ++n) m = std::max(m, std::abs(a.planes[c][n] - b.planes[c][n]));
  return m;
}

// int |psi|^4 = area * sum_k |rho_k|^2, rho_k = sum_{w - v = k} c_v^H c_w the
// Fourier coefficients of |psi|^2 on the integer difference lattice.
double quartic_by_convolution(const SpinorField& f) {
  std::map<std::pair<int, int>, cplx> rho;
  const int n1 = f.window().n1, n2 = f.window().n2;
  for (int a = -n1; a <= n1; ++a)
    for (int b = -n2; b <= n2; ++b)
      for (int c = -n1; c <= n1; ++c)
        for (int d = -n2; d <= n2; ++d)
          rho[{c - a, d - b}] += f.coefficient(a, b).dot(f.coefficient(c, d));
  double s = 0.0;
  for (const auto& [k, v] : rho) s += std::norm(v);
  return f.area() * s;
}

const LatticeBasis kSkew{{1.0, 0.0}, {0.31, 0.77}};

}  // namespace

TEST_CASE("fast synthesis equals direct summation") {
  std::mt19937_64 rng(31);
  for (int e = 0; e < 4; ++e) {
    const SpinorField f = random_field(kSkew, {e & 1, e >> 1}, 4, rng);
    for (const Resolution res : {Resolution{9, 9}, Resolution{20, 27}, default_resolution(f.window())}) {
      const GridSamples fast = synthesize(f, res);
      const GridSamples slow = synthesize_direct(f, res);
      CHECK(max_grid_difference(fast, slow) < 1e-12 * f.coefficients().lpNorm<1>());
      CHECK(fast.cell_area * res.m1 * res.m2 == doctest::Approx(f.area()).epsilon(1e-14));
    }
  }
}

TEST_CASE("single mode has unit modulus everywhere, synthesis is linear") {
  SpinorField f(kSkew, kCanonicalSpin, 3);
  f.set_coefficient(2, -1, Spinor(1, 0));
  const GridSamples g = synthesize(f, Resolution::square(16));
  for (std::size_t n = 0; n < g.resolution.node_count(); ++n) CHECK(std::sqrt(g.norm_sq(n)) == doctest::Approx(1.0));

  std::mt19937_64 rng(32);
  const SpinorField a = random_field(kSkew, kCanonicalSpin, 3, rng);
  const SpinorField b = random_field(kSkew, kCanonicalSpin, 3, rng);
  const GridSamples ga = synthesize(a, Resolution::square(16)), gb = synthesize(b, Resolution::square(16));
  const GridSamples gs = synthesize(a + b, Resolution::square(16));
  double m = 0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t n = 0; n < gs.planes[c].size(); ++n)
      m = std::max(m, std::abs(gs.planes[c][n] - ga.planes[c][n] - gb.planes[c][n]));
  CHECK(m < 1e-12);
}

TEST_CASE("resolution below the mode count is rejected") {
  const SpinorField f(kSkew, kCanonicalSpin, 4);
  CHECK_THROWS_AS(synthesize(f, Resolution::square(8)), ResolutionError);
  CHECK_NOTHROW(synthesize(f, Resolution::square(9)));
  CHECK(default_resolution(ModeWindow::square(4)).m1 >= 4 * 9 + 1);
}

TEST_CASE("twisted periodicity") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_int_distribution<int> k(-5, 5);
  for (int e = 0; e < 4; ++e) {
    const SpinStructure s{e & 1, e >> 1};
    const SpinorField f = random_field(kSkew, s, 3, rng);
    for (int i = 0; i < 30; ++i) {
      const Vec2 p(u(rng), u(rng));
      const int a = k(rng), b = k(rng);
      const Vec2 gamma = a * kSkew.v1 + b * kSkew.v2;
      const Spinor lhs = f.evaluate(p + gamma), rhs = double(s.character(a, b)) * f.evaluate(p);
      CHECK((lhs - rhs).norm() < 1e-10 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST_CASE("Dirac operator is symmetric and squares to |xi|^2") {
  std::mt19937_64 rng(34);
  const SpinorField f = random_field(kSkew, {1, 0}, 4, rng);
  const SpinorField g = random_field(kSkew, {1, 0}, 4, rng);
  const cplx lhs = inner_product(apply_dirac(f), g), rhs = inner_product(f, apply_dirac(g));
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
  const SpinorField dd = apply_dirac(apply_dirac(f));
  for (std::size_t v = 0; v < f.mode_count(); ++v) {
    const double q = f.frequency(v).squaredNorm();
    CHECK(std::abs(dd.coefficients()[2 * v] - q * f.coefficients()[2 * v]) < 1e-10 * std::max(1.0, q));
  }
  const SpinorField zero(kSkew, {1, 0}, 4);
  CHECK(apply_dirac(zero).coefficients().norm() == 0.0);
}

TEST_CASE("flat gradient and Parseval") {
  std::mt19937_64 rng(35);
  const SpinorField f = random_field(kSkew, kCanonicalSpin, 4, rng);
  const auto [d1, d2] = apply_flat_gradient(f);
  double mode_sum = 0.0, mode_l2 = 0.0;
  for (std::size_t v = 0; v < f.mode_count(); ++v) {
    const double c2 = std::norm(f.coefficients()[2 * v]) + std::norm(f.coefficients()[2 * v + 1]);
    mode_sum += f.frequency(v).squaredNorm() * c2;
    mode_l2 += c2;
    const Vec2 xi = f.frequency(v);
    CHECK(std::abs(d1.coefficients()[2 * v] - cplx(0, xi.x()) * f.coefficients()[2 * v]) < 1e-12 * (1 + xi.norm()));
  }
  const Resolution res = Resolution::square(2 * 9);
  const GridSamples g1 = synthesize(d1, res), g2 = synthesize(d2, res);
  double grid_sum = 0.0;
  for (std::size_t n = 0; n < res.node_count(); ++n) grid_sum += (g1.norm_sq(n) + g2.norm_sq(n)) * g1.cell_area;
  CHECK(rel(grid_sum, mode_sum * f.area()) < 1e-10);
  const double l2 = lp_norm(synthesize(f, res), 2.0);
  CHECK(rel(l2 * l2, mode_l2 * f.area()) < 1e-10);
  CHECK(rel(l2 * l2, inner_product(f, f).real()) < 1e-10);
}

TEST_CASE("quartic quadrature is exact at the default resolution") {
  std::mt19937_64 rng(36);
  for (int n = 1; n <= 4; ++n) {
    const SpinorField f = random_field(kSkew, {0, 1}, n, rng);
    const double l4 = lp_norm(synthesize(f), 4.0);
    CHECK(rel(std::pow(l4, 4), quartic_by_convolution(f)) < 1e-10);
  }
}

TEST_CASE("lp norms") {
  SpinorField f({{1, 0}, {0, 2}}, kCanonicalSpin, 2);
  f.set_coefficient(0, 0, Spinor(3, 0));
  const GridSamples g = synthesize(f);
  for (double p : {4.0 / 3.0, 2.0, 4.0}) CHECK(rel(lp_norm(g, p), 3.0 * std::pow(2.0, 1 / p)) < 1e-12);
  CHECK_THROWS_AS(lp_norm(g, 3.0), ParameterError);
  f *= cplx(2.0, 0.0);
  CHECK(rel(lp_norm(synthesize(f), 4.0), 2 * 3.0 * std::pow(2.0, 0.25)) < 1e-12);

  SpinorField e = first_eigenspinor({}, kCanonicalSpin, 2);
  normalize_l4(e, default_resolution(e.window()));
  const GridSamples ge = synthesize(e);
  for (std::size_t n = 0; n < ge.resolution.node_count(); n += 7) CHECK(ge.norm_sq(n) == doctest::Approx(1.0));
}

TEST_CASE("J of the first eigenspinor is pi / sqrt(y)") {
  for (double y : {0.5, 1.0, 2.0, 0.1}) {
    const SpinorField e = first_eigenspinor({{1, 0}, {0, y}}, kCanonicalSpin, 2);
    CHECK(rel(evaluate_J(e), kPi / std::sqrt(y)) < 1e-10);
  }
}

TEST_CASE("J is scale and phase invariant, the pairing is real") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 10; ++i) {
    const SpinorField f = random_field(kSkew, kCanonicalSpin, 3, rng, 0.3);
    const double j = evaluate_J(f);
    CHECK(rel(evaluate_J(cplx(-0.3, 2.1) * f), j) < 1e-10);
    const cplx p = inner_product(apply_dirac(f), f);
    CHECK(std::abs(p.imag()) < 1e-12 * std::abs(p));
    CHECK(rel(dirac_pairing(f), p.real()) < 1e-12);
  }
}

TEST_CASE("equal weights in the +-lambda eigenspaces give a degenerate pairing") {
  const auto spec = dirac_spectrum(kSkew, kCanonicalSpin, 10.0);
  const SpinorField minus = eigenspinor(kSkew, kCanonicalSpin, spec[0], 2);
  const SpinorField plus = eigenspinor(kSkew, kCanonicalSpin, spec[1], 2);
  REQUIRE(spec[0].lambda == -spec[1].lambda);
  CHECK_THROWS_AS(evaluate_J(plus + minus), DegeneratePairing);
}

TEST_CASE("3-fold cover scales J by sqrt 3") {
  std::mt19937_64 rng(38);
  for (int i = 0; i < 5; ++i) {
    const SpinorField f = random_field({{1, 0}, {0.2, 0.6}}, kCanonicalSpin, 3, rng, 0.5);
    const SpinorField lift = lift_to_cover(f, 3);
    CHECK((lift.basis().v2 - 3.0 * f.basis().v2).norm() < 1e-15);
    CHECK(lift.spin() == f.spin());
    const int m = default_resolution(f.window()).m1;
    CHECK(rel(evaluate_J(lift, {m, 3 * m}), std::sqrt(3.0) * evaluate_J(f, {m, m})) < 1e-9);
    for (const Vec2 p : {Vec2(0.1, 0.2), Vec2(-0.7, 1.3), Vec2(2.2, -0.4)})
      CHECK((lift.evaluate(p) - f.evaluate(p)).norm() < 1e-11);
  }
  const SpinorField f(kSkew, kCanonicalSpin, 2);
  CHECK_THROWS_AS(lift_to_cover(f, 2), ParityError);
  CHECK_THROWS_AS(lift_to_cover(f, 1), ParameterError);
  CHECK_NOTHROW(lift_to_cover(f, 5));
}

TEST_CASE("elliptic ratio") {
  SpinorField single(kSkew, kCanonicalSpin, 2);
  single.set_coefficient(1, -1, Spinor(cplx(0.3, 1), cplx(-2, 0.5)));
  CHECK(elliptic_ratio(single) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(elliptic_ratio(SpinorField(kSkew, kCanonicalSpin, 2)) == 0.0);

  SpinorField parallel(kSkew, {0, 0}, 1);
  parallel.set_coefficient(0, 0, Spinor(1, 0));
  CHECK_THROWS_AS(elliptic_ratio(parallel), UnboundedRatio);

  std::mt19937_64 rng(39);
  double worst = 0;
  for (int i = 0; i < 50; ++i) worst = std::max(worst, elliptic_ratio(random_field({}, kCanonicalSpin, 3, rng)));
  CHECK(std::isfinite(worst));
  CHECK(worst > 0.0);
  MESSAGE("max elliptic ratio over 50 random fields: " << worst);
}

TEST_CASE("coefficient access and window checks") {
  SpinorField f(kSkew, kCanonicalSpin, ModeWindow{2, 3});
  CHECK(f.mode_count() == 5 * 7);
  f.set_coefficient(-2, 3, Spinor(1, 2));
  CHECK(f.coefficient(-2, 3) == Spinor(1, 2));
  CHECK(f.mode_at(f.mode_index(-2, 3)) == std::pair{-2, 3});
  CHECK_THROWS_AS(f.set_coefficient(3, 0, Spinor(1, 0)), ParameterError);
  CHECK_THROWS_AS(SpinorField(kSkew, {2, 0}, 1), ParameterError);
  SpinorField g(kSkew, {1, 0}, ModeWindow{2, 3});
  CHECK_FALSE(f.compatible(g));
  CHECK_THROWS(f += g);
}

TEST_CASE("binary field files round trip") {
  std::mt19937_64 rng(40);
  const SpinorField f = random_field(kSkew, {1, 1}, 3, rng);
  std::stringstream ss;
  write_field(ss, f);
  const SpinorField g = read_field(ss);
  CHECK(g.compatible(f));
  CHECK(g.coefficients() == f.coefficients());
  std::stringstream bad(ss.str().substr(0, ss.str().find('\n') + 10));
  CHECK_THROWS_AS(read_field(bad), FormatError);
}
