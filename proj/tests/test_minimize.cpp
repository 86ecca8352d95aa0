#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "test_support.hpp"
#include "torusdirac/errors.hpp"
#include "torusdirac/functional.hpp"
#include "torusdirac/minimize.hpp"
#include "torusdirac/spectrum.hpp"

using namespace torusdirac;
using namespace torusdirac::testing;

namespace {

constexpr double kPi = std::numbers::pi;

MinimizeConfig small(int n = 8, int restarts = 2) {
  MinimizeConfig c;
  c.modes = n;
  c.restarts = restarts;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  MinimizeConfig c;
  CHECK_NOTHROW(validate(c));
  c.tol = 1.0;
  CHECK_THROWS_AS(validate(c), ParameterError);
  c = {};
  c.restarts = 0;
  CHECK_THROWS_AS(validate(c), ParameterError);
  c = {};
  c.step.shrink = 1.5;
  CHECK_THROWS_AS(validate(c), ParameterError);
  CHECK(parse_method("fixed-point") == Method::fixed_point);
  CHECK(to_string(Method::gradient_projection) == "gradient-projection");
  CHECK_THROWS_AS(parse_method("newton"), ParameterError);
  CHECK_THROWS_AS(estimate_lambda_min({0.4, 0.1}, small()), ParameterError);
}

TEST_CASE("functional gradient agrees with finite differences") {
  const GradientCheckReport r = gradient_check({0.0, 1.0}, small(6));
  CHECK(r.deviations.size() == 10);
  CHECK(r.max_relative_deviation < 1e-5);
  CHECK(std::abs(r.scale_derivative) < 1e-10);
  CHECK(std::abs(r.phase_derivative) < 1e-10);
  const GradientCheckReport skew = gradient_check({0.3, 0.6}, small(5), 4);
  CHECK(skew.max_relative_deviation < 1e-5);
}

TEST_CASE("square torus estimate stays at or below pi") {
  const MinimizeResult r = estimate_lambda_min({0.0, 1.0}, small());
  CHECK(r.lambda_hat <= kPi + 1e-3);
  CHECK(r.start_value == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(r.restart_values.size() == 2);
}

TEST_CASE("result invariants") {
  const ModuliPoint p{0.1, 0.45};
  const MinimizeConfig cfg = small(8, 3);
  const MinimizeResult r = estimate_lambda_min(p, cfg);
  CHECK(rel(evaluate_J(r.minimizer, cfg.resolution()), r.lambda_hat) < 1e-10);
  LottFunctional fn(r.minimizer.basis(), r.minimizer.spin(), r.minimizer.window(), cfg.resolution());
  CHECK(fn.l4_integral(r.minimizer.coefficients()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.lambda_hat >= 0.0);
  CHECK(r.lambda_hat <= r.start_value + cfg.tol);
  CHECK(r.lambda_hat <= flat_bound(p) + cfg.tol);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] + 1e-10);
  CHECK(r.history.back() == r.lambda_hat);
  CHECK(r.converged);
  CHECK(r.el_residual < 0.5);
}

TEST_CASE("runs are bit-reproducible") {
  const MinimizeResult a = estimate_lambda_min({0.0, 0.3}, small(6));
  const MinimizeResult b = estimate_lambda_min({0.0, 0.3}, small(6));
  REQUIRE(a.history.size() == b.history.size());
  CHECK(std::memcmp(a.history.data(), b.history.data(), a.history.size() * sizeof(double)) == 0);
  CHECK(a.minimizer.coefficients() == b.minimizer.coefficients());
  MinimizeConfig other = small(6);
  other.seed = 2;
  const MinimizeResult c = estimate_lambda_min({0.0, 0.3}, other);
  CHECK(c.lambda_hat == doctest::Approx(a.lambda_hat).epsilon(1e-4));
}

TEST_CASE("long tori approach the flat bound") {
  const MinimizeResult r = estimate_lambda_min({0.0, 25.0}, small(6));
  CHECK(r.lambda_hat <= kPi / 5 + 1e-3);
}

TEST_CASE("fixed-point mode never ends above its start") {
  MinimizeConfig cfg = small(6, 2);
  cfg.method = Method::fixed_point;
  cfg.max_iters = 300;
  const MinimizeResult r = estimate_lambda_min({0.0, 0.4}, cfg);
  CHECK(r.lambda_hat <= r.start_value + cfg.tol);
  CHECK(r.lambda_hat < kPi / std::sqrt(0.4));
}

TEST_CASE("Euler-Lagrange residual shrinks under window refinement") {
  const MinimizeResult coarse = estimate_lambda_min({0.0, 0.5}, small(6));
  const MinimizeResult fine = estimate_lambda_min({0.0, 0.5}, small(12));
  MESSAGE("residual N=6: " << coarse.el_residual << ", N=12: " << fine.el_residual);
  CHECK(fine.el_residual <= 1.1 * coarse.el_residual);
  CHECK(fine.lambda_hat <= coarse.lambda_hat + 1e-6);
}

TEST_CASE("covering consistency of the minimizer") {
  const MinimizeConfig cfg = small(6);
  const MinimizeResult r = estimate_lambda_min({0.2, 0.7}, cfg);
  const int m = cfg.resolution().m1;
  CHECK(rel(evaluate_J(lift_to_cover(r.minimizer, 3), {m, 3 * m}), std::sqrt(3.0) * r.lambda_hat) < 1e-9);
}

TEST_CASE("sweep keeps input order, records failures and ceilings") {
  const std::vector<ModuliPoint> pts{{0.0, 1.0}, {0.4, 0.1}, {0.0, 0.6}};
  const SweepResult s = sweep(pts, small(5, 1));
  REQUIRE(s.rows.size() == 3);
  CHECK(s.rows[0].point.y == 1.0);
  CHECK(s.rows[1].error.rfind("parameter", 0) == 0);
  CHECK(std::isnan(s.rows[1].lambda_hat));
  CHECK(s.rows[2].ceiling == doctest::Approx(std::min(2 * std::sqrt(kPi), kPi / std::sqrt(0.6))));
  CHECK(s.rows[0].flat_bound == doctest::Approx(kPi));
  REQUIRE(s.tau_hat);
  CHECK(*s.tau_hat == std::max(s.rows[0].lambda_hat, s.rows[2].lambda_hat));

  const SweepResult one = sweep({{0.0, 1.0}}, small(5, 1));
  CHECK(*one.tau_hat == one.rows[0].lambda_hat);
  CHECK_FALSE(sweep({}, small()).tau_hat.has_value());
  CHECK_THROWS_AS(sweep(pts, small(), 0), ParameterError);
}

TEST_CASE("parallel and serial sweeps agree exactly") {
  const std::vector<ModuliPoint> pts{{0.0, 1.0}, {0.1, 0.5}, {0.0, 0.3}, {0.5, 0.9}};
  const SweepResult a = sweep(pts, small(5, 2), 1);
  const SweepResult b = sweep(pts, small(5, 2), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(a.rows[i].lambda_hat == b.rows[i].lambda_hat);
    CHECK(a.rows[i].iterations == b.rows[i].iterations);
  }
}

TEST_CASE("continuity probe") {
  const ContinuityReport flat = continuity_probe({{0, 0.8}, {0, 0.8}, {0, 0.8}}, small(5, 1));
  CHECK(flat.max_difference == 0.0);
  // (-0.5, y) and (0.5, y) are the same point of the moduli space
  const ContinuityReport edge = continuity_probe({{-0.5, 0.9}, {0.5, 0.9}}, small(5, 1));
  CHECK(edge.max_difference == 0.0);
  CHECK_THROWS_AS(continuity_probe({{0, 0.8}, {0, 0.9}}, small(5, 1)), ParameterError);
  const ContinuityReport path = continuity_probe({{0, 0.80}, {0, 0.82}, {0, 0.84}}, small(6, 2));
  CHECK(path.values.size() == 3);
  CHECK(path.max_difference < 0.05);
}

TEST_CASE("reference constants") {
  CHECK(sphere_value() == doctest::Approx(std::sqrt(4 * kPi)));
  CHECK(flat_bound({0.0, 4.0}) == doctest::Approx(kPi / 2));
}
