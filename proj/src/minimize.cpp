#include "torusdirac/minimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "torusdirac/errors.hpp"
#include "torusdirac/functional.hpp"
#include "torusdirac/spectrum.hpp"

namespace torusdirac {

namespace {

constexpr int kMaxShrinks = 40;
constexpr int kDegenerateRetries = 8;

double real_dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return a.dot(b).real(); }

// Smooth complex Gaussian field: weight 1 / (1 + (|xi| / xi_ref)^2) per mode.
Eigen::VectorXcd random_smooth(const LottFunctional& fn, double xi_ref, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto& freqs = fn.frequencies();
  Eigen::VectorXcd out(2 * static_cast<Eigen::Index>(freqs.size()));
  for (std::size_t v = 0; v < freqs.size(); ++v) {
    const double q = freqs[v].norm() / xi_ref;
    const double w = 1.0 / (1.0 + q * q);
    for (int c = 0; c < 2; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      out[2 * v + c] = w * cplx(re, im);
    }
  }
  return out;
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(attempt)};
  return std::mt19937_64(seq);
}

struct RunOutcome {
  Eigen::VectorXcd coeffs;
  double value = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

void normalize(LottFunctional& fn, Eigen::VectorXcd& c, Eigen::VectorXcd* grad = nullptr) {
  const double l4 = fn.l4_integral(c);
  const double factor = std::pow(l4, -0.25);
  c *= factor;
  // J is scale invariant, so its gradient is homogeneous of degree -1.
  if (grad != nullptr) *grad /= factor;
}

// L-BFGS on the real vector space of coefficients with a Sobolev-type
// diagonal preconditioner, Armijo backtracking, and the scale gauge
// int |psi|^4 = 1 restored after every accepted step.
RunOutcome run_gradient_projection(LottFunctional& fn, Eigen::VectorXcd x, const MinimizeConfig& cfg,
                                   double xi_ref) {
  RunOutcome out;
  const auto& freqs = fn.frequencies();
  Eigen::VectorXd precond(x.size());
  for (std::size_t v = 0; v < freqs.size(); ++v) {
    const double q = freqs[v].squaredNorm() + xi_ref * xi_ref;
    precond[2 * v] = precond[2 * v + 1] = xi_ref * xi_ref / q;
  }
  const auto apply_precond = [&](const Eigen::VectorXcd& g) {
    Eigen::VectorXcd r = g;
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] *= precond[i];
    return r;
  };

  normalize(fn, x);
  Eigen::VectorXcd g;
  double j = fn.value_and_gradient(x, g);
  double sign = fn.pairing(x) > 0.0 ? 1.0 : -1.0;
  out.history.push_back(j);

  std::deque<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> memory;
  std::deque<double> rho;
  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    // Two-loop recursion.
    Eigen::VectorXcd q = g;
    std::vector<double> alpha(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha[k] = rho[k] * real_dot(memory[k].first, q);
      q -= alpha[k] * memory[k].second;
    }
    Eigen::VectorXcd d;
    if (memory.empty()) {
      d = apply_precond(q);
      const double dn = d.norm();
      if (dn > 0.0) d *= cfg.step.initial_step * 0.1 * x.norm() / dn;
    } else {
      const auto& [s, y] = memory.back();
      const double gamma = real_dot(s, y) / real_dot(y, apply_precond(y));
      d = gamma * apply_precond(q);
      for (std::size_t k = 0; k < memory.size(); ++k) {
        const double beta = rho[k] * real_dot(memory[k].second, d);
        d += (alpha[k] - beta) * memory[k].first;
      }
      d *= cfg.step.initial_step;
    }
    d = -d;
    double slope = real_dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      rho.clear();
      d = -apply_precond(g);
      const double dn = d.norm();
      if (dn > 0.0) d *= 0.1 * x.norm() / dn;
      slope = real_dot(g, d);
    }
    if (!(slope < 0.0) || std::abs(slope) <= 1e-15 * j) {
      out.converged = true;  // first-order stationary to working precision
      break;
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXcd x_new, g_new;
    double j_new = j;
    for (int shrink = 0; shrink < kMaxShrinks; ++shrink, step *= cfg.step.shrink) {
      x_new = x + step * d;
      if (fn.pairing(x_new) * sign <= 0.0) continue;  // crossed the nonsmooth point
      try {
        j_new = fn.value_and_gradient(x_new, g_new);
      } catch (const DegeneratePairing&) {
        continue;
      }
      if (j_new <= j + cfg.step.sufficient_decrease * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (memory.empty()) break;  // steepest descent failed too
      memory.clear();
      rho.clear();
      continue;
    }

    normalize(fn, x_new, &g_new);
    Eigen::VectorXcd s = x_new - x;
    Eigen::VectorXcd y = g_new - g;
    const double sy = real_dot(s, y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      memory.emplace_back(std::move(s), std::move(y));
      rho.push_back(1.0 / sy);
      if (static_cast<int>(memory.size()) > cfg.memory) {
        memory.pop_front();
        rho.pop_front();
      }
    }
    const double decrease = (j - j_new) / j;
    x = std::move(x_new);
    g = std::move(g_new);
    j = j_new;
    out.history.push_back(j);
    if (decrease < cfg.tol) {
      out.converged = true;
      ++iter;
      break;
    }
  }
  out.iterations = iter;
  out.coeffs = std::move(x);
  out.value = j;
  return out;
}

// Damped iteration psi <- psi + theta (J D^{-1} P(|psi|^2 psi) - psi), whose
// fixed points solve D psi = J |psi|^2 psi at int |psi|^4 = 1. theta starts
// at the initial step and shrinks until J decreases.
RunOutcome run_fixed_point(LottFunctional& fn, Eigen::VectorXcd x, const MinimizeConfig& cfg) {
  RunOutcome out;
  normalize(fn, x);
  double j = fn.value(x);
  double sign = fn.pairing(x) > 0.0 ? 1.0 : -1.0;
  out.history.push_back(j);
  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const Eigen::VectorXcd target = j * fn.apply_inverse_symbol(fn.cubic_modes(x));
    const Eigen::VectorXcd d = target - x;
    if (d.norm() <= 1e-14 * x.norm()) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    Eigen::VectorXcd trial;
    double j_new = j;
    double theta = cfg.step.initial_step;
    for (int shrink = 0; shrink < kMaxShrinks; ++shrink, theta *= cfg.step.shrink) {
      trial = x + theta * d;
      if (fn.pairing(trial) * sign <= 0.0) continue;
      normalize(fn, trial);
      try {
        j_new = fn.value(trial);
      } catch (const DegeneratePairing&) {
        continue;
      }
      if (j_new < j) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // no decrease along the fixed-point direction at any damping
      out.converged = d.norm() <= std::sqrt(cfg.tol) * x.norm();
      break;
    }
    const double decrease = (j - j_new) / j;
    x = std::move(trial);
    j = j_new;
    out.history.push_back(j);
    if (decrease < cfg.tol) {
      out.converged = true;
      ++iter;
      break;
    }
  }
  out.iterations = iter;
  out.coeffs = std::move(x);
  out.value = j;
  return out;
}

}  // namespace

std::string to_string(Method m) {
  return m == Method::gradient_projection ? "gradient-projection" : "fixed-point";
}

Method parse_method(const std::string& name) {
  if (name == "gradient-projection") return Method::gradient_projection;
  if (name == "fixed-point") return Method::fixed_point;
  throw ParameterError("unknown method '" + name + "'");
}

Resolution MinimizeConfig::resolution() const {
  return grid > 0 ? Resolution::square(grid) : default_resolution(ModeWindow::square(modes));
}

void validate(const MinimizeConfig& cfg) {
  if (cfg.modes < 1 || cfg.max_iters < 1 || cfg.restarts < 1 || cfg.memory < 1)
    throw ParameterError("modes, max_iters, restarts and memory must be positive");
  if (cfg.grid < 0) throw ParameterError("grid must be positive (or 0 for the default)");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw ParameterError("tol must lie in (0, 1)");
  if (!(cfg.step.initial_step > 0.0) || !(cfg.step.shrink > 0.0 && cfg.step.shrink < 1.0) ||
      !(cfg.step.sufficient_decrease > 0.0 && cfg.step.sufficient_decrease < 1.0))
    throw ParameterError("invalid backtracking parameters");
  if (!(cfg.perturbation > 0.0)) throw ParameterError("perturbation must be positive");
}

MinimizeResult estimate_lambda_min(const ModuliPoint& p, const MinimizeConfig& cfg) {
  validate(cfg);
  if (!moduli_contains(p))
    throw ParameterError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                         ") is outside the moduli domain");
  const LatticeBasis basis = canonical_basis(p);
  const ModeWindow window = ModeWindow::square(cfg.modes);
  LottFunctional fn(basis, kCanonicalSpin, window, cfg.resolution());

  const SpinorField start = first_eigenspinor(basis, kCanonicalSpin, cfg.modes);
  const Eigen::VectorXcd& e = start.coefficients();
  const double xi_ref = first_eigenvalue(basis, kCanonicalSpin);

  MinimizeResult result;
  result.start_value = fn.value(e);
  std::optional<RunOutcome> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    std::optional<RunOutcome> run;
    for (int attempt = 0; attempt < kDegenerateRetries && !run; ++attempt) {
      Eigen::VectorXcd x0 = e;
      if (r > 0) {
        auto rng = seeded_rng(cfg.seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(attempt));
        Eigen::VectorXcd noise = random_smooth(fn, xi_ref, rng);
        x0 += (cfg.perturbation * e.norm() / noise.norm()) * noise;
      }
      try {
        run = cfg.method == Method::gradient_projection ? run_gradient_projection(fn, x0, cfg, xi_ref)
                                                        : run_fixed_point(fn, x0, cfg);
      } catch (const DegeneratePairing&) {
        if (r == 0) break;  // the eigenspinor itself cannot be resampled
      }
    }
    result.restart_values.push_back(run ? run->value : std::numeric_limits<double>::quiet_NaN());
    if (run && (!best || run->value < best->value)) {
      best = std::move(run);
      result.best_restart = r;
    }
  }
  if (!best) throw OptimizationFailed("every restart hit a degenerate pairing");

  result.lambda_hat = best->value;
  result.iterations = best->iterations;
  result.converged = best->converged;
  result.history = std::move(best->history);
  normalize(fn, best->coeffs);
  result.el_residual = fn.el_residual(best->coeffs, result.lambda_hat);
  result.minimizer = fn.to_field(best->coeffs);
  return result;
}

GradientCheckReport gradient_check(const ModuliPoint& p, const MinimizeConfig& cfg, int fields) {
  validate(cfg);
  const LatticeBasis basis = canonical_basis(p);
  LottFunctional fn(basis, kCanonicalSpin, ModeWindow::square(cfg.modes), cfg.resolution());
  const double xi_ref = first_eigenvalue(basis, kCanonicalSpin);
  constexpr double h = 1e-5;
  constexpr double limit = 1e-5;

  GradientCheckReport report;
  for (int k = 0; k < fields; ++k) {
    auto rng = seeded_rng(cfg.seed, 1000 + static_cast<std::uint64_t>(k), 0);
    Eigen::VectorXcd c = random_smooth(fn, xi_ref, rng);
    Eigen::VectorXcd dir = random_smooth(fn, xi_ref, rng);
    normalize(fn, c);
    dir *= c.norm() / dir.norm();
    Eigen::VectorXcd g;
    const double j = fn.value_and_gradient(c, g);
    const double analytic = real_dot(g, dir);
    const double fd = (fn.value(c + h * dir) - fn.value(c - h * dir)) / (2.0 * h);
    const double dev = std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-8 * j});
    report.deviations.push_back(dev);
    report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
    if (k == 0) {
      report.scale_derivative = real_dot(g, c) / j;
      report.phase_derivative = real_dot(g, cplx(0.0, 1.0) * c) / j;
    }
    if (dev > limit)
      throw GradientMismatch("first variation disagrees with finite differences for random field " +
                             std::to_string(k) + " (relative deviation " + std::to_string(dev) + ")");
  }
  return report;
}

double flat_bound(const ModuliPoint& p) { return std::numbers::pi / std::sqrt(p.y); }

double sphere_value() { return 2.0 * std::sqrt(std::numbers::pi); }

SweepResult sweep(const std::vector<ModuliPoint>& points, const MinimizeConfig& cfg, int workers) {
  if (workers < 1) throw ParameterError("worker count must be at least 1");
  validate(cfg);
  SweepResult result;
  result.rows.resize(points.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepRow& row = result.rows[i];
      row.point = points[i];
      row.flat_bound = flat_bound(points[i]);
      row.ceiling = std::min(sphere_value(), row.flat_bound);
      try {
        const MinimizeResult r = estimate_lambda_min(points[i], cfg);
        row.lambda_hat = r.lambda_hat;
        row.el_residual = r.el_residual;
        row.iterations = r.iterations;
        row.converged = r.converged;
      } catch (const Error& e) {
        row.lambda_hat = std::numeric_limits<double>::quiet_NaN();
        row.el_residual = std::numeric_limits<double>::quiet_NaN();
        row.error = e.code() + ": " + e.what();
      }
    }
  };
  const int n = std::min<int>(workers, static_cast<int>(std::max<std::size_t>(points.size(), 1)));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const SweepRow& row : result.rows)
    if (row.error.empty() && (!result.tau_hat || row.lambda_hat > *result.tau_hat))
      result.tau_hat = row.lambda_hat;
  return result;
}

ContinuityReport continuity_probe(const std::vector<ModuliPoint>& path, const MinimizeConfig& cfg,
                                  int workers) {
  std::vector<ModuliPoint> canon;
  canon.reserve(path.size());
  for (const ModuliPoint& p : path) canon.push_back(canonicalize(p));
  for (std::size_t i = 1; i < canon.size(); ++i) {
    const double dist = std::hypot(canon[i].x - canon[i - 1].x, canon[i].y - canon[i - 1].y);
    const double mirrored = std::hypot(canon[i].x + canon[i - 1].x, canon[i].y - canon[i - 1].y);
    if (std::min(dist, mirrored) > 0.02 + 1e-12)
      throw ParameterError("continuity path steps must not exceed 0.02");
  }
  const SweepResult s = sweep(canon, cfg, workers);
  ContinuityReport report;
  for (const SweepRow& row : s.rows) {
    if (!row.error.empty()) throw OptimizationFailed("continuity probe point failed: " + row.error);
    report.values.push_back(row.lambda_hat);
  }
  for (std::size_t i = 1; i < report.values.size(); ++i)
    report.max_difference = std::max(report.max_difference, std::abs(report.values[i] - report.values[i - 1]));
  return report;
}

}  // namespace torusdirac
