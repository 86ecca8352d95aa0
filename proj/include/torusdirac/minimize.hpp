#ifndef TORUSDIRAC_MINIMIZE_HPP
#define TORUSDIRAC_MINIMIZE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torusdirac/field.hpp"
#include "torusdirac/lattice.hpp"

namespace torusdirac {

enum class Method { gradient_projection, fixed_point };

std::string to_string(Method m);
Method parse_method(const std::string& name);

struct StepRule {
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
};

struct MinimizeConfig {
  int modes = 32;        // window [-N, N]^2
  int grid = 0;          // 0 selects default_resolution(window)
  int max_iters = 5000;
  int restarts = 4;
  StepRule step;
  double tol = 1e-9;     // relative decrease of J that counts as converged
  std::uint64_t seed = 1;
  Method method = Method::gradient_projection;
  double perturbation = 0.5;  // relative L^2 size of restart perturbations
  int memory = 12;            // L-BFGS pairs kept by gradient-projection mode

  Resolution resolution() const;
};

// Throws ParameterError on non-positive sizes or tol outside (0, 1).
void validate(const MinimizeConfig& cfg);

struct MinimizeResult {
  double lambda_hat = 0.0;
  SpinorField minimizer;  // normalized to int |psi|^4 = 1
  double el_residual = 0.0;
  int iterations = 0;     // of the winning restart
  bool converged = false;
  std::vector<double> history;         // J per iteration of the winning restart
  std::vector<double> restart_values;  // final J of every restart (NaN if degenerate)
  int best_restart = 0;
  double start_value = 0.0;            // J of the first eigenspinor
};

// Upper estimate of lambda_min at a point of M1 by minimizing J over the
// truncated field space. Restart 0 starts from the first eigenspinor, later
// restarts from seeded smooth perturbations of it.
MinimizeResult estimate_lambda_min(const ModuliPoint& p, const MinimizeConfig& cfg);

struct GradientCheckReport {
  double max_relative_deviation = 0.0;
  std::vector<double> deviations;
  double scale_derivative = 0.0;  // dJ along psi, relative to J
  double phase_derivative = 0.0;  // dJ along i psi, relative to J
};

// Analytic first variation against central differences (step 1e-5) at
// `fields` seeded random fields. Throws GradientMismatch above 1e-5.
GradientCheckReport gradient_check(const ModuliPoint& p, const MinimizeConfig& cfg,
                                   int fields = 10);

struct SweepRow {
  ModuliPoint point;
  double lambda_hat = 0.0;
  double el_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double flat_bound = 0.0;  // pi / sqrt(y)
  double ceiling = 0.0;     // min(2 sqrt(pi), pi / sqrt(y))
  std::string error;        // empty on success
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<double> tau_hat;  // max lambda_hat over successful rows
};

// Rows come back in input order regardless of the worker count.
SweepResult sweep(const std::vector<ModuliPoint>& points, const MinimizeConfig& cfg,
                  int workers = 1);

struct ContinuityReport {
  double max_difference = 0.0;
  std::vector<double> values;
};

// Max |lambda_hat(p_{i+1}) - lambda_hat(p_i)| along a path with steps of at
// most 0.02 (after boundary canonicalization).
ContinuityReport continuity_probe(const std::vector<ModuliPoint>& path, const MinimizeConfig& cfg,
                                  int workers = 1);

double flat_bound(const ModuliPoint& p);
double sphere_value();  // 2 sqrt(pi), lambda_min of the round 2-sphere

}  // namespace torusdirac

#endif  // TORUSDIRAC_MINIMIZE_HPP
