#include "torusdirac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "torusdirac/cylinder.hpp"
#include "torusdirac/errors.hpp"
#include "torusdirac/io.hpp"
#include "torusdirac/report.hpp"
#include "torusdirac/spectrum.hpp"

namespace torusdirac::cli {

namespace {

using nlohmann::json;

json config_json(const MinimizeConfig& c) {
  return {{"modes", c.modes},
          {"grid", c.resolution().m1},
          {"max_iters", c.max_iters},
          {"restarts", c.restarts},
          {"step", {{"initial_step", c.step.initial_step}, {"shrink", c.step.shrink},
                    {"sufficient_decrease", c.step.sufficient_decrease}}},
          {"tol", c.tol},
          {"seed", c.seed},
          {"method", to_string(c.method)},
          {"perturbation", c.perturbation},
          {"memory", c.memory}};
}

// Non-finite values become JSON null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void add_minimize_flags(CLI::App* sub, MinimizeConfig& cfg, std::string& method) {
  sub->add_option("--modes", cfg.modes, "mode window N, modes in [-N, N]^2")->capture_default_str();
  sub->add_option("--grid", cfg.grid, "grid resolution M (0: 4(2N+1)+1 rounded up)")->capture_default_str();
  sub->add_option("--restarts", cfg.restarts, "number of starts")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "seed of the restart perturbations")->capture_default_str();
  sub->add_option("--method", method, "gradient-projection or fixed-point")->capture_default_str();
  sub->add_option("--max-iters", cfg.max_iters, "iteration cap per start")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "relative decrease of J that counts as converged")->capture_default_str();
  sub->add_option("--perturbation", cfg.perturbation, "relative size of restart perturbations")
      ->capture_default_str();
  sub->add_option("--memory", cfg.memory, "L-BFGS memory")->capture_default_str();
}

LatticeBasis basis_from(const std::vector<double>& v1, const std::vector<double>& v2) {
  LatticeBasis b{{v1[0], v1[1]}, {v2[0], v2[1]}};
  validate(b);
  return b;
}

SpinStructure spin_from(const std::vector<int>& eps) {
  for (int e : eps)
    if (e != 0 && e != 1) throw ParameterError("spin parities must be 0 or 1");
  return {eps[0], eps[1]};
}

}  // namespace

void RunConfig::validate() const {
  if (workers < 1) throw ParameterError("worker count must be at least 1");
  torusdirac::validate(minimize);
}

std::string RunConfig::to_json() const {
  json j{{"subcommand", subcommand}, {"input", input}, {"output", output}, {"workers", workers},
         {"config", config_json(minimize)}};
  return j.dump(2);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal Dirac eigenvalue laboratory for flat 2-tori", "torusdirac"};
  app.require_subcommand(1, 1);

  std::vector<double> v1{1.0, 0.0}, v2{0.0, 1.0};
  std::vector<int> eps{0, 1};
  std::string lattice_path;
  double cutoff = 0.0;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of D up to a cutoff, as CSV");
  auto* reduce = app.add_subcommand("reduce", "canonical moduli point of a torus with spin structure");
  for (auto* sub : {spectrum, reduce}) {
    sub->add_option("--v1", v1, "first basis vector")->expected(2);
    sub->add_option("--v2", v2, "second basis vector")->expected(2);
    sub->add_option("--eps", eps, "spin parities along v1, v2")->expected(2);
    sub->add_option("--lattice", lattice_path, "JSON file with v1, v2, eps (overrides the flags)");
  }
  spectrum->add_option("--cutoff", cutoff, "largest |lambda|")->required();

  MinimizeConfig cfg;
  std::string method = "gradient-projection";
  double x = 0.0, y = 1.0;
  std::string field_out;
  auto* minimize = app.add_subcommand("minimize", "estimate lambda_min at a moduli point; JSON on stdout");
  minimize->add_option("--x", x)->capture_default_str();
  minimize->add_option("--y", y)->capture_default_str();
  minimize->add_option("--field-out", field_out, "write the minimizer to this file");
  add_minimize_flags(minimize, cfg, method);

  RunConfig run_cfg;
  auto* sweep_cmd = app.add_subcommand("sweep", "estimate lambda_min along a list of points; CSV output");
  sweep_cmd->add_option("--path", run_cfg.input, "JSON list of points")->required();
  sweep_cmd->add_option("--out", run_cfg.output, "CSV file (a .json sidecar holds the config)")->required();
  sweep_cmd->add_option("--workers", run_cfg.workers, "worker threads")->capture_default_str();
  add_minimize_flags(sweep_cmd, cfg, method);

  std::string cutoff_kind = "gamma";
  double axial_extent = 0.0;
  int cases = 20;
  std::uint64_t check_seed = 1;
  int check_modes = 16;
  auto* cyl = app.add_subcommand("cylinder-check", "J of compactly supported spinors on the cylinder Z_{x,y}");
  cyl->add_option("--x", x)->capture_default_str();
  cyl->add_option("--y", y)->capture_default_str();
  cyl->add_option("--cutoff", cutoff_kind, "eta or gamma")->check(CLI::IsMember({"eta", "gamma"}))->capture_default_str();
  cyl->add_option("--axial-extent", axial_extent, "half-length S of the grid (0: fit the cutoff)");
  cyl->add_option("--cases", cases, "random spinors besides the transplanted minimizer")->capture_default_str();
  cyl->add_option("--seed", check_seed)->capture_default_str();
  cyl->add_option("--modes", check_modes, "mode window of the torus minimizer")->capture_default_str();

  int points = 10000;
  std::uint64_t merc_seed = 1;
  auto* merc = app.add_subcommand("mercator-check", "conformality defect of the Mercator map");
  merc->add_option("--points", points)->capture_default_str();
  merc->add_option("--seed", merc_seed)->capture_default_str();

  std::string plot_in, plot_out;
  auto* plot = app.add_subcommand("plot", "SVG plot of a sweep CSV");
  plot->add_option("--in", plot_in, "sweep CSV")->required();
  plot->add_option("--out", plot_out, "SVG file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    const auto lattice = [&] {
      if (!lattice_path.empty()) {
        auto [b, s] = lattice_from_json(read_text_file(lattice_path));
        validate(b);
        return std::pair{b, s};
      }
      return std::pair{basis_from(v1, v2), spin_from(eps)};
    };

    if (*spectrum) {
      const auto [b, s] = lattice();
      out << "lambda,multiplicity,freq_x,freq_y\n";
      for (const SpectrumEntry& e : dirac_spectrum(b, s, cutoff))
        out << format_number(e.lambda) << ',' << e.multiplicity << ',' << format_number(e.frequency.x()) << ','
            << format_number(e.frequency.y()) << '\n';
    } else if (*reduce) {
      const auto [b, s] = lattice();
      const ModuliReduction r = reduce_to_moduli(b, s);
      const LatticeBasis c = apply(r.change, b);
      const auto& m = r.change.matrix;
      json j{{"x", r.point.x},
             {"y", r.point.y},
             {"matrix", {{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}},
             {"rotation", r.change.rotation},
             {"scale", r.change.scale},
             {"basis", {{"v1", {c.v1.x(), c.v1.y()}}, {"v2", {c.v2.x(), c.v2.y()}}}}};
      out << j.dump(2) << '\n';
    } else if (*minimize) {
      cfg.method = parse_method(method);
      const MinimizeResult r = estimate_lambda_min({x, y}, cfg);
      if (!field_out.empty()) write_field(field_out, r.minimizer);
      json j{{"x", x},
             {"y", y},
             {"lambda_hat", r.lambda_hat},
             {"el_residual", number(r.el_residual)},
             {"iterations", r.iterations},
             {"converged", r.converged},
             {"start_value", r.start_value},
             {"best_restart", r.best_restart},
             {"flat_bound", flat_bound({x, y})},
             {"ceiling", std::min(sphere_value(), flat_bound({x, y}))},
             {"config", config_json(cfg)}};
      j["restart_values"] = json::array();
      for (double v : r.restart_values) j["restart_values"].push_back(number(v));
      out << j.dump(2) << '\n';
    } else if (*sweep_cmd) {
      cfg.method = parse_method(method);
      run_cfg.subcommand = "sweep";
      run_cfg.minimize = cfg;
      run_cfg.validate();
      const std::vector<ModuliPoint> pts = points_from_json(read_text_file(run_cfg.input));
      const SweepResult s = torusdirac::sweep(pts, cfg, run_cfg.workers);
      write_text_file(run_cfg.output, sweep_csv(s.rows));
      write_text_file(run_cfg.output + ".json", run_cfg.to_json() + "\n");
      int failures = 0;
      for (const SweepRow& row : s.rows)
        if (!row.error.empty()) {
          ++failures;
          err << "point (" << format_number(row.point.x) << ", " << format_number(row.point.y)
              << "): " << row.error << '\n';
        }
      json j{{"rows", s.rows.size()}, {"failures", failures},
             {"tau_hat", s.tau_hat ? json(*s.tau_hat) : json(nullptr)}, {"csv", run_cfg.output}};
      out << j.dump(2) << '\n';
    } else if (*cyl) {
      const LatticeBasis torus = canonical_basis({x, y});
      const CutoffProfile profile = cutoff_kind == "eta" ? CutoffProfile::eta() : CutoffProfile::gamma(y);
      CylinderGrid grid;
      grid.period = torus.v2;
      grid.axial_extent = axial_extent > 0.0 ? axial_extent : profile.support().second + 0.25;
      grid.periodic_resolution = 2 * ((4 * (2 * check_modes + 1) + 2) / 2);
      grid.axial_resolution = 256;
      MinimizeConfig near;
      near.modes = check_modes;
      near.restarts = 2;
      near.seed = check_seed;
      const MinimizeResult r = estimate_lambda_min({x, y}, near);
      SpinorField f = r.minimizer;
      const int strips = static_cast<int>(std::floor(1.0 / (2.0 * y) + 1e-12));
      if (strips >= 1) f = translate_axial(f, (best_translation(f, strips).index + 0.5) / strips);
      const double bound = sphere_value() * (1.0 - 0.05);
      out << "case,kind,J\n";
      double lowest = cylinder_J(transplant(f, profile, grid));
      out << "0,transplant," << format_number(lowest) << '\n';
      CylinderGrid random_grid = grid;
      random_grid.periodic_resolution = 32;
      random_grid.axial_resolution = 64;
      random_grid.axial_extent = std::max(grid.axial_extent, 4.0);
      std::mt19937_64 rng(check_seed);
      for (int i = 1; i <= cases; ++i) {
        const bool bubble = i % 2 == 0;
        const CylinderField c = bubble ? perturbed_bubble(random_grid, rng) : random_bump_spinor(random_grid, rng);
        const double jv = cylinder_J(c);
        lowest = std::min(lowest, jv);
        out << i << ',' << (bubble ? "bubble" : "bump") << ',' << format_number(jv) << '\n';
      }
      out << "# min J = " << format_number(lowest) << ", bound 0.95 * 2 sqrt(pi) = " << format_number(bound) << '\n';
      if (lowest < bound) {
        err << "error: a compactly supported spinor fell below the sphere bound\n";
        return kExitNumerical;
      }
    } else if (*merc) {
      const ConformalityReport r = mercator_check(points, merc_seed);
      json j{{"points", r.points}, {"max_orthogonality_defect", r.max_orthogonality_defect},
             {"max_factor_error", r.max_factor_error}, {"max_radius_error", r.max_radius_error}};
      out << j.dump(2) << '\n';
    } else if (*plot) {
      emit_plot(plot_in, plot_out);
    }
  } catch (const Error& e) {
    err << "error[" << e.code() << "]: " << e.what() << '\n';
    return e.kind() == ErrorKind::domain ? kExitDomain : kExitNumerical;
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace torusdirac::cli
