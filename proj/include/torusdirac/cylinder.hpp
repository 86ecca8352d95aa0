#ifndef TORUSDIRAC_CYLINDER_HPP
#define TORUSDIRAC_CYLINDER_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "torusdirac/field.hpp"

namespace torusdirac {

// Mercator map of the cylinder R x R/2piZ onto the sphere minus both poles.
Eigen::Vector3d mercator(const Vec2& point);
// Same for the cylinder with period vector v, through the linear conformal
// map z -> 2 pi i z / v (complex notation) onto the standard cylinder.
Eigen::Vector3d mercator(const Vec2& point, const Vec2& period);

// Pullback of the round metric is f^2 times the euclidean one.
double conformal_factor(const Vec2& point);
double conformal_factor(const Vec2& point, const Vec2& period);

struct ConformalityReport {
  double max_orthogonality_defect = 0.0;  // |<J e1, J e2>| of the FD Jacobian
  double max_factor_error = 0.0;          // relative, column norms vs 1/cosh x
  double max_radius_error = 0.0;          // | |F(p)| - 1 |
  int points = 0;
};

// Central-difference Jacobian (step 1e-5) at `points` seeded random points
// with |x| <= 5.
ConformalityReport mercator_check(int points, std::uint64_t seed);

// Axial cutoffs built from the quintic smoothstep 6u^5 - 15u^4 + 10u^3,
// whose slope peaks at 15/8.
//   eta:   0 outside [-1, 2], 1 on [0, 1]
//   gamma: 0 outside [-w, 1 + w], 1 on [0, 1], |gamma'| <= 15 / (8 w)
struct CutoffProfile {
  enum class Kind { eta, gamma };
  Kind kind = Kind::eta;
  double width = 1.0;

  static CutoffProfile eta() { return {Kind::eta, 1.0}; }
  static CutoffProfile gamma(double width);

  double operator()(double s) const;
  double derivative(double s) const;
  std::pair<double, double> support() const;
};

// Samples of a spinor on the cylinder R^2 / Z v, v = (x0, y0) with y0 > 0.
// Node (k, j) sits at (j / m) v + (k h) e1 with h = 1 / axial_resolution,
// j in [0, m) and k in [-K, K], K = ceil(S / h). The spin structure is the
// nontrivial one: psi(p + v) = -psi(p).
struct CylinderGrid {
  Vec2 period{0.0, 1.0};
  double axial_extent = 1.0;    // S
  int periodic_resolution = 64;  // m, even
  int axial_resolution = 64;     // nodes per unit length along e1

  void validate() const;
  double step() const { return 1.0 / axial_resolution; }
  int half_count() const;  // K
  int axial_count() const { return 2 * half_count() + 1; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(axial_count()) * periodic_resolution;
  }
  double axial(int k) const { return k * step(); }  // k in [-K, K]
  double cell_area() const { return period.y() * step() / periodic_resolution; }
};

struct CylinderField {
  CylinderGrid grid;
  std::array<std::vector<cplx>, 2> planes;  // index (k + K) m + j

  explicit CylinderField(const CylinderGrid& g);
  std::size_t node(int k, int j) const {
    return static_cast<std::size_t>(k + grid.half_count()) * grid.periodic_resolution + j;
  }
  Spinor at(std::size_t node) const { return {planes[0][node], planes[1][node]}; }
};

// Samples fn(s, t) for t in [0, 1). The caller provides the anti-periodicity.
CylinderField sample(const CylinderGrid& grid, const std::function<Spinor(double s, double t)>& fn);

// Pulls a torus field on ((1, 0), v) back to the cylinder without a cutoff.
// Throws SpinMismatch unless the parity along v is odd, ParameterError when
// the torus does not match the grid.
CylinderField lift_to_cylinder(const SpinorField& f, const CylinderGrid& grid);

// cutoff(s) psi on the grid. Throws SupportError when the cutoff support
// leaves [-S, S], plus the errors of lift_to_cylinder.
CylinderField transplant(const SpinorField& f, const CutoffProfile& cutoff, const CylinderGrid& grid);

// D = -i (sigma_x d_X + sigma_y d_Y): exact twisted Fourier derivative in t,
// fourth-order central differences in s with zero values beyond the ends.
// Returned on the extended axial range [-K - pad, K + pad], pad = 8.
struct CylinderDirac {
  int pad = 8;
  std::array<std::vector<cplx>, 2> planes;
  std::array<std::vector<cplx>, 2> field;  // the input, zero padded
};
CylinderDirac apply_cylinder_dirac(const CylinderField& f);

// Integral of <D psi, psi> over nodes with s in [s_lo, s_hi).
double cylinder_pairing(const CylinderField& f, double s_lo, double s_hi);

// (int |D psi|^{4/3})^{3/2} / |int <D psi, psi>|. Throws SupportError unless
// the samples vanish on the end nodes, DegeneratePairing on a zero pairing.
double cylinder_J(const CylinderField& f);

// Field translated along e1: the result at p equals f at p + shift e1.
SpinorField translate_axial(const SpinorField& f, double shift);

struct StripChoice {
  int index = 0;
  double mass = 0.0;
  std::vector<double> masses;
};

// Masses of int |psi|^4 over the strips {t v + s e1 : s in [l/n, (l+1)/n)}
// computed exactly from the Fourier series in s; returns the lightest strip,
// lowest index on ties. n_strips = 0 selects floor(1 / (2 y)).
StripChoice best_translation(const SpinorField& f, int n_strips = 0);

// Smooth compactly supported spinor: a few half-integer modes in t with
// random axial oscillation under exp(-1 / (1 - u^2)) bumps inside [-S, S].
CylinderField random_bump_spinor(const CylinderGrid& grid, std::mt19937_64& rng);

// Pullback of the optimal spinor of the round sphere, (1, i z) / (1 + |z|^2)
// in a stereographic chart, centered at axial position `center` and cut off
// by exp(1 - 1 / (1 - a^8)), a = |s| / (0.95 S). Its J approaches 2 sqrt(pi)
// as S grows.
CylinderField sphere_bubble(const CylinderGrid& grid, double center = 0.0);

// Sphere bubble at a random center plus a random bump spinor of random
// relative size up to `noise`.
CylinderField perturbed_bubble(const CylinderGrid& grid, std::mt19937_64& rng, double noise = 0.3);

}  // namespace torusdirac

#endif  // TORUSDIRAC_CYLINDER_HPP
