#ifndef TORUSDIRAC_FIELD_HPP
#define TORUSDIRAC_FIELD_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "torusdirac/lattice.hpp"

namespace torusdirac {

using cplx = std::complex<double>;
using Spinor = Eigen::Vector2cd;

// Index window [-n1, n1] x [-n2, n2] of Fourier modes (a, b).
struct ModeWindow {
  int n1 = 0;
  int n2 = 0;

  static ModeWindow square(int n) { return {n, n}; }
  int size1() const { return 2 * n1 + 1; }
  int size2() const { return 2 * n2 + 1; }
  std::size_t mode_count() const { return static_cast<std::size_t>(size1()) * size2(); }
  bool contains(int a, int b) const { return std::abs(a) <= n1 && std::abs(b) <= n2; }

  friend bool operator==(const ModeWindow&, const ModeWindow&) = default;
};

// Uniform grid size in lattice coordinates (t1, t2) in [0,1)^2.
struct Resolution {
  int m1 = 0;
  int m2 = 0;

  static Resolution square(int m) { return {m, m}; }
  std::size_t node_count() const { return static_cast<std::size_t>(m1) * m2; }

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

// Hermitian Clifford symbol xi_1 sigma_x + xi_2 sigma_y. Its square is
// |xi|^2 times the identity.
Eigen::Matrix2cd clifford_symbol(const Vec2& xi);

// Smallest 2^a 3^b 5^c 7^d not below n.
int fft_friendly_size(int n);

// 4 (2n+1) + 1 per direction, rounded up to an FFT-friendly size. At this
// resolution |psi|^4 is integrated exactly.
Resolution default_resolution(const ModeWindow& window);

// Twisted Fourier series psi(p) = sum_{(a,b)} c_{ab} exp(i <xi_{ab}, p>) with
// xi_{ab} = 2 pi ((a + eps1/2) d1 + (b + eps2/2) d2). Each term picks up
// chi(gamma) under translation by a lattice vector gamma.
//
// Coefficients are stored densely, mode-major with the two spinor components
// adjacent: index ((a + n1) (2 n2 + 1) + (b + n2)) * 2 + component.
class SpinorField {
 public:
  SpinorField() : SpinorField(LatticeBasis{}, SpinStructure{}, ModeWindow{}) {}
  SpinorField(const LatticeBasis& basis, const SpinStructure& spin, ModeWindow window);
  SpinorField(const LatticeBasis& basis, const SpinStructure& spin, int window)
      : SpinorField(basis, spin, ModeWindow::square(window)) {}

  const LatticeBasis& basis() const { return basis_; }
  const SpinStructure& spin() const { return spin_; }
  const ModeWindow& window() const { return window_; }
  const LatticeBasis& dual() const { return dual_; }
  double area() const { return basis_.area(); }
  std::size_t mode_count() const { return window_.mode_count(); }

  std::size_t mode_index(int a, int b) const {
    return static_cast<std::size_t>(a + window_.n1) * window_.size2() + (b + window_.n2);
  }
  // Inverse of mode_index.
  std::pair<int, int> mode_at(std::size_t index) const {
    const auto s2 = static_cast<std::size_t>(window_.size2());
    return {static_cast<int>(index / s2) - window_.n1, static_cast<int>(index % s2) - window_.n2};
  }

  Vec2 frequency(int a, int b) const;
  Vec2 frequency(std::size_t index) const {
    auto [a, b] = mode_at(index);
    return frequency(a, b);
  }

  Spinor coefficient(int a, int b) const;
  void set_coefficient(int a, int b, const Spinor& value);

  Eigen::VectorXcd& coefficients() { return coeffs_; }
  const Eigen::VectorXcd& coefficients() const { return coeffs_; }

  // Direct summation at an arbitrary point of R^2.
  Spinor evaluate(const Vec2& point) const;

  // Same torus, spin structure and window.
  bool compatible(const SpinorField& other) const;

  SpinorField& operator+=(const SpinorField& other);
  SpinorField& operator*=(cplx factor);

 private:
  LatticeBasis basis_;
  SpinStructure spin_;
  ModeWindow window_;
  LatticeBasis dual_;
  Eigen::VectorXcd coeffs_;
};

SpinorField operator+(SpinorField lhs, const SpinorField& rhs);
SpinorField operator*(cplx factor, SpinorField f);

// Values on an m1 x m2 grid over the fundamental parallelogram, node (j1, j2)
// at (j1/m1) v1 + (j2/m2) v2. Stored as two component planes, row-major.
struct GridSamples {
  Resolution resolution;
  double cell_area = 0.0;
  std::array<std::vector<cplx>, 2> planes;

  std::size_t node(int j1, int j2) const {
    return static_cast<std::size_t>(j1) * resolution.m2 + j2;
  }
  Spinor at(std::size_t node) const { return {planes[0][node], planes[1][node]}; }
  double norm_sq(std::size_t node) const {
    return std::norm(planes[0][node]) + std::norm(planes[1][node]);
  }
};

SpinorField apply_dirac(const SpinorField& f);
std::pair<SpinorField, SpinorField> apply_flat_gradient(const SpinorField& f);

// Exact evaluation of the series at the grid nodes through a 2-D FFT. Throws
// ResolutionError when m_i < 2 n_i + 1.
GridSamples synthesize(const SpinorField& f, Resolution res);
GridSamples synthesize(const SpinorField& f);

// Reference implementation by direct summation, O(modes * nodes).
GridSamples synthesize_direct(const SpinorField& f, Resolution res);

// (sum |value|^p cell_area)^(1/p), p in {4/3, 2, 4}.
double lp_norm(const GridSamples& g, double p);

// L^2 inner product <f, g> = integral of f^H g, evaluated in mode space.
cplx inner_product(const SpinorField& f, const SpinorField& g);

// integral <D psi, psi> in closed form from the modes. Real for every field.
double dirac_pairing(const SpinorField& f);

// Lott's functional (int |D psi|^{4/3})^{3/2} / |int <D psi, psi>|. The
// numerator is a grid quadrature, the denominator exact. Throws
// DegeneratePairing when the pairing vanishes relative to its natural scale.
double evaluate_J(const SpinorField& f, Resolution res);
double evaluate_J(const SpinorField& f);

// Pullback under the p-fold covering R^2/<v1, p v2> -> R^2/<v1, v2>. The
// represented function on R^2 is unchanged. p must be odd and at least 3.
SpinorField lift_to_cover(const SpinorField& f, int p);

// ||grad psi||_{4/3} / ||D psi||_{4/3}; 0 for the zero field.
double elliptic_ratio(const SpinorField& f, Resolution res);
double elliptic_ratio(const SpinorField& f);

// Rescales f so that int |psi|^4 = 1 at resolution res. Returns the factor.
double normalize_l4(SpinorField& f, Resolution res);

}  // namespace torusdirac

#endif  // TORUSDIRAC_FIELD_HPP
