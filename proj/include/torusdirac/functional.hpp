#ifndef TORUSDIRAC_FUNCTIONAL_HPP
#define TORUSDIRAC_FUNCTIONAL_HPP

#include <array>
#include <vector>

#include <Eigen/Core>

#include "torusdirac/field.hpp"
#include "torusdirac/grid_transform.hpp"

namespace torusdirac {

// Lott's functional on a fixed torus, window and grid, operating on raw
// coefficient vectors (SpinorField layout). Caches the frequency table and
// FFT workspace, so one instance serves a whole optimization run.
//
// The gradient G is taken with respect to the real inner product
// Re <G, h> = Re sum conj(G_i) h_i, i.e. dJ[h] = Re <G, h>.
class LottFunctional {
 public:
  LottFunctional(const LatticeBasis& basis, const SpinStructure& spin, ModeWindow window,
                 Resolution res);

  const LatticeBasis& basis() const { return basis_; }
  const SpinStructure& spin() const { return spin_; }
  const ModeWindow& window() const { return window_; }
  const Resolution& resolution() const { return res_; }
  double area() const { return basis_.area(); }
  const std::vector<Vec2>& frequencies() const { return freqs_; }

  // Throws DegeneratePairing when the pairing vanishes.
  double value(const Eigen::VectorXcd& c);
  double value_and_gradient(const Eigen::VectorXcd& c, Eigen::VectorXcd& grad);

  // Closed-form integral <D psi, psi>.
  double pairing(const Eigen::VectorXcd& c) const;
  // area * sum |xi| |c|^2, the scale against which a pairing counts as zero.
  double pairing_scale(const Eigen::VectorXcd& c) const;

  // int |psi|^4 by quadrature (exact at the default resolution).
  double l4_integral(const Eigen::VectorXcd& c);

  // || D psi - lambda |psi|^2 psi ||_{L^2} by quadrature.
  double el_residual(const Eigen::VectorXcd& c, double lambda);

  // Mode-wise Clifford symbol and its inverse. The inverse requires every
  // frequency to be nonzero (nontrivial spin structure).
  Eigen::VectorXcd apply_symbol(const Eigen::VectorXcd& c) const;
  Eigen::VectorXcd apply_inverse_symbol(const Eigen::VectorXcd& c) const;

  // Fourier coefficients of |psi|^2 psi inside the window, so that
  // D psi = lambda |psi|^2 psi reads symbol * c = lambda * cubic_modes(c).
  Eigen::VectorXcd cubic_modes(const Eigen::VectorXcd& c);

  SpinorField to_field(const Eigen::VectorXcd& c) const;

 private:
  double numerator_integral(const Eigen::VectorXcd& c, bool keep_weights);

  LatticeBasis basis_;
  SpinStructure spin_;
  ModeWindow window_;
  Resolution res_;
  double cell_area_;
  std::vector<Vec2> freqs_;
  GridTransform transform_;
  std::array<std::vector<cplx>, 2> grid_;
  Eigen::VectorXcd work_;
};

}  // namespace torusdirac

#endif  // TORUSDIRAC_FUNCTIONAL_HPP
