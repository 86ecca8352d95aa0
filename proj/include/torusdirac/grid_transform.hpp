#ifndef TORUSDIRAC_GRID_TRANSFORM_HPP
#define TORUSDIRAC_GRID_TRANSFORM_HPP

#include <array>
#include <vector>

#include "torusdirac/fft.hpp"
#include "torusdirac/field.hpp"

namespace torusdirac {

// Reusable synthesis engine for one (window, spin, resolution) triple.
// Coefficient vectors use the SpinorField layout; grids use GridSamples
// planes. Not safe for concurrent use of one instance.
class GridTransform {
 public:
  GridTransform(const ModeWindow& window, const SpinStructure& spin, Resolution res);

  const Resolution& resolution() const { return res_; }

  // planes[c][node] = sum_v coeff_v[c] exp(i <xi_v, p_node>).
  void synthesize(const Eigen::VectorXcd& coeffs, std::array<std::vector<cplx>, 2>& planes);

  // Adjoint of synthesize: out_v[c] = sum_node conj(exp(i <xi_v, p_node>)) planes[c][node].
  void adjoint(const std::array<std::vector<cplx>, 2>& planes, Eigen::VectorXcd& out);

 private:
  ModeWindow window_;
  Resolution res_;
  std::vector<cplx> twist1_;
  std::vector<cplx> twist2_;
  std::vector<std::size_t> slot_;  // grid offset of each mode
  FftPlan fft_;
};

}  // namespace torusdirac

#endif  // TORUSDIRAC_GRID_TRANSFORM_HPP
