#include "torusdirac/functional.hpp"

#include <cmath>

#include "torusdirac/errors.hpp"

namespace torusdirac {

namespace {
constexpr double kDegeneratePairing = 1e-12;
}  // namespace

LottFunctional::LottFunctional(const LatticeBasis& basis, const SpinStructure& spin,
                               ModeWindow window, Resolution res)
    : basis_(basis),
      spin_(spin),
      window_(window),
      res_(res),
      cell_area_(basis.area() / static_cast<double>(res.node_count())),
      transform_(window, spin, res) {
  const SpinorField probe(basis, spin, window);
  freqs_.resize(probe.mode_count());
  for (std::size_t v = 0; v < freqs_.size(); ++v) freqs_[v] = probe.frequency(v);
}

Eigen::VectorXcd LottFunctional::apply_symbol(const Eigen::VectorXcd& c) const {
  Eigen::VectorXcd out(c.size());
  for (std::size_t v = 0; v < freqs_.size(); ++v) {
    const cplx plus(freqs_[v].x(), freqs_[v].y());
    out[2 * v] = std::conj(plus) * c[2 * v + 1];
    out[2 * v + 1] = plus * c[2 * v];
  }
  return out;
}

Eigen::VectorXcd LottFunctional::apply_inverse_symbol(const Eigen::VectorXcd& c) const {
  Eigen::VectorXcd out(c.size());
  for (std::size_t v = 0; v < freqs_.size(); ++v) {
    const double n2 = freqs_[v].squaredNorm();
    if (n2 == 0.0) throw UnsupportedSpin("the Dirac operator has a kernel; it cannot be inverted");
    const cplx plus(freqs_[v].x(), freqs_[v].y());
    out[2 * v] = std::conj(plus) * c[2 * v + 1] / n2;
    out[2 * v + 1] = plus * c[2 * v] / n2;
  }
  return out;
}

double LottFunctional::pairing(const Eigen::VectorXcd& c) const {
  double sum = 0.0;
  for (std::size_t v = 0; v < freqs_.size(); ++v) {
    // c^H sigma c = 2 Re( conj(c0) (xi1 - i xi2) c1 )
    const cplx minus(freqs_[v].x(), -freqs_[v].y());
    sum += 2.0 * (std::conj(c[2 * v]) * minus * c[2 * v + 1]).real();
  }
  return area() * sum;
}

double LottFunctional::pairing_scale(const Eigen::VectorXcd& c) const {
  double sum = 0.0;
  for (std::size_t v = 0; v < freqs_.size(); ++v)
    sum += freqs_[v].norm() * (std::norm(c[2 * v]) + std::norm(c[2 * v + 1]));
  return area() * sum;
}

double LottFunctional::numerator_integral(const Eigen::VectorXcd& c, bool keep_weights) {
  transform_.synthesize(apply_symbol(c), grid_);
  double sum = 0.0;
  const std::size_t nodes = res_.node_count();
  for (std::size_t j = 0; j < nodes; ++j) {
    const double n2 = std::norm(grid_[0][j]) + std::norm(grid_[1][j]);
    const double p = std::cbrt(n2 * n2);  // |D psi|^{4/3}
    sum += p;
    if (keep_weights) {
      // (4/3) |phi|^{-2/3} phi, continuous through phi = 0.
      const double w = n2 > 0.0 ? (4.0 / 3.0) * p / n2 : 0.0;
      grid_[0][j] *= w;
      grid_[1][j] *= w;
    }
  }
  return sum * cell_area_;
}

double LottFunctional::value(const Eigen::VectorXcd& c) {
  const double b = pairing(c);
  if (!(std::abs(b) > kDegeneratePairing * pairing_scale(c)))
    throw DegeneratePairing("integral <D psi, psi> vanishes");
  const double a = numerator_integral(c, false);
  return std::pow(a, 1.5) / std::abs(b);
}

double LottFunctional::value_and_gradient(const Eigen::VectorXcd& c, Eigen::VectorXcd& grad) {
  const double b = pairing(c);
  if (!(std::abs(b) > kDegeneratePairing * pairing_scale(c)))
    throw DegeneratePairing("integral <D psi, psi> vanishes");
  const double a = numerator_integral(c, true);
  const double j = std::pow(a, 1.5) / std::abs(b);
  transform_.adjoint(grid_, work_);
  // grad A = cell * sigma S^* w,  grad B = 2 area sigma c
  grad = apply_symbol(1.5 * cell_area_ / a * work_ - (2.0 * area() / b) * c);
  grad *= j;
  return j;
}

double LottFunctional::l4_integral(const Eigen::VectorXcd& c) {
  transform_.synthesize(c, grid_);
  double sum = 0.0;
  for (std::size_t j = 0; j < res_.node_count(); ++j) {
    const double n2 = std::norm(grid_[0][j]) + std::norm(grid_[1][j]);
    sum += n2 * n2;
  }
  return sum * cell_area_;
}

double LottFunctional::el_residual(const Eigen::VectorXcd& c, double lambda) {
  std::array<std::vector<cplx>, 2> psi;
  transform_.synthesize(c, psi);
  transform_.synthesize(apply_symbol(c), grid_);
  double sum = 0.0;
  for (std::size_t j = 0; j < res_.node_count(); ++j) {
    const double n2 = std::norm(psi[0][j]) + std::norm(psi[1][j]);
    sum += std::norm(grid_[0][j] - lambda * n2 * psi[0][j]) +
           std::norm(grid_[1][j] - lambda * n2 * psi[1][j]);
  }
  return std::sqrt(sum * cell_area_);
}

Eigen::VectorXcd LottFunctional::cubic_modes(const Eigen::VectorXcd& c) {
  transform_.synthesize(c, grid_);
  for (std::size_t j = 0; j < res_.node_count(); ++j) {
    const double n2 = std::norm(grid_[0][j]) + std::norm(grid_[1][j]);
    grid_[0][j] *= n2;
    grid_[1][j] *= n2;
  }
  Eigen::VectorXcd out;
  transform_.adjoint(grid_, out);
  return out / static_cast<double>(res_.node_count());
}

SpinorField LottFunctional::to_field(const Eigen::VectorXcd& c) const {
  SpinorField f(basis_, spin_, window_);
  f.coefficients() = c;
  return f;
}

}  // namespace torusdirac
