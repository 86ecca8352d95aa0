#include "torusdirac/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "torusdirac/errors.hpp"
#include "torusdirac/grid_transform.hpp"

namespace torusdirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegeneratePairing = 1e-12;
constexpr double kRealnessTolerance = 1e-10;

void require_compatible(const SpinorField& f, const SpinorField& g) {
  if (!f.compatible(g)) throw ParameterError("spinor fields live on different tori or windows");
}

// Applies the Clifford symbol (or i xi_k for the gradient) mode by mode.
template <typename ModeOp>
SpinorField map_modes(const SpinorField& f, ModeOp op) {
  SpinorField out(f.basis(), f.spin(), f.window());
  const auto& in = f.coefficients();
  auto& dst = out.coefficients();
  for (std::size_t v = 0; v < f.mode_count(); ++v) {
    const Spinor c(in[2 * v], in[2 * v + 1]);
    const Spinor r = op(f.frequency(v), c);
    dst[2 * v] = r[0];
    dst[2 * v + 1] = r[1];
  }
  return out;
}

bool is_exponent(double p, double value) { return std::abs(p - value) < 1e-12; }

}  // namespace

Eigen::Matrix2cd clifford_symbol(const Vec2& xi) {
  Eigen::Matrix2cd s;
  s << 0.0, cplx(xi.x(), -xi.y()), cplx(xi.x(), xi.y()), 0.0;
  return s;
}

int fft_friendly_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

Resolution default_resolution(const ModeWindow& window) {
  return {fft_friendly_size(4 * window.size1() + 1), fft_friendly_size(4 * window.size2() + 1)};
}

SpinorField::SpinorField(const LatticeBasis& basis, const SpinStructure& spin, ModeWindow window)
    : basis_(basis), spin_(spin), window_(window), dual_(dual_basis(basis)) {
  if (window.n1 < 0 || window.n2 < 0) throw ParameterError("mode window must be non-negative");
  if ((spin.eps1 != 0 && spin.eps1 != 1) || (spin.eps2 != 0 && spin.eps2 != 1))
    throw ParameterError("spin parities must be 0 or 1");
  coeffs_ = Eigen::VectorXcd::Zero(2 * static_cast<Eigen::Index>(window.mode_count()));
}

Vec2 SpinorField::frequency(int a, int b) const {
  return kTwoPi * ((a + 0.5 * spin_.eps1) * dual_.v1 + (b + 0.5 * spin_.eps2) * dual_.v2);
}

Spinor SpinorField::coefficient(int a, int b) const {
  if (!window_.contains(a, b)) return Spinor::Zero();
  const std::size_t i = mode_index(a, b);
  return {coeffs_[2 * i], coeffs_[2 * i + 1]};
}

void SpinorField::set_coefficient(int a, int b, const Spinor& value) {
  if (!window_.contains(a, b))
    throw ParameterError("mode (" + std::to_string(a) + "," + std::to_string(b) +
                         ") outside the window");
  const std::size_t i = mode_index(a, b);
  coeffs_[2 * i] = value[0];
  coeffs_[2 * i + 1] = value[1];
}

Spinor SpinorField::evaluate(const Vec2& point) const {
  Spinor sum = Spinor::Zero();
  for (std::size_t v = 0; v < mode_count(); ++v) {
    const cplx phase = std::polar(1.0, frequency(v).dot(point));
    sum[0] += coeffs_[2 * v] * phase;
    sum[1] += coeffs_[2 * v + 1] * phase;
  }
  return sum;
}

bool SpinorField::compatible(const SpinorField& other) const {
  return basis_.v1 == other.basis_.v1 && basis_.v2 == other.basis_.v2 && spin_ == other.spin_ &&
         window_ == other.window_;
}

SpinorField& SpinorField::operator+=(const SpinorField& other) {
  require_compatible(*this, other);
  coeffs_ += other.coeffs_;
  return *this;
}

SpinorField& SpinorField::operator*=(cplx factor) {
  coeffs_ *= factor;
  return *this;
}

SpinorField operator+(SpinorField lhs, const SpinorField& rhs) { return lhs += rhs; }
SpinorField operator*(cplx factor, SpinorField f) { return f *= factor; }

SpinorField apply_dirac(const SpinorField& f) {
  return map_modes(f, [](const Vec2& xi, const Spinor& c) -> Spinor {
    return clifford_symbol(xi) * c;
  });
}

std::pair<SpinorField, SpinorField> apply_flat_gradient(const SpinorField& f) {
  const cplx i(0.0, 1.0);
  return {map_modes(f, [&](const Vec2& xi, const Spinor& c) -> Spinor { return i * xi.x() * c; }),
          map_modes(f, [&](const Vec2& xi, const Spinor& c) -> Spinor { return i * xi.y() * c; })};
}

GridSamples synthesize(const SpinorField& f, Resolution res) {
  GridTransform transform(f.window(), f.spin(), res);
  GridSamples g;
  g.resolution = res;
  g.cell_area = f.area() / static_cast<double>(res.node_count());
  transform.synthesize(f.coefficients(), g.planes);
  return g;
}

GridSamples synthesize(const SpinorField& f) { return synthesize(f, default_resolution(f.window())); }

GridSamples synthesize_direct(const SpinorField& f, Resolution res) {
  if (res.m1 < f.window().size1() || res.m2 < f.window().size2())
    throw ResolutionError("grid too coarse for the mode window");
  GridSamples g;
  g.resolution = res;
  g.cell_area = f.area() / static_cast<double>(res.node_count());
  g.planes[0].resize(res.node_count());
  g.planes[1].resize(res.node_count());
  for (int j1 = 0; j1 < res.m1; ++j1)
    for (int j2 = 0; j2 < res.m2; ++j2) {
      const Vec2 p = (static_cast<double>(j1) / res.m1) * f.basis().v1 +
                     (static_cast<double>(j2) / res.m2) * f.basis().v2;
      const Spinor s = f.evaluate(p);
      g.planes[0][g.node(j1, j2)] = s[0];
      g.planes[1][g.node(j1, j2)] = s[1];
    }
  return g;
}

double lp_norm(const GridSamples& g, double p) {
  double sum = 0.0;
  const std::size_t nodes = g.resolution.node_count();
  if (is_exponent(p, 4.0 / 3.0)) {
    for (std::size_t j = 0; j < nodes; ++j) sum += std::cbrt(g.norm_sq(j) * g.norm_sq(j));
  } else if (is_exponent(p, 2.0)) {
    for (std::size_t j = 0; j < nodes; ++j) sum += g.norm_sq(j);
  } else if (is_exponent(p, 4.0)) {
    for (std::size_t j = 0; j < nodes; ++j) sum += g.norm_sq(j) * g.norm_sq(j);
  } else {
    throw ParameterError("lp_norm supports p = 4/3, 2, 4 only");
  }
  return std::pow(sum * g.cell_area, 1.0 / p);
}

cplx inner_product(const SpinorField& f, const SpinorField& g) {
  require_compatible(f, g);
  return f.area() * f.coefficients().dot(g.coefficients());
}

double dirac_pairing(const SpinorField& f) {
  const auto& c = f.coefficients();
  cplx sum = 0.0;
  double scale = 0.0;
  for (std::size_t v = 0; v < f.mode_count(); ++v) {
    const Vec2 xi = f.frequency(v);
    const Spinor cv(c[2 * v], c[2 * v + 1]);
    sum += cv.dot(clifford_symbol(xi) * cv);
    scale += xi.norm() * cv.squaredNorm();
  }
  if (std::abs(sum.imag()) > kRealnessTolerance * std::max(scale, 1e-300))
    throw std::logic_error("Dirac pairing is not real; the Clifford symbol lost hermiticity");
  return f.area() * sum.real();
}

double evaluate_J(const SpinorField& f, Resolution res) {
  double scale = 0.0;
  const auto& c = f.coefficients();
  for (std::size_t v = 0; v < f.mode_count(); ++v)
    scale += f.frequency(v).norm() * (std::norm(c[2 * v]) + std::norm(c[2 * v + 1]));
  scale *= f.area();
  const double pairing = dirac_pairing(f);
  if (!(std::abs(pairing) > kDegeneratePairing * scale))
    throw DegeneratePairing("integral <D psi, psi> vanishes; the field is not an admissible test spinor");
  const GridSamples d = synthesize(apply_dirac(f), res);
  const double numerator = lp_norm(d, 4.0 / 3.0);
  return std::pow(numerator, 2.0) / std::abs(pairing);
}

double evaluate_J(const SpinorField& f) { return evaluate_J(f, default_resolution(f.window())); }

SpinorField lift_to_cover(const SpinorField& f, int p) {
  if (p % 2 == 0)
    throw ParityError("a covering of even degree " + std::to_string(p) +
                      " does not preserve the spin structure");
  if (p < 3) throw ParameterError("covering degree must be at least 3");
  const LatticeBasis cover{f.basis().v1, p * f.basis().v2};
  const int shift = (p - 1) / 2 * f.spin().eps2;
  const ModeWindow window{f.window().n1, p * f.window().n2 + shift};
  SpinorField out(cover, f.spin(), window);
  for (std::size_t v = 0; v < f.mode_count(); ++v) {
    const auto [a, b] = f.mode_at(v);
    out.set_coefficient(a, p * b + shift, {f.coefficients()[2 * v], f.coefficients()[2 * v + 1]});
  }
  return out;
}

double elliptic_ratio(const SpinorField& f, Resolution res) {
  if (f.spin().trivial() && f.coefficient(0, 0).squaredNorm() > 0.0)
    throw UnboundedRatio("a parallel component has zero Dirac image; the ratio is unbounded");
  const GridSamples d = synthesize(apply_dirac(f), res);
  const auto [d1, d2] = apply_flat_gradient(f);
  const GridSamples g1 = synthesize(d1, res);
  const GridSamples g2 = synthesize(d2, res);
  double grad = 0.0;
  for (std::size_t j = 0; j < res.node_count(); ++j) {
    const double n = g1.norm_sq(j) + g2.norm_sq(j);
    grad += std::cbrt(n * n);
  }
  const double grad_norm = std::pow(grad * d.cell_area, 0.75);
  const double dirac_norm = lp_norm(d, 4.0 / 3.0);
  if (dirac_norm == 0.0) {
    if (grad_norm == 0.0) return 0.0;
    throw UnboundedRatio("Dirac image vanishes while the gradient does not");
  }
  return grad_norm / dirac_norm;
}

double elliptic_ratio(const SpinorField& f) { return elliptic_ratio(f, default_resolution(f.window())); }

double normalize_l4(SpinorField& f, Resolution res) {
  const double norm = lp_norm(synthesize(f, res), 4.0);
  if (!(norm > 0.0)) throw ParameterError("cannot normalize the zero field");
  const double factor = 1.0 / norm;
  f *= factor;
  return factor;
}

}  // namespace torusdirac
