#include "torusdirac/grid_transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torusdirac/errors.hpp"

namespace torusdirac {

namespace {
int wrap(int k, int m) { return ((k % m) + m) % m; }
}  // namespace

GridTransform::GridTransform(const ModeWindow& window, const SpinStructure& spin, Resolution res)
    : window_(window), res_(res), fft_(res.m1, res.m2, 2) {
  if (res.m1 < window.size1() || res.m2 < window.size2())
    throw ResolutionError("grid " + std::to_string(res.m1) + "x" + std::to_string(res.m2) +
                          " cannot resolve mode window " + std::to_string(window.n1) + "x" +
                          std::to_string(window.n2));
  const double pi = std::numbers::pi;
  twist1_.resize(res.m1);
  twist2_.resize(res.m2);
  for (int j = 0; j < res.m1; ++j) twist1_[j] = std::polar(1.0, pi * spin.eps1 * j / res.m1);
  for (int j = 0; j < res.m2; ++j) twist2_[j] = std::polar(1.0, pi * spin.eps2 * j / res.m2);
  slot_.resize(window.mode_count());
  std::size_t i = 0;
  for (int a = -window.n1; a <= window.n1; ++a)
    for (int b = -window.n2; b <= window.n2; ++b)
      slot_[i++] = static_cast<std::size_t>(wrap(a, res.m1)) * res.m2 + wrap(b, res.m2);
}

void GridTransform::synthesize(const Eigen::VectorXcd& coeffs,
                               std::array<std::vector<cplx>, 2>& planes) {
  const std::size_t nodes = res_.node_count();
  cplx* buf = fft_.data();
  std::fill(buf, buf + 2 * nodes, cplx{});
  for (std::size_t v = 0; v < slot_.size(); ++v) {
    buf[slot_[v]] = coeffs[2 * v];
    buf[nodes + slot_[v]] = coeffs[2 * v + 1];
  }
  fft_.backward();
  for (int c = 0; c < 2; ++c) {
    planes[c].resize(nodes);
    const cplx* src = buf + c * nodes;
    for (int j1 = 0; j1 < res_.m1; ++j1) {
      const std::size_t row = static_cast<std::size_t>(j1) * res_.m2;
      for (int j2 = 0; j2 < res_.m2; ++j2)
        planes[c][row + j2] = src[row + j2] * (twist1_[j1] * twist2_[j2]);
    }
  }
}

void GridTransform::adjoint(const std::array<std::vector<cplx>, 2>& planes, Eigen::VectorXcd& out) {
  const std::size_t nodes = res_.node_count();
  cplx* buf = fft_.data();
  for (int c = 0; c < 2; ++c) {
    cplx* dst = buf + c * nodes;
    for (int j1 = 0; j1 < res_.m1; ++j1) {
      const std::size_t row = static_cast<std::size_t>(j1) * res_.m2;
      for (int j2 = 0; j2 < res_.m2; ++j2)
        dst[row + j2] = planes[c][row + j2] * std::conj(twist1_[j1] * twist2_[j2]);
    }
  }
  fft_.forward();
  out.resize(2 * static_cast<Eigen::Index>(slot_.size()));
  for (std::size_t v = 0; v < slot_.size(); ++v) {
    out[2 * v] = buf[slot_[v]];
    out[2 * v + 1] = buf[nodes + slot_[v]];
  }
}

}  // namespace torusdirac
