#include "torusdirac/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "torusdirac/errors.hpp"

namespace torusdirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMergeTolerance = 1e-12;

bool same_value(double a, double b) {
  return std::abs(a - b) <= kMergeTolerance * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Index (a, b) of xi in the frequency set of (basis, spin):
// a + eps1/2 = <xi, v1> / (2 pi).
std::pair<int, int> mode_of(const LatticeBasis& basis, const SpinStructure& spin, const Vec2& xi) {
  return {static_cast<int>(std::lround(xi.dot(basis.v1) / kTwoPi - 0.5 * spin.eps1)),
          static_cast<int>(std::lround(xi.dot(basis.v2) / kTwoPi - 0.5 * spin.eps2))};
}

}  // namespace

std::vector<Vec2> twisted_frequencies(const LatticeBasis& basis, const SpinStructure& spin,
                                      double radius, std::size_t max_frequencies) {
  if (!(radius >= 0.0) || !std::isfinite(radius))
    throw ParameterError("frequency radius must be finite and non-negative");
  const ReducedLattice red = gauss_reduce(basis, spin);
  const LatticeBasis dual = dual_basis(red.basis);
  // For w = (a + eps1/2) d1 + (b + eps2/2) d2 we have a + eps1/2 = <w, v1>,
  // so |w| <= r forces |a + eps1/2| <= r |v1|: the window below is exhaustive.
  const double r = radius / kTwoPi;
  const auto range = [&](const Vec2& v, int eps) {
    const double reach = r * v.norm() * (1.0 + 1e-12) + 1e-12;
    return std::pair<long, long>{static_cast<long>(std::ceil(-reach - 0.5 * eps)),
                                 static_cast<long>(std::floor(reach - 0.5 * eps))};
  };
  const auto [a_lo, a_hi] = range(red.basis.v1, red.spin.eps1);
  const auto [b_lo, b_hi] = range(red.basis.v2, red.spin.eps2);
  const double box = std::max(0.0, static_cast<double>(a_hi - a_lo + 1)) *
                     std::max(0.0, static_cast<double>(b_hi - b_lo + 1));
  if (box > 16.0 * static_cast<double>(max_frequencies) + 64.0)
    throw EnumerationLimit("cutoff " + std::to_string(radius) + " needs about " +
                           std::to_string(static_cast<long long>(box)) + " lattice points");
  std::vector<Vec2> out;
  const double limit = radius * (1.0 + kMergeTolerance);
  for (long a = a_lo; a <= a_hi; ++a)
    for (long b = b_lo; b <= b_hi; ++b) {
      const Vec2 xi = kTwoPi * ((a + 0.5 * red.spin.eps1) * dual.v1 + (b + 0.5 * red.spin.eps2) * dual.v2);
      if (xi.norm() <= limit) {
        out.push_back(xi);
        if (out.size() > max_frequencies)
          throw EnumerationLimit("more than " + std::to_string(max_frequencies) +
                                 " frequencies below cutoff " + std::to_string(radius));
      }
    }
  return out;
}

std::vector<SpectrumEntry> dirac_spectrum(const LatticeBasis& basis, const SpinStructure& spin,
                                          double cutoff, std::size_t max_frequencies) {
  if (!(cutoff > 0.0)) throw ParameterError("cutoff must be positive");
  std::vector<Vec2> freqs = twisted_frequencies(basis, spin, cutoff, max_frequencies);
  std::stable_sort(freqs.begin(), freqs.end(),
                   [](const Vec2& a, const Vec2& b) { return a.norm() < b.norm(); });
  std::vector<SpectrumEntry> out;
  for (std::size_t i = 0; i < freqs.size();) {
    const double mag = freqs[i].norm();
    std::size_t j = i + 1;
    while (j < freqs.size() && same_value(freqs[j].norm(), mag)) ++j;
    const int count = static_cast<int>(j - i);
    if (mag == 0.0) {
      out.push_back({0.0, 2 * count, freqs[i]});
    } else {
      out.push_back({-mag, count, freqs[i]});
      out.push_back({mag, count, freqs[i]});
    }
    i = j;
  }
  return out;
}

double first_eigenvalue(const LatticeBasis& basis, const SpinStructure& spin) {
  if (spin.trivial()) {
    validate(basis);
    return 0.0;
  }
  const ReducedLattice red = gauss_reduce(basis, spin);
  // The frequency 2 pi delta of the reduced basis bounds the minimum.
  const double radius = kTwoPi * spin_shift(red.basis, red.spin).norm();
  const std::vector<Vec2> freqs = twisted_frequencies(red.basis, red.spin, radius);
  double best = radius;
  for (const Vec2& xi : freqs) best = std::min(best, xi.norm());
  return best;
}

double normalized_first(const LatticeBasis& basis, const SpinStructure& spin) {
  return first_eigenvalue(basis, spin) * std::sqrt(basis.area());
}

SpinorField eigenspinor(const LatticeBasis& basis, const SpinStructure& spin,
                        const SpectrumEntry& entry, int window) {
  const auto [a, b] = mode_of(basis, spin, entry.frequency);
  const int needed = std::max(std::abs(a), std::abs(b));
  if (window < 0) window = needed;
  if (window < needed)
    throw ParameterError("window " + std::to_string(window) + " cannot hold mode (" +
                         std::to_string(a) + "," + std::to_string(b) + ")");
  SpinorField f(basis, spin, window);
  const Vec2 xi = f.frequency(a, b);
  const double mag = xi.norm();
  if (std::abs(mag - std::abs(entry.lambda)) > 1e-9 * std::max(1.0, mag))
    throw ParameterError("spectrum entry does not belong to this torus");
  Spinor c;
  if (mag == 0.0) {
    c << 1.0, 0.0;
  } else {
    // (xi1 - i xi2, lambda) solves sigma(xi) c = lambda c when lambda^2 = |xi|^2.
    const double lambda = entry.lambda >= 0.0 ? mag : -mag;
    c << cplx(xi.x(), -xi.y()), lambda;
    c /= c.norm();
  }
  f.set_coefficient(a, b, c);
  return f;
}

SpinorField first_eigenspinor(const LatticeBasis& basis, const SpinStructure& spin, int window) {
  const double lambda = first_eigenvalue(basis, spin);
  const double cutoff = std::max(lambda, 1e-300) * (1.0 + 1e-9);
  const auto spectrum = dirac_spectrum(basis, spin, spin.trivial() ? 1e-9 : cutoff);
  for (const SpectrumEntry& e : spectrum)
    if (e.lambda >= 0.0) return eigenspinor(basis, spin, e, window);
  throw std::logic_error("first eigenvalue missing from its own spectrum window");
}

}  // namespace torusdirac
