#ifndef TORUSDIRAC_SPECTRUM_HPP
#define TORUSDIRAC_SPECTRUM_HPP

#include <cstddef>
#include <vector>

#include "torusdirac/field.hpp"
#include "torusdirac/lattice.hpp"

namespace torusdirac {

// One eigenvalue of the flat Dirac operator. Distinct lattice points with the
// same |xi| are merged; `frequency` is the first of them in enumeration order.
struct SpectrumEntry {
  double lambda = 0.0;
  int multiplicity = 0;
  Vec2 frequency = Vec2::Zero();
};

inline constexpr std::size_t kDefaultSpectrumCap = 4'000'000;

// Every eigenvalue with |lambda| <= cutoff, sorted by |lambda| and then by
// sign. Each twisted frequency xi contributes +|xi| and -|xi| once; xi = 0
// (trivial spin structure only) contributes 0 twice.
std::vector<SpectrumEntry> dirac_spectrum(const LatticeBasis& basis, const SpinStructure& spin,
                                          double cutoff,
                                          std::size_t max_frequencies = kDefaultSpectrumCap);

// All twisted frequencies with |xi| <= radius, in enumeration order.
std::vector<Vec2> twisted_frequencies(const LatticeBasis& basis, const SpinStructure& spin,
                                      double radius,
                                      std::size_t max_frequencies = kDefaultSpectrumCap);

// min |xi| over the twisted frequency set; zero iff the spin structure is trivial.
double first_eigenvalue(const LatticeBasis& basis, const SpinStructure& spin);

// first_eigenvalue * sqrt(area); invariant under similarities.
double normalized_first(const LatticeBasis& basis, const SpinStructure& spin);

// Single-mode spinor c exp(i <xi, p>) with c an eigenvector of the Clifford
// symbol for entry.lambda. Unit pointwise modulus. The window defaults to
// the smallest square one holding the mode.
SpinorField eigenspinor(const LatticeBasis& basis, const SpinStructure& spin,
                        const SpectrumEntry& entry, int window = -1);

// Eigenspinor of the smallest positive eigenvalue.
SpinorField first_eigenspinor(const LatticeBasis& basis, const SpinStructure& spin, int window = -1);

}  // namespace torusdirac

#endif  // TORUSDIRAC_SPECTRUM_HPP
