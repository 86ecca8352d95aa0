#ifndef TORUSDIRAC_IO_HPP
#define TORUSDIRAC_IO_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "torusdirac/field.hpp"
#include "torusdirac/lattice.hpp"

namespace torusdirac {

// {"v1": [a, b], "v2": [c, d], "eps": [e1, e2]}
std::string lattice_to_json(const LatticeBasis& basis, const SpinStructure& spin);
std::pair<LatticeBasis, SpinStructure> lattice_from_json(const std::string& text);

// Either [{"x": .., "y": ..}, ...] or [[x, y], ...].
std::vector<ModuliPoint> points_from_json(const std::string& text);
std::string points_to_json(const std::vector<ModuliPoint>& points);

// One JSON header line, then the coefficients as little-endian doubles,
// (re, im) per spinor component, modes row-major over the window.
void write_field(std::ostream& out, const SpinorField& f);
SpinorField read_field(std::istream& in);

void write_field(const std::string& path, const SpinorField& f);
SpinorField read_field(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace torusdirac

#endif  // TORUSDIRAC_IO_HPP
