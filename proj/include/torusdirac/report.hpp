#ifndef TORUSDIRAC_REPORT_HPP
#define TORUSDIRAC_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "torusdirac/minimize.hpp"

namespace torusdirac {

inline constexpr const char* kSweepHeader = "x,y,lambda_hat,el_residual,iters,converged,flat_bound,ceiling";

// %.12g, the precision of every number written by this module.
std::string format_number(double v);

// Failed rows carry lambda_hat = nan and converged = 0.
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Throws FormatError naming the offending line.
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

struct PlotSpec {
  int width = 720;
  int height = 480;
  std::string title = "lambda_min estimates along the sweep";
};

// Standalone SVG. One marker per finite row (filled when converged, hollow
// otherwise) and two paths of class "reference": the constant 2 sqrt(pi) and
// the flat bound pi / sqrt(y). The abscissa is logarithmic when the y range
// spans more than a factor of 10. Throws FormatError("no rows") when empty.
std::string render_plot(const std::vector<SweepRow>& rows, const PlotSpec& spec = {});

void emit_plot(const std::string& csv_path, const std::string& svg_path, const PlotSpec& spec = {});

}  // namespace torusdirac

#endif  // TORUSDIRAC_REPORT_HPP
