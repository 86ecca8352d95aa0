#include "torusdirac/report.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "torusdirac/errors.hpp"
#include "torusdirac/io.hpp"

namespace torusdirac {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& field, int line) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw FormatError("line " + std::to_string(line) + ": bad number '" + field + "'");
  return v;
}

struct Axis {
  double lo, hi;
  bool log;
  double pixel_lo, pixel_hi;
  double map(double v) const {
    const double u = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo)) : (v - lo) / (hi - lo);
    return pixel_lo + u * (pixel_hi - pixel_lo);
  }
};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    const bool ok = r.error.empty();
    out += format_number(r.point.x) + ',' + format_number(r.point.y) + ',' +
           format_number(ok ? r.lambda_hat : std::nan("")) + ',' + format_number(ok ? r.el_residual : std::nan("")) +
           ',' + std::to_string(r.iterations) + ',' + (ok && r.converged ? "1" : "0") + ',' +
           format_number(r.flat_bound) + ',' + format_number(r.ceiling) + '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  bool header = false;
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kSweepHeader) throw FormatError("line " + std::to_string(number) + ": unexpected header");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8)
      throw FormatError("line " + std::to_string(number) + ": expected 8 fields, found " + std::to_string(f.size()));
    SweepRow r;
    r.point = {parse_number(f[0], number), parse_number(f[1], number)};
    r.lambda_hat = parse_number(f[2], number);
    r.el_residual = parse_number(f[3], number);
    const double iters = parse_number(f[4], number);
    if (iters < 0 || iters != std::floor(iters))
      throw FormatError("line " + std::to_string(number) + ": iteration count must be a non-negative integer");
    r.iterations = static_cast<int>(iters);
    if (f[5] != "0" && f[5] != "1") throw FormatError("line " + std::to_string(number) + ": converged must be 0 or 1");
    r.converged = f[5] == "1";
    r.flat_bound = parse_number(f[6], number);
    r.ceiling = parse_number(f[7], number);
    rows.push_back(r);
  }
  return rows;
}

std::string render_plot(const std::vector<SweepRow>& rows, const PlotSpec& spec) {
  if (rows.empty()) throw FormatError("no rows");
  double ylo = rows.front().point.y, yhi = ylo, vmax = sphere_value();
  for (const SweepRow& r : rows) {
    if (!(r.point.y > 0.0)) throw FormatError("sweep rows need y > 0");
    ylo = std::min(ylo, r.point.y);
    yhi = std::max(yhi, r.point.y);
    if (std::isfinite(r.lambda_hat)) vmax = std::max(vmax, r.lambda_hat);
  }
  const bool log_axis = yhi / ylo > 10.0;
  if (yhi == ylo) {
    ylo *= 0.5;
    yhi *= 1.5;
  } else if (!log_axis) {
    const double pad = 0.05 * (yhi - ylo);
    ylo = std::max(ylo - pad, 0.5 * ylo);
    yhi += pad;
  }
  vmax *= 1.15;

  const double left = 70, right = spec.width - 20, top = 40, bottom = spec.height - 50;
  const Axis ax{ylo, yhi, log_axis, left, right};
  const Axis ay{0.0, vmax, false, bottom, top};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << px(spec.width / 2.0) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << spec.title << "</text>\n"
      << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
      << "<path d=\"M" << px(left) << ' ' << px(top) << " V" << px(bottom) << " H" << px(right) << "\"/>\n"
      << "</g>\n";

  svg << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  std::vector<double> xt;
  if (log_axis) {
    for (int e = static_cast<int>(std::floor(std::log10(ylo))); e <= static_cast<int>(std::ceil(std::log10(yhi))); ++e)
      for (double m : {1.0, 2.0, 5.0}) {
        const double v = m * std::pow(10.0, e);
        if (v >= ylo * (1 - 1e-12) && v <= yhi * (1 + 1e-12)) xt.push_back(v);
      }
  } else {
    for (int i = 0; i <= 5; ++i) xt.push_back(ylo + (yhi - ylo) * i / 5.0);
  }
  for (double v : xt)
    svg << "<text x=\"" << px(ax.map(v)) << "\" y=\"" << px(bottom + 16) << "\" text-anchor=\"middle\">"
        << format_number(std::round(v * 1e4) / 1e4) << "</text>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = vmax * i / 5.0;
    svg << "<text x=\"" << px(left - 6) << "\" y=\"" << px(ay.map(v) + 4) << "\" text-anchor=\"end\">"
        << format_number(std::round(v * 100) / 100) << "</text>\n";
  }
  svg << "<text x=\"" << px((left + right) / 2) << "\" y=\"" << px(spec.height - 12.0)
      << "\" text-anchor=\"middle\">y" << (log_axis ? " (log scale)" : "") << "</text>\n"
      << "<text x=\"16\" y=\"" << px((top + bottom) / 2) << "\" transform=\"rotate(-90 16 " << px((top + bottom) / 2)
      << ")\" text-anchor=\"middle\">lambda_hat</text>\n</g>\n";

  const double sphere = sphere_value();
  svg << "<path class=\"reference\" data-label=\"2 sqrt(pi)\" stroke=\"#1f77b4\" stroke-dasharray=\"6 4\" "
      << "fill=\"none\" d=\"M" << px(left) << ' ' << px(ay.map(sphere)) << " H" << px(right) << "\"/>\n";
  svg << "<path class=\"reference\" data-label=\"pi / sqrt(y)\" stroke=\"#d62728\" stroke-dasharray=\"2 3\" "
      << "fill=\"none\" d=\"";
  constexpr int kSamples = 200;
  bool pen = false;
  for (int i = 0; i <= kSamples; ++i) {
    const double u = static_cast<double>(i) / kSamples;
    const double y = log_axis ? ylo * std::pow(yhi / ylo, u) : ylo + (yhi - ylo) * u;
    const double v = flat_bound({0.0, y});
    if (v > vmax) {
      pen = false;
      continue;
    }
    svg << (pen ? " L" : (i == 0 ? "M" : " M")) << px(ax.map(y)) << ' ' << px(ay.map(v));
    pen = true;
  }
  svg << "\"/>\n";

  svg << "<g class=\"data\" stroke=\"black\">\n";
  for (const SweepRow& r : rows) {
    if (!std::isfinite(r.lambda_hat)) continue;
    svg << "<circle class=\"marker " << (r.converged ? "converged" : "unconverged") << "\" cx=\""
        << px(ax.map(r.point.y)) << "\" cy=\"" << px(ay.map(r.lambda_hat)) << "\" r=\"4\" fill=\""
        << (r.converged ? "black" : "none") << "\" data-x=\"" << format_number(r.point.x) << "\" data-y=\""
        << format_number(r.point.y) << "\" data-lambda=\"" << format_number(r.lambda_hat) << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void emit_plot(const std::string& csv_path, const std::string& svg_path, const PlotSpec& spec) {
  write_text_file(svg_path, render_plot(parse_sweep_csv(read_text_file(csv_path)), spec));
}

}  // namespace torusdirac
