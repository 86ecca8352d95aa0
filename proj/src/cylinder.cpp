#include "torusdirac/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torusdirac/errors.hpp"
#include "torusdirac/fft.hpp"

namespace torusdirac {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double smoothstep_slope(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}

Vec2 to_standard(const Vec2& point, const Vec2& period) {
  const cplx w = 2.0 * kPi * kI * cplx(point.x(), point.y()) / cplx(period.x(), period.y());
  return {w.real(), w.imag()};
}

void check_torus_matches(const SpinorField& f, const CylinderGrid& grid) {
  const LatticeBasis& b = f.basis();
  const double scale = std::max(1.0, grid.period.norm());
  if ((b.v1 - Vec2(1.0, 0.0)).norm() > 1e-12 || (b.v2 - grid.period).norm() > 1e-12 * scale)
    throw ParameterError("torus basis must be ((1, 0), v) with v the cylinder period vector");
  if (f.spin().eps2 != 1)
    throw SpinMismatch("the cylinder carries the nontrivial spin structure along its period");
}

}  // namespace

Eigen::Vector3d mercator(const Vec2& p) {
  const double ch = std::cosh(p.x());
  return {std::sin(p.y()) / ch, std::cos(p.y()) / ch, std::tanh(p.x())};
}

Eigen::Vector3d mercator(const Vec2& point, const Vec2& period) {
  return mercator(to_standard(point, period));
}

double conformal_factor(const Vec2& p) { return 1.0 / std::cosh(p.x()); }

double conformal_factor(const Vec2& point, const Vec2& period) {
  return 2.0 * kPi / period.norm() * conformal_factor(to_standard(point, period));
}

ConformalityReport mercator_check(int points, std::uint64_t seed) {
  if (points < 1) throw ParameterError("point count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-5.0, 5.0), uy(0.0, 2.0 * kPi);
  constexpr double h = 1e-5;
  ConformalityReport r;
  r.points = points;
  for (int i = 0; i < points; ++i) {
    const Vec2 p(ux(rng), uy(rng));
    const Eigen::Vector3d cx = (mercator(p + Vec2(h, 0)) - mercator(p - Vec2(h, 0))) / (2.0 * h);
    const Eigen::Vector3d cy = (mercator(p + Vec2(0, h)) - mercator(p - Vec2(0, h))) / (2.0 * h);
    const double f = conformal_factor(p);
    r.max_orthogonality_defect = std::max(r.max_orthogonality_defect, std::abs(cx.dot(cy)));
    r.max_factor_error = std::max({r.max_factor_error, std::abs(cx.norm() - f) / f, std::abs(cy.norm() - f) / f});
    r.max_radius_error = std::max(r.max_radius_error, std::abs(mercator(p).norm() - 1.0));
  }
  return r;
}

CutoffProfile CutoffProfile::gamma(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("gamma cutoff width must be positive");
  return {Kind::gamma, width};
}

double CutoffProfile::operator()(double s) const {
  const double w = width;
  if (s <= 0.0) return smoothstep((s + w) / w);
  if (s >= 1.0) return smoothstep((1.0 + w - s) / w);
  return 1.0;
}

double CutoffProfile::derivative(double s) const {
  const double w = width;
  if (s <= 0.0) return smoothstep_slope((s + w) / w) / w;
  if (s >= 1.0) return -smoothstep_slope((1.0 + w - s) / w) / w;
  return 0.0;
}

std::pair<double, double> CutoffProfile::support() const { return {-width, 1.0 + width}; }

void CylinderGrid::validate() const {
  if (!(period.y() > 0.0) || !period.allFinite())
    throw InvalidLattice("cylinder period vector must have positive second coordinate");
  if (!(axial_extent > 0.0) || !std::isfinite(axial_extent)) throw ParameterError("axial extent must be positive");
  if (periodic_resolution < 2 || periodic_resolution % 2 != 0)
    throw ResolutionError("periodic resolution must be even and at least 2");
  if (axial_resolution < 1) throw ResolutionError("axial resolution must be positive");
}

int CylinderGrid::half_count() const {
  return static_cast<int>(std::ceil(axial_extent * axial_resolution - 1e-9));
}

CylinderField::CylinderField(const CylinderGrid& g) : grid(g) {
  grid.validate();
  planes[0].assign(grid.node_count(), cplx{});
  planes[1].assign(grid.node_count(), cplx{});
}

CylinderField sample(const CylinderGrid& grid, const std::function<Spinor(double, double)>& fn) {
  CylinderField out(grid);
  const int kk = grid.half_count();
  const int m = grid.periodic_resolution;
  for (int k = -kk; k <= kk; ++k)
    for (int j = 0; j < m; ++j) {
      const Spinor v = fn(grid.axial(k), static_cast<double>(j) / m);
      const std::size_t n = out.node(k, j);
      out.planes[0][n] = v[0];
      out.planes[1][n] = v[1];
    }
  return out;
}

CylinderField lift_to_cylinder(const SpinorField& f, const CylinderGrid& grid) {
  grid.validate();
  check_torus_matches(f, grid);
  CylinderField out(grid);
  const ModeWindow& w = f.window();
  const int kk = grid.half_count();
  const int m = grid.periodic_resolution;
  const double e1 = 0.5 * f.spin().eps1;
  const double e2 = 0.5 * f.spin().eps2;

  // phase_t[j][b] = exp(2 pi i (b + e2) j / m)
  std::vector<cplx> phase_t(static_cast<std::size_t>(m) * w.size2());
  for (int j = 0; j < m; ++j)
    for (int b = -w.n2; b <= w.n2; ++b)
      phase_t[static_cast<std::size_t>(j) * w.size2() + (b + w.n2)] =
          std::polar(1.0, 2.0 * kPi * (b + e2) * j / m);

  const Eigen::VectorXcd& c = f.coefficients();
  std::vector<cplx> g(2 * static_cast<std::size_t>(w.size2()));
  for (int k = -kk; k <= kk; ++k) {
    const double s = grid.axial(k);
    std::fill(g.begin(), g.end(), cplx{});
    for (int a = -w.n1; a <= w.n1; ++a) {
      const cplx e = std::polar(1.0, 2.0 * kPi * (a + e1) * s);
      for (int b = -w.n2; b <= w.n2; ++b) {
        const std::size_t v = f.mode_index(a, b);
        g[2 * (b + w.n2)] += e * c[2 * v];
        g[2 * (b + w.n2) + 1] += e * c[2 * v + 1];
      }
    }
    for (int j = 0; j < m; ++j) {
      cplx p0{}, p1{};
      const cplx* ph = &phase_t[static_cast<std::size_t>(j) * w.size2()];
      for (int bi = 0; bi < w.size2(); ++bi) {
        p0 += ph[bi] * g[2 * bi];
        p1 += ph[bi] * g[2 * bi + 1];
      }
      const std::size_t n = out.node(k, j);
      out.planes[0][n] = p0;
      out.planes[1][n] = p1;
    }
  }
  return out;
}

CylinderField transplant(const SpinorField& f, const CutoffProfile& cutoff, const CylinderGrid& grid) {
  grid.validate();
  const auto [lo, hi] = cutoff.support();
  if (lo < -grid.axial_extent - 1e-12 || hi > grid.axial_extent + 1e-12)
    throw SupportError("cutoff support exceeds the axial extent of the grid");
  CylinderField out = lift_to_cylinder(f, grid);
  const int kk = grid.half_count();
  const int m = grid.periodic_resolution;
  for (int k = -kk; k <= kk; ++k) {
    const double eta = cutoff(grid.axial(k));
    for (int j = 0; j < m; ++j) {
      const std::size_t n = out.node(k, j);
      out.planes[0][n] *= eta;
      out.planes[1][n] *= eta;
    }
  }
  return out;
}

CylinderDirac apply_cylinder_dirac(const CylinderField& f) {
  const CylinderGrid& grid = f.grid;
  CylinderDirac out;
  const int pad = out.pad;
  const int kk = grid.half_count();
  const int m = grid.periodic_resolution;
  const int rows = 2 * (kk + pad) + 1;
  const std::size_t count = static_cast<std::size_t>(rows) * m;
  for (int c = 0; c < 2; ++c) {
    out.field[c].assign(count, cplx{});
    std::copy(f.planes[c].begin(), f.planes[c].end(),
              out.field[c].begin() + static_cast<std::ptrdiff_t>(pad) * m);
  }

  // d/dt through the periodic part exp(-i pi t) psi; the modes are the
  // half-integers -m/2 + 1/2, ..., m/2 - 1/2.
  FftPlan fft(1, m, 2 * rows);
  cplx* buf = fft.data();
  std::vector<cplx> twist(m);
  for (int j = 0; j < m; ++j) twist[j] = std::polar(1.0, kPi * j / m);
  for (int c = 0; c < 2; ++c)
    for (std::size_t n = 0; n < count; ++n) buf[c * count + n] = out.field[c][n] * std::conj(twist[n % m]);
  fft.forward();
  for (std::size_t r = 0; r < 2 * static_cast<std::size_t>(rows); ++r)
    for (int k = 0; k < m; ++k) {
      const int signed_k = k < m / 2 ? k : k - m;
      buf[r * m + k] *= kI * (2.0 * kPi * (signed_k + 0.5) / m);
    }
  fft.backward();

  const double h = grid.step();
  const double x0 = grid.period.x();
  const double y0 = grid.period.y();
  out.planes[0].assign(count, cplx{});
  out.planes[1].assign(count, cplx{});
  const auto value = [&](int c, int r, int j) -> cplx {
    return r < 0 || r >= rows ? cplx{} : out.field[c][static_cast<std::size_t>(r) * m + j];
  };
  for (int r = 0; r < rows; ++r)
    for (int j = 0; j < m; ++j) {
      const std::size_t n = static_cast<std::size_t>(r) * m + j;
      cplx ds[2], dy[2];
      for (int c = 0; c < 2; ++c) {
        ds[c] = (-value(c, r + 2, j) + 8.0 * value(c, r + 1, j) - 8.0 * value(c, r - 1, j) + value(c, r - 2, j)) /
                (12.0 * h);
        const cplx dt = buf[c * count + n] * twist[j];
        dy[c] = (dt - x0 * ds[c]) / y0;
      }
      out.planes[0][n] = -kI * ds[1] - dy[1];
      out.planes[1][n] = -kI * ds[0] + dy[0];
    }
  return out;
}

namespace {

struct PairingSums {
  cplx pairing{};
  double scale = 0.0;
};

PairingSums pairing_sums(const CylinderDirac& d, const CylinderGrid& grid, int r_lo, int r_hi) {
  const int m = grid.periodic_resolution;
  PairingSums s;
  for (int r = r_lo; r < r_hi; ++r)
    for (int j = 0; j < m; ++j) {
      const std::size_t n = static_cast<std::size_t>(r) * m + j;
      for (int c = 0; c < 2; ++c) {
        s.pairing += std::conj(d.field[c][n]) * d.planes[c][n];
        s.scale += std::abs(d.field[c][n]) * std::abs(d.planes[c][n]);
      }
    }
  s.pairing *= grid.cell_area();
  s.scale *= grid.cell_area();
  return s;
}

}  // namespace

double cylinder_pairing(const CylinderField& f, double s_lo, double s_hi) {
  const CylinderDirac d = apply_cylinder_dirac(f);
  const int kk = f.grid.half_count();
  const double h = f.grid.step();
  const int k_lo = std::max(-kk, static_cast<int>(std::ceil(s_lo / h - 1e-9)));
  const int k_hi = std::min(kk + 1, static_cast<int>(std::ceil(s_hi / h - 1e-9)));
  if (k_hi <= k_lo) return 0.0;
  return pairing_sums(d, f.grid, k_lo + kk + d.pad, k_hi + kk + d.pad).pairing.real();
}

double cylinder_J(const CylinderField& f) {
  const CylinderGrid& grid = f.grid;
  const int kk = grid.half_count();
  const int m = grid.periodic_resolution;
  double peak = 0.0, edge = 0.0;
  for (int k = -kk; k <= kk; ++k)
    for (int j = 0; j < m; ++j) {
      const double v = f.at(f.node(k, j)).norm();
      peak = std::max(peak, v);
      if (k == -kk || k == kk) edge = std::max(edge, v);
    }
  if (peak == 0.0) throw DegeneratePairing("zero field");
  if (edge > 1e-10 * peak) throw SupportError("samples do not vanish at the ends of the axial range");

  const CylinderDirac d = apply_cylinder_dirac(f);
  const int rows = static_cast<int>(d.planes[0].size()) / m;
  const PairingSums p = pairing_sums(d, grid, 0, rows);
  if (std::abs(p.pairing.imag()) > 1e-8 * p.scale)
    throw std::logic_error("discrete cylinder pairing is not real");
  if (std::abs(p.pairing.real()) <= 1e-12 * p.scale) throw DegeneratePairing("cylinder pairing vanishes");
  double a = 0.0;
  for (std::size_t n = 0; n < d.planes[0].size(); ++n)
    a += std::pow(std::norm(d.planes[0][n]) + std::norm(d.planes[1][n]), 2.0 / 3.0);
  a *= grid.cell_area();
  return std::pow(a, 1.5) / std::abs(p.pairing.real());
}

SpinorField translate_axial(const SpinorField& f, double shift) {
  SpinorField out = f;
  Eigen::VectorXcd& c = out.coefficients();
  for (std::size_t v = 0; v < f.mode_count(); ++v) {
    const cplx e = std::polar(1.0, f.frequency(v).x() * shift);
    c[2 * v] *= e;
    c[2 * v + 1] *= e;
  }
  return out;
}

StripChoice best_translation(const SpinorField& f, int n_strips) {
  const LatticeBasis& b = f.basis();
  if ((b.v1 - Vec2(1.0, 0.0)).norm() > 1e-12) throw ParameterError("torus basis must start with (1, 0)");
  if (n_strips == 0) n_strips = static_cast<int>(std::floor(1.0 / (2.0 * b.v2.y()) + 1e-12));
  if (n_strips < 1) throw ParameterError("strip count must be at least 1");

  const GridSamples g = synthesize(f);
  const int m1 = g.resolution.m1, m2 = g.resolution.m2;
  // Row integrals over t2, then their exact Fourier series in t1 (the
  // t1-bandwidth of |psi|^4 is 4 n1 < m1 / 2 at the default resolution).
  std::vector<double> row(m1, 0.0);
  for (int j1 = 0; j1 < m1; ++j1) {
    for (int j2 = 0; j2 < m2; ++j2) {
      const double q = g.norm_sq(g.node(j1, j2));
      row[j1] += q * q;
    }
    row[j1] *= f.area() / m2;
  }
  const int band = 4 * f.window().n1;
  std::vector<cplx> hat(2 * band + 1);
  for (int k = -band; k <= band; ++k) {
    cplx acc{};
    for (int j = 0; j < m1; ++j) acc += row[j] * std::polar(1.0, -2.0 * kPi * k * j / m1);
    hat[k + band] = acc / static_cast<double>(m1);
  }

  StripChoice out;
  out.masses.resize(n_strips);
  for (int l = 0; l < n_strips; ++l) {
    const double lo = static_cast<double>(l) / n_strips, hi = static_cast<double>(l + 1) / n_strips;
    cplx mass = hat[band] * (hi - lo);
    for (int k = -band; k <= band; ++k) {
      if (k == 0) continue;
      mass += hat[k + band] * (std::polar(1.0, 2.0 * kPi * k * hi) - std::polar(1.0, 2.0 * kPi * k * lo)) /
              (kI * 2.0 * kPi * static_cast<double>(k));
    }
    out.masses[l] = mass.real();
  }
  out.index = 0;
  for (int l = 1; l < n_strips; ++l)
    if (out.masses[l] < out.masses[out.index] - 1e-12 * std::abs(out.masses[out.index])) out.index = l;
  out.mass = out.masses[out.index];
  return out;
}

CylinderField random_bump_spinor(const CylinderGrid& grid, std::mt19937_64& rng) {
  grid.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  struct Bump {
    double center, width, wave;
    std::array<std::array<cplx, 6>, 2> amp;  // half-integer modes -5/2 .. 5/2
  };
  const double span = 0.9 * grid.axial_extent;
  const int count = 1 + static_cast<int>(unit(rng) * 3.0);
  std::vector<Bump> bumps(count);
  for (Bump& bump : bumps) {
    bump.width = std::min(span, 0.4 + unit(rng) * 1.1);
    bump.center = (2.0 * unit(rng) - 1.0) * (span - bump.width);
    bump.wave = 6.0 * (2.0 * unit(rng) - 1.0);
    for (auto& comp : bump.amp)
      for (std::size_t q = 0; q < comp.size(); ++q) {
        const double decay = 1.0 / (1.0 + std::abs(static_cast<double>(q) - 2.5));
        comp[q] = decay * cplx(normal(rng), normal(rng));
      }
  }
  return sample(grid, [&](double s, double t) {
    Spinor v = Spinor::Zero();
    for (const Bump& bump : bumps) {
      const double u = (s - bump.center) / bump.width;
      if (std::abs(u) >= 1.0) continue;
      const cplx env = std::exp(-1.0 / (1.0 - u * u)) * std::polar(1.0, bump.wave * s);
      for (int c = 0; c < 2; ++c)
        for (std::size_t q = 0; q < 6; ++q)
          v[c] += env * bump.amp[c][q] * std::polar(1.0, 2.0 * kPi * (static_cast<double>(q) - 2.5) * t);
    }
    return v;
  });
}

CylinderField sphere_bubble(const CylinderGrid& grid, double center) {
  grid.validate();
  const cplx mu = 2.0 * kPi * kI / cplx(grid.period.x(), grid.period.y());
  const cplx frame = std::polar(1.0, std::arg(mu) / 2.0);
  const double reach = 0.95 * grid.axial_extent;
  return sample(grid, [&](double s, double t) {
    const double a = std::abs(s) / reach;
    if (a >= 1.0) return Spinor(Spinor::Zero());
    const double cut = std::exp(1.0 - 1.0 / (1.0 - std::pow(a, 8)));
    const cplx w = mu * cplx(t * grid.period.x() + s - center, t * grid.period.y());
    const cplx phase = std::polar(1.0, w.imag() / 2.0);
    const double x = w.real();
    const double scale = cut * std::sqrt(std::abs(mu)) / (2.0 * std::cosh(x));
    return Spinor(scale * phase * frame * std::exp(-x / 2.0), scale * kI * phase * std::conj(frame) * std::exp(x / 2.0));
  });
}

CylinderField perturbed_bubble(const CylinderGrid& grid, std::mt19937_64& rng, double noise) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double center = (unit(rng) - 0.5) * 0.5 * grid.axial_extent;
  const double size = noise * unit(rng);
  CylinderField out = sphere_bubble(grid, center);
  const CylinderField extra = random_bump_spinor(grid, rng);
  double n_out = 0.0, n_extra = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t n = 0; n < out.planes[c].size(); ++n) {
      n_out += std::norm(out.planes[c][n]);
      n_extra += std::norm(extra.planes[c][n]);
    }
  const double factor = n_extra > 0.0 ? size * std::sqrt(n_out / n_extra) : 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t n = 0; n < out.planes[c].size(); ++n) out.planes[c][n] += factor * extra.planes[c][n];
  return out;
}

}  // namespace torusdirac
