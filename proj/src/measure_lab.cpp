#include "hauteur/measure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hauteur/error.hpp"
#include "hauteur/heights_q.hpp"
#include "hauteur/numeric/roots.hpp"
#include "hauteur/parallel.hpp"

namespace hauteur {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw Error(ErrorCode::SpecMismatch, "grids differ");
}

std::vector<double> cell_masses(const DensityGrid& d) {
  const double area = d.spec.hx() * d.spec.hy();
  std::vector<double> m(d.values.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = d.values[i] * area;
  return m;
}

std::vector<double> gaussian_blur(const std::vector<double>& v, int nx, int ny, double sigma) {
  const int r = static_cast<int>(std::ceil(3 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  for (int i = -r; i <= r; ++i) k[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));
  // mass-preserving: each source cell spreads over the in-grid part of its kernel
  auto pass = [&](const std::vector<double>& in, bool horizontal) {
    std::vector<double> out(in.size(), 0.0);
    const int len = horizontal ? nx : ny, other = horizontal ? ny : nx;
    for (int o = 0; o < other; ++o)
      for (int s = 0; s < len; ++s) {
        auto at = [&](int p) {
          return horizontal ? static_cast<std::size_t>(o) * nx + p : static_cast<std::size_t>(p) * nx + o;
        };
        double m = in[at(s)];
        if (m == 0) continue;
        double w = 0;
        for (int d = -r; d <= r; ++d)
          if (s + d >= 0 && s + d < len) w += k[static_cast<std::size_t>(d + r)];
        for (int d = -r; d <= r; ++d)
          if (s + d >= 0 && s + d < len) out[at(s + d)] += m * k[static_cast<std::size_t>(d + r)] / w;
      }
    return out;
  };
  return pass(pass(v, true), false);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string ppm(int nx, int ny, const std::vector<double>& level) {
  std::string out = "P6\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  const double dark[3] = {16, 16, 40}, yellow[3] = {255, 220, 0};
  for (double s : level)
    for (int c = 0; c < 3; ++c)
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(dark[c] + s * (yellow[c] - dark[c])))));
  return out;
}

}  // namespace

void GridSpec::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max)) throw Error(ErrorCode::Domain, "empty rectangle");
  if (nx < 2 || ny < 2) throw Error(ErrorCode::Domain, "resolution must be at least 2x2");
  if (!(exclusion_radius >= 0)) throw Error(ErrorCode::Domain, "negative exclusion radius");
}

Cx GridSpec::node(int i, int j) const {
  // weighted endpoints keep conjugate rows exact conjugates when im_min = -im_max
  const double fx = nx - 1, fy = ny - 1;
  return {(re_min * (fx - i) + re_max * i) / fx, (im_max * (fy - j) + im_min * j) / fy};
}

GridSpec parse_region(const std::string& text, int nx, int ny) {
  GridSpec g;
  std::istringstream is(text);
  std::vector<double> v;
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "region: bad number '" + tok + "'");
    }
  }
  if (v.size() != 4) throw Error(ErrorCode::Parse, "region needs re_min,re_max,im_min,im_max");
  g.re_min = v[0];
  g.re_max = v[1];
  g.im_min = v[2];
  g.im_max = v[3];
  g.nx = nx;
  g.ny = ny;
  g.validate();
  return g;
}

std::vector<Cx> exclusion_centers(const SurfacePoint& P) {
  std::vector<Cx> out;
  for (const ZPoly& g : resultant_places(P.model)) {
    if (g.degree() < 1) continue;
    for (const Cx& z : complex_roots(g)) out.push_back(z);
  }
  return out;
}

PotentialGrid grid_potential(const SurfacePoint& P, const GridSpec& spec) {
  spec.validate();
  PotentialGrid G{spec, std::vector<double>(spec.size(), 0.0), {}, {}};
  if (P.zero) return G;
  const Lift<ZPoly> F = cleared_lift(P.model);
  for (const ZPoly& g : resultant_places(P.model)) {
    if (g.degree() < 1) continue;
    const double a = -ff_escape_rate_ord(F, P.lift, FfPlace::algebraic(g)).value.to_double();
    for (const Cx& z : complex_roots(g)) {
      G.centers.push_back(z);
      if (a != 0) G.log_parts.emplace_back(z, a);
    }
  }
  const std::vector<Cx>& centers = G.centers;
  parallel_for(static_cast<std::size_t>(spec.ny), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < spec.nx; ++i) {
      const Cx t = spec.node(i, j);
      double& out = G.values[spec.index(i, j)];
      bool excluded = false;
      for (const Cx& c : centers) excluded = excluded || std::abs(t - c) <= spec.exclusion_radius;
      if (excluded) {
        out = kNaN;
        continue;
      }
      try {
        Lift<Cx> F = standard_lift(specialize_cleared(P.model, t));
        ArchEscape e = escape_rate_arch(F, eval(P.lift.A, t), eval(P.lift.B, t));
        out = std::isfinite(e.value) ? e.value : kNaN;
      } catch (const Error&) {
        out = kNaN;
      }
    }
  });
  return G;
}

SubharmonicStats subharmonic_check(const PotentialGrid& G, double eps) {
  const GridSpec& s = G.spec;
  double scale = 1;
  for (double v : G.values)
    if (std::isfinite(v)) scale = std::max(scale, std::fabs(v));
  // neighbours weighted by 1/h^2, the plain mean on square cells
  const double wx = 1 / (s.hx() * s.hx()), wy = 1 / (s.hy() * s.hy());
  SubharmonicStats st;
  for (int j = 1; j + 1 < s.ny; ++j)
    for (int i = 1; i + 1 < s.nx; ++i) {
      double c = G.values[s.index(i, j)], l = G.values[s.index(i - 1, j)], r = G.values[s.index(i + 1, j)],
             u = G.values[s.index(i, j - 1)], d = G.values[s.index(i, j + 1)];
      if (!std::isfinite(c) || !std::isfinite(l) || !std::isfinite(r) || !std::isfinite(u) || !std::isfinite(d)) continue;
      ++st.checked;
      if (c <= (wx * (l + r) + wy * (u + d)) / (2 * (wx + wy)) + eps * scale) ++st.satisfied;
    }
  return st;
}

DensityGrid laplacian_density(const PotentialGrid& G, const Rat& normalization) {
  if (normalization.is_zero()) throw Error(ErrorCode::Domain, "zero normalization");
  const GridSpec& s = G.spec;
  DensityGrid D;
  D.spec = s;
  D.normalization = normalization;
  D.values.assign(s.size(), 0.0);
  const double hx2 = s.hx() * s.hx(), hy2 = s.hy() * s.hy(), norm = normalization.to_double();
  std::vector<double> W = G.values;
  if (!G.log_parts.empty())
    for (int j = 0; j < s.ny; ++j)
      for (int i = 0; i < s.nx; ++i)
        for (const auto& [z, a] : G.log_parts) W[s.index(i, j)] -= a * std::log(std::abs(s.node(i, j) - z));
  std::vector<double> raw(s.size(), kNaN);
  double scale = 0;
  for (int j = 1; j + 1 < s.ny; ++j)
    for (int i = 1; i + 1 < s.nx; ++i) {
      double c = W[s.index(i, j)];
      double lap = (W[s.index(i - 1, j)] + W[s.index(i + 1, j)] - 2 * c) / hx2 +
                   (W[s.index(i, j - 1)] + W[s.index(i, j + 1)] - 2 * c) / hy2;
      if (!std::isfinite(lap)) continue;
      raw[s.index(i, j)] = 0.5 * lap / (2 * kPi) / norm;  // local height is G / 2
      scale = std::max(scale, std::fabs(raw[s.index(i, j)]));
    }
  const double area = s.hx() * s.hy();
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (!std::isfinite(raw[k])) continue;
    ++D.stencil_nodes;
    if (raw[k] < -1e-4 * scale) ++D.negative_nodes;
    D.raw_mass += raw[k] * area;
    D.values[k] = std::max(0.0, raw[k]);
    D.mass += D.values[k] * area;
  }
  return D;
}

EscapeImage escape_time_image(const SurfacePoint& P, const GridSpec& spec, double threshold, int max_iter) {
  spec.validate();
  EscapeImage img{spec, std::vector<unsigned char>(spec.size(), 0), threshold, max_iter};
  parallel_for(static_cast<std::size_t>(spec.ny), [&](std::size_t row) {
    const int j = static_cast<int>(row);
    for (int i = 0; i < spec.nx; ++i) {
      const Cx t = spec.node(i, j);
      Lift<Cx> F = standard_lift(specialize(P.model.raw, t));
      Cx x = eval(P.x, t);
      bool mark = !(std::abs(x) < threshold);  // n = 0; a pole of x counts as escaped
      for (int n = 1; n <= max_iter && !mark; ++n) {
        auto [phi, psi] = apply_lift(F, x, Cx(1, 0));
        // psi = 0 sends x to infinity
        if (std::abs(phi) >= threshold * std::abs(psi)) mark = true;
        else x = phi / psi;
      }
      img.marks[spec.index(i, j)] = mark ? 1 : 0;
    }
  });
  return img;
}

DensityGrid empirical_measure(const std::vector<Cx>& points, const GridSpec& spec) {
  spec.validate();
  if (points.empty()) throw Error(ErrorCode::DegenerateInput, "no points to bin");
  DensityGrid D;
  D.spec = spec;
  D.values.assign(spec.size(), 0.0);
  const double w = 1.0 / static_cast<double>(points.size()), area = spec.hx() * spec.hy();
  for (const Cx& z : points) {
    long i = std::lround((z.real() - spec.re_min) / spec.hx());
    long j = std::lround((spec.im_max - z.imag()) / spec.hy());
    if (i < 0 || j < 0 || i >= spec.nx || j >= spec.ny) {
      D.escaped += w;
      continue;
    }
    D.values[spec.index(static_cast<int>(i), static_cast<int>(j))] += w / area;
    D.mass += w;
  }
  return D;
}

DensityGrid empirical_measure(const TorsionSet& ts, const GridSpec& spec, int level) {
  std::vector<Cx> pts;
  for (const auto& r : ts.roots)
    if (r.level == level)
      for (int m = 0; m < r.multiplicity; ++m) pts.push_back(r.value);
  return empirical_measure(pts, spec);
}

double discrepancy(const DensityGrid& a, const DensityGrid& b, bool smoothed) {
  require_same(a.spec, b.spec);
  std::vector<double> ma = cell_masses(a), mb = cell_masses(b);
  if (smoothed) {
    ma = gaussian_blur(ma, a.spec.nx, a.spec.ny, 2.0);
    mb = gaussian_blur(mb, b.spec.nx, b.spec.ny, 2.0);
  }
  double sa = 0, sb = 0;
  for (double v : ma) sa += v;
  for (double v : mb) sb += v;
  if (!(sa > 0) || !(sb > 0)) throw Error(ErrorCode::DegenerateInput, "no mass on the rectangle");
  double d = 0;
  for (std::size_t i = 0; i < ma.size(); ++i) d += std::fabs(ma[i] / sa - mb[i] / sb);
  return std::min(1.0, d / 2);
}

std::string image_ppm(const EscapeImage& img) {
  std::vector<double> level(img.marks.begin(), img.marks.end());
  return ppm(img.spec.nx, img.spec.ny, level);
}

std::string density_ppm(const DensityGrid& d) {
  double mx = 0;
  for (double v : d.values) mx = std::max(mx, v);
  std::vector<double> level(d.values.size(), 0.0);
  // square root brightens the thin support
  if (mx > 0)
    for (std::size_t i = 0; i < level.size(); ++i) level[i] = std::sqrt(d.values[i] / mx);
  return ppm(d.spec.nx, d.spec.ny, level);
}

std::string grid_csv(const GridSpec& spec, const std::vector<double>& values) {
  std::string out = "re,im,value\r\n";
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      Cx t = spec.node(i, j);
      double v = values[spec.index(i, j)];
      out += fmt17(t.real()) + "," + fmt17(t.imag()) + "," + (std::isfinite(v) ? fmt17(v) : "") + "\r\n";
    }
  return out;
}

}  // namespace hauteur
