#include "hauteur/torsion.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <complex>
#include <cstdio>
#include <optional>
#include <sstream>

#include "hauteur/numeric/factor.hpp"
#include "hauteur/numeric/gcd.hpp"
#include "hauteur/numeric/modp.hpp"
#include "hauteur/numeric/roots.hpp"

namespace hauteur {

namespace {

const modp::u64 kPrime = modp::large_prime(7);

bool squarefree_mod_p(const ZPoly& f) {
  modp::Vec fp = modp::from_zpoly(f, kPrime);
  if (fp.size() != f.size()) return false;
  return modp::gcd(fp, modp::derivative(fp, kPrime), kPrime).size() == 1;
}

// gcd of a and b, with a cheap certificate of coprimality mod a large prime
ZPoly screened_gcd(const ZPoly& a, const ZPoly& b) {
  modp::Vec ap = modp::from_zpoly(a, kPrime), bp = modp::from_zpoly(b, kPrime);
  if (ap.size() == a.size() && bp.size() == b.size() && modp::gcd(ap, bp, kPrime).size() == 1) return ZPoly(1);
  return gcd(a, b);
}

ZPoly normalized(const ZPoly& f) {
  if (f.is_zero()) return f;
  return primitive_part(f);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Levels {
  Lift<ZPoly> F;
  SectionX X0;
  std::vector<ZPoly> E;
  std::vector<std::vector<ZPoly>> pair_removed;  // step k: factors divided out of (A_k, B_k)
  std::vector<std::vector<ZPoly>> q_removed;     // step k: factors stripped from q_k to get E_k
  // k >= 2: E_k = S_k^2 with S_k the order-4 sextic at (A_{k-2}, B_{k-2}), stripped by sextic_removed[k]
  std::array<ZPoly, 7> sextic;
  std::vector<ZPoly> S;
  std::vector<std::vector<ZPoly>> sextic_removed;
  std::vector<Rat> singular;  // rational zeros of the strike list
  std::vector<long> singular_ord;  // order of the discriminant there
};

// 2z^6 + b2 z^5 w + 5 b4 z^4 w^2 + 10 b6 z^3 w^3 + 10 b8 z^2 w^4 + (b2 b8 - b4 b6) z w^5 + (b4 b8 - b6^2) w^6
// vanishes exactly at points of order 4 (it is the 4-division polynomial over 2y + a1 x + a3)
std::array<ZPoly, 7> order4_sextic(const Curve<ZPoly>& E) {
  auto v = invariants(E);
  return {ZPoly(2),         v.b2,    v.b4 * Int(5), v.b6 * Int(10), v.b8 * Int(10), v.b2 * v.b8 - v.b4 * v.b6,
          v.b4 * v.b8 - v.b6 * v.b6};
}

ZPoly eval_sextic(const std::array<ZPoly, 7>& c, const SectionX& X) {
  std::array<ZPoly, 7> zp, wp;
  zp[0] = wp[0] = ZPoly(1);
  for (std::size_t i = 1; i < 7; ++i) {
    zp[i] = zp[i - 1] * X.A;
    wp[i] = wp[i - 1] * X.B;
  }
  ZPoly out;
  for (std::size_t i = 0; i < 7; ++i)
    if (!c[i].is_zero()) out += c[i] * (zp[6 - i] * wp[i]);
  return out;
}

Levels compute_levels(const SurfacePoint& P, int n, int cap, bool with_sextic = false) {
  if (n < 0) throw Error(ErrorCode::Domain, "negative level");
  if (n > cap) throw Error(ErrorCode::Resource, "level " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
  if (P.zero || P.lift.B.is_zero()) throw Error(ErrorCode::DegenerateInput, "the zero section is torsion everywhere");
  Levels L;
  L.F = cleared_lift(P.model);
  L.X0 = P.lift;
  // fibers over zeros of the discriminant are not elliptic curves
  std::vector<ZPoly> strike = resultant_places(P.model);
  L.E.push_back(normalized(strip_factors(P.lift.B, strike)));
  for (const auto& g : strike)
    if (g.degree() == 1) {
      L.singular.push_back(Rat(-g[0], g[1]));
      L.singular_ord.push_back(ord_at(P.model.delta, FfPlace::rational(L.singular.back())));
    }
  L.pair_removed.emplace_back();
  L.q_removed.emplace_back();
  if (with_sextic) L.sextic = order4_sextic(P.model.cleared);
  L.S.resize(static_cast<std::size_t>(n) + 1);
  L.sextic_removed.resize(static_cast<std::size_t>(n) + 1);
  SectionX X = P.lift, prev;
  for (int k = 1; k <= n; ++k) {
    std::vector<ZPoly> pr, qr;
    XMapStep s = x_map_step(L.F, X, strike, &pr);
    if (s.next.B.is_zero()) throw Error(ErrorCode::DegenerateInput, "section is torsion on the generic fiber");
    L.E.push_back(normalized(strip_factors(normalized(s.q), strike, &qr)));
    L.pair_removed.push_back(std::move(pr));
    L.q_removed.push_back(std::move(qr));
    if (with_sextic && k >= 2) {
      std::vector<ZPoly> sr;
      ZPoly S = normalized(strip_factors(normalized(eval_sextic(L.sextic, prev)), strike, &sr));
      if (S.degree() >= 1 && sqr(S) == L.E.back()) {
        L.S[static_cast<std::size_t>(k)] = std::move(S);
        L.sextic_removed[static_cast<std::size_t>(k)] = std::move(sr);
      }
    }
    prev = X;
    X = s.next;
  }
  return L;
}

using CL = std::complex<long double>;

struct Dual {
  CL v, d;
};
Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }

long double to_ld(const Int& r) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, r.get_mpz_t());
  return std::ldexp(static_cast<long double>(m), static_cast<int>(e));
}

// log |c_j| for the first `keep` Taylor coefficients of f at s = a/b, up to a common constant
std::vector<double> taylor_log_abs(const ZPoly& f, const Rat& s, std::size_t keep) {
  // b^d f((a + v) / b) has integer coefficients h_i (a + v)^i with h_i = f_i b^(d-i)
  const Int a = s.num(), b = s.den();
  const std::size_t d = f.size() - 1;
  std::vector<Int> c(f.size());
  Int bp = 1;
  for (std::size_t i = d + 1; i-- > 0;) {
    c[i] = f[i] * bp;
    bp *= b;
  }
  std::vector<double> out;
  const double lb = log_abs(b);
  for (std::size_t j = 0; j < std::min(keep, c.size()); ++j) {
    for (std::size_t i = c.size() - 1; i > j; --i) c[i - 1] += a * c[i];
    // v = b u
    out.push_back(sgn(c[j]) == 0 ? -INFINITY : log_abs(c[j]) + static_cast<double>(j) * lb);
  }
  return out;
}

struct NumPoly {
  std::vector<long double> c;
  NumPoly() = default;
  explicit NumPoly(const ZPoly& f) {
    for (std::size_t i = 0; i < f.size(); ++i) c.push_back(to_ld(f[i]));
  }
  Dual operator()(CL t) const {
    Dual r{0, 0};
    for (std::size_t i = c.size(); i-- > 0;) {
      r.d = r.d * t + r.v;
      r.v = r.v * t + c[i];
    }
    return r;
  }
};

std::vector<NumPoly> to_num(const std::vector<ZPoly>& fs) { return {fs.begin(), fs.end()}; }

// Level data with coefficients in long double.
struct Chart {
  std::array<NumPoly, 5> f1, f2;
  NumPoly A0, B0;
  std::array<NumPoly, 7> sextic;
  std::vector<std::vector<NumPoly>> pair_removed, q_removed, sextic_removed;
};

Chart make_chart(const Levels& L) {
  Chart c;
  for (std::size_t i = 0; i < 5; ++i) {
    c.f1[i] = NumPoly(L.F.f1[i]);
    c.f2[i] = NumPoly(L.F.f2[i]);
  }
  c.A0 = NumPoly(L.X0.A);
  c.B0 = NumPoly(L.X0.B);
  for (std::size_t i = 0; i < 7; ++i) c.sextic[i] = NumPoly(L.sextic[i]);
  for (const auto& v : L.pair_removed) c.pair_removed.push_back(to_num(v));
  for (const auto& v : L.q_removed) c.q_removed.push_back(to_num(v));
  for (const auto& v : L.sextic_removed) c.sextic_removed.push_back(to_num(v));
  return c;
}

// Generic level evaluation over a dual-number type D; `rescale` keeps doubles in range.
template <class D, class Eval, class Rescale>
bool level_value(const Levels& L, int k, bool sextic, Eval ev, Rescale rescale, D& out) {
  auto divide_all = [&](D& x, const std::vector<ZPoly>& fs, int idx) {
    for (std::size_t i = 0; i < fs.size(); ++i) x = x / ev(fs[i], 2, idx, i);
  };
  std::array<D, 5> f1, f2;
  for (std::size_t i = 0; i < 5; ++i) {
    f1[i] = ev(L.F.f1[i], 0, 0, i);
    f2[i] = ev(L.F.f2[i], 1, 0, i);
  }
  D A = ev(L.X0.A, 3, 0, 0), B = ev(L.X0.B, 3, 1, 0);
  const int steps = sextic ? k - 2 : k - 1;
  for (int i = 1; i <= steps; ++i) {
    D z2 = A * A, w2 = B * B;
    std::array<D, 4> c{z2 * A, z2 * B, A * w2, w2 * B};
    D inner = f1[0] * c[0], q = f2[1] * c[0];
    for (std::size_t m = 1; m < 4; ++m) {
      inner = inner + f1[m] * c[m];
      q = q + f2[m + 1] * c[m];
    }
    D nA = A * inner + f1[4] * (w2 * w2), nB = B * q;
    // the removed common factor is one polynomial, so dividing both keeps the ratio exact
    const auto& rem = L.pair_removed[static_cast<std::size_t>(i)];
    for (std::size_t r = 0; r < rem.size(); ++r) {
      D f = ev(rem[r], 4, i, r);
      nA = nA / f;
      nB = nB / f;
    }
    if (!rescale(nA, nB)) return false;
    A = nA;
    B = nB;
  }
  if (sextic) {
    std::array<D, 7> zp, wp;
    zp[1] = A;
    wp[1] = B;
    for (std::size_t i = 2; i < 7; ++i) {
      zp[i] = zp[i - 1] * A;
      wp[i] = wp[i - 1] * B;
    }
    D v = ev(L.sextic[0], 5, 0, 0) * zp[6];
    for (std::size_t i = 1; i < 6; ++i) v = v + ev(L.sextic[i], 5, 0, i) * (zp[6 - i] * wp[i]);
    v = v + ev(L.sextic[6], 5, 0, 6) * wp[6];
    divide_all(v, L.sextic_removed[static_cast<std::size_t>(k)], k);
    out = v;
    return true;
  }
  D z2 = A * A, w2 = B * B;
  std::array<D, 4> c{z2 * A, z2 * B, A * w2, w2 * B};
  D q = f2[1] * c[0];
  for (std::size_t i = 1; i < 4; ++i) q = q + f2[i + 1] * c[i];
  const auto& rem = L.q_removed[static_cast<std::size_t>(k)];
  for (std::size_t r = 0; r < rem.size(); ++r) q = q / ev(rem[r], 6, k, r);
  out = q;
  return true;
}

NewtonStep newton_from(CL v, CL d, long double mult, long double scale) {
  if (v == CL(0) || !(scale > 0)) return {Cx(0, 0), 0.0};
  CL r = mult * v / d;
  // zeros can be products (A = 0) rather than cancellations, so the size of the
  // Newton step stands in for the backward error
  long double be = std::abs(r) / scale;
  return {Cx(static_cast<double>(r.real()), static_cast<double>(r.imag())), static_cast<double>(be)};
}

// Newton ratio for a root of the level-k piece, read off the doubling iteration. Evaluating
// the expanded polynomial loses thousands of bits to cancellation at high levels; the
// iteration does not. With the sextic the roots are simple.
NewtonFn level_newton(const Levels& L, const Chart& C, int k, int mult, bool sextic) {
  return [&L, &C, k, mult, sextic](const Cx& tz) -> NewtonStep {
    CL t(tz.real(), tz.imag());
    auto ev = [&C, t](const ZPoly&, int kind, int idx, std::size_t i) -> Dual {
      switch (kind) {
        case 0: return C.f1[i](t);
        case 1: return C.f2[i](t);
        case 3: return idx == 0 ? C.A0(t) : C.B0(t);
        case 4: return C.pair_removed[static_cast<std::size_t>(idx)][i](t);
        case 5: return C.sextic[i](t);
        case 2: return C.sextic_removed[static_cast<std::size_t>(idx)][i](t);
        default: return C.q_removed[static_cast<std::size_t>(idx)][i](t);
      }
    };
    auto rescale = [](Dual& A, Dual& B) {
      long double m = std::max(std::abs(A.v), std::abs(B.v));
      if (!(m > 0) || !std::isfinite(m)) return false;
      long double sc = std::ldexp(1.0L, -std::ilogb(m));
      A = {A.v * sc, A.d * sc};
      B = {B.v * sc, B.d * sc};
      return true;
    };
    Dual v;
    if (!level_value<Dual>(L, k, sextic, ev, rescale, v)) return {Cx(0, 0), 0.0};
    return newton_from(v.v, v.d, mult, std::max(1.0L, std::abs(t)));
  };
}

// Complex numbers over GMP floats, for parameters too close to a singular fiber.
struct MC {
  mpf_class re, im;
};
MC operator+(const MC& a, const MC& b) { return {a.re + b.re, a.im + b.im}; }
MC operator-(const MC& a, const MC& b) { return {a.re - b.re, a.im - b.im}; }
MC operator*(const MC& a, const MC& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
MC operator/(const MC& a, const MC& b) {
  mpf_class n = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
struct HD {
  MC v, d;
};
HD operator+(const HD& a, const HD& b) { return {a.v + b.v, a.d + b.d}; }
HD operator*(const HD& a, const HD& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
HD operator/(const HD& a, const HD& b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

CL to_cl(const MC& z) {
  auto one = [](const mpf_class& x) {
    if (sgn(x) == 0) return 0.0L;
    long e = 0;
    double m = mpf_get_d_2exp(&e, x.get_mpf_t());
    return std::ldexp(static_cast<long double>(m), static_cast<int>(std::clamp<long>(e, -16000, 16000)));
  };
  return {one(z.re), one(z.im)};
}

// Newton ratio in u = t - s with a working precision that grows as u shrinks.
NewtonFn hp_level_newton(const Levels& L, int k, int mult, bool sextic, const Rat& s, long ord) {
  return [&L, k, mult, sextic, s, ord](const Cx& uz) -> NewtonStep {
    double au = std::abs(uz);
    if (!(au > 0)) return {Cx(0, 0), 0.0};
    const long bits = 128 + (ord + 2) * std::max(0L, static_cast<long>(-std::log2(au)));
    const mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(std::min(bits, 1L << 16));
    // gmpxx assignment keeps the target's precision, so default-constructed temporaries
    // must already carry it
    struct DefaultPrec {
      mp_bitcnt_t old = mpf_get_default_prec();
      explicit DefaultPrec(mp_bitcnt_t p) { mpf_set_default_prec(p); }
      ~DefaultPrec() { mpf_set_default_prec(old); }
    } guard(prec);
    MC t{mpf_class(mpq_class(s.num(), s.den()), prec) + mpf_class(uz.real(), prec), mpf_class(uz.imag(), prec)};
    auto ev = [&t, prec](const ZPoly& f, int, int, std::size_t) -> HD {
      HD r{{mpf_class(0, prec), mpf_class(0, prec)}, {mpf_class(0, prec), mpf_class(0, prec)}};
      for (std::size_t i = f.size(); i-- > 0;) {
        r.d = r.d * t + r.v;
        r.v = r.v * t;
        r.v.re += mpf_class(f[i], prec);
      }
      return r;
    };
    auto rescale = [](HD&, HD&) { return true; };  // GMP exponents do not overflow
    HD v;
    if (!level_value<HD>(L, k, sextic, ev, rescale, v)) return {Cx(0, 0), 0.0};
    if (sgn(v.v.re) == 0 && sgn(v.v.im) == 0) return {Cx(0, 0), 0.0};
    MC r = v.v / v.d;
    CL rc = to_cl(r) * static_cast<long double>(mult);
    long double be = std::abs(rc) / au;
    return {Cx(static_cast<double>(rc.real()), static_cast<double>(rc.imag())), static_cast<double>(be)};
  };
}

bool all_below(const std::vector<double>& be, double tol) {
  return std::all_of(be.begin(), be.end(), [tol](double b) { return b <= tol; });
}

bool distinct(const std::vector<Cx>& z) {
  std::vector<Cx> w = z;
  std::sort(w.begin(), w.end(), [](const Cx& a, const Cx& b) { return a.real() < b.real(); });
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size() && w[j].real() - w[i].real() <= 64 * DBL_EPSILON * std::abs(w[j]); ++j)
      if (std::abs(w[j] - w[i]) <= 64 * DBL_EPSILON * std::abs(w[j])) return false;
  return true;
}

// Starting points for d roots: each level equidistributes toward the same measure, so the
// roots one level down, each split into four, sit close to the new ones.
std::vector<Cx> split_start(const std::vector<Cx>& prior, std::size_t d) {
  std::vector<Cx> z;
  if (prior.size() < 2) return z;
  std::vector<double> dmin(prior.size(), 1e300);
  for (std::size_t i = 0; i < prior.size(); ++i)
    for (std::size_t j = 0; j < prior.size(); ++j)
      if (j != i) dmin[i] = std::min(dmin[i], std::abs(prior[i] - prior[j]));
  for (int ring = 0; z.size() < d; ++ring)
    for (std::size_t i = 0; i < prior.size() && z.size() < 4 * prior.size() * static_cast<std::size_t>(ring + 1); ++i)
      for (int q = 0; q < 4; ++q)
        z.push_back(prior[i] + std::polar(0.3 * dmin[i] / (ring + 1), 1.5707963267948966 * q + 0.4 + 0.3 * ring));
  // thin evenly down to d
  std::vector<Cx> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(z[i * z.size() / d]);
  return out;
}

// Roots of g (S_k or E_k) polished through the level evaluator. Roots next to a rational
// singular parameter s approach it faster than any fixed precision resolves; they are found
// first as offsets u = t - s with multiprecision evaluation, their number read off the
// Newton polygon of the Taylor coefficients at s. Empty when the iteration does not settle.
std::vector<Cx> level_roots(const Levels& L, int k, const ZPoly& g, int mult, bool sextic, double tol,
                            const std::vector<Cx>& prior) {
  if (sextic) mult = 1;  // S_k has simple roots; the doubling lives in E_k = S_k^2
  RootOptions opt;
  opt.tol = tol;
  opt.max_sweeps = 300;
  const std::size_t d = static_cast<std::size_t>(g.degree());
  struct Cluster {
    std::size_t si, m;
    std::vector<Cx> ustart;
  };
  std::vector<Cluster> clusters;
  std::size_t total = 0;
  for (std::size_t si = 0; si < L.singular.size(); ++si) {
    const Rat& s = L.singular[si];
    const double radius = 1e-3 * std::max(1.0, std::fabs(s.to_double()));
    std::vector<Cx> ustart;
    for (std::size_t K = 16;; K *= 2) {
      std::vector<double> la = taylor_log_abs(g, s, std::min(K, d) + 1);
      ustart.clear();
      for (const Cx& w : newton_polygon_start(la))
        if (std::abs(w) < radius) ustart.push_back(w);
      if (2 * ustart.size() < K || K >= d) break;
    }
    if (!ustart.empty()) {
      total += ustart.size();
      clusters.push_back({si, ustart.size(), ustart});
    }
  }
  // starting points for the rest, away from the clusters
  std::vector<Cx> far;
  for (const Cx& p : prior) {
    bool near = false;
    for (const Rat& s : L.singular)
      near = near || std::abs(p - s.to_double()) < 1e-3 * std::max(1.0, std::fabs(s.to_double()));
    if (!near) far.push_back(p);
  }
  std::vector<Cx> start = split_start(far, d - total);
  if (start.empty()) {
    start = newton_polygon_start(log_abs_coeffs(g));
    std::sort(start.begin(), start.end(), [](const Cx& a, const Cx& b) { return std::abs(a) > std::abs(b); });
    start.resize(d - total);
  }

  std::vector<Cx> z;  // cluster roots, solved
  std::vector<double> be;
  for (const Cluster& c : clusters) {
    const Rat& s = L.singular[c.si];
    const double sd = s.to_double();
    std::vector<Cx> u;
    for (const Cx& w : start) u.push_back(w - sd);
    for (const Cx& w : z) u.push_back(w - sd);
    RootOptions o = opt;
    o.fixed.assign(u.size(), 1);
    o.relative = true;
    u.insert(u.end(), c.ustart.begin(), c.ustart.end());
    o.fixed.resize(u.size(), 0);
    AberthResult rc = aberth(u, hp_level_newton(L, k, mult, sextic, s, L.singular_ord[c.si]), o);
    const std::size_t pos = u.size() - c.m;
    std::vector<Cx> offs(rc.roots.begin() + static_cast<std::ptrdiff_t>(pos), rc.roots.end());
    if (!distinct(offs)) return {};
    for (std::size_t j = 0; j < c.m; ++j) {
      z.push_back(sd + offs[j]);
      be.push_back(rc.backward_error[pos + j]);
    }
  }
  std::vector<Cx> all = start;
  all.insert(all.end(), z.begin(), z.end());
  RootOptions o = opt;
  o.fixed.assign(start.size(), 0);
  o.fixed.resize(all.size(), 1);
  Chart global = make_chart(L);
  AberthResult r = aberth(all, level_newton(L, global, k, mult, sextic), o);
  std::vector<Cx> rest(r.roots.begin(), r.roots.begin() + static_cast<std::ptrdiff_t>(start.size()));
  be.insert(be.end(), r.backward_error.begin(), r.backward_error.begin() + static_cast<std::ptrdiff_t>(start.size()));
  if (!all_below(be, tol) || !distinct(rest)) return {};
  rest.insert(rest.end(), z.begin(), z.end());
  return rest;
}

void add_level_roots(TorsionSet& ts, const Levels& L, int level, double tol) {
  const ZPoly& E = L.E[static_cast<std::size_t>(level)];
  if (E.degree() < 1) return;
  std::vector<std::pair<ZPoly, int>> pieces;
  ZPoly S;
  bool whole = true;  // pieces[0] carries all of E
  bool sextic = level >= 2 && !L.S[static_cast<std::size_t>(level)].is_zero();
  if (sextic)
    pieces.emplace_back(L.S[static_cast<std::size_t>(level)], 2);
  else if (squarefree_mod_p(E))
    pieces.emplace_back(E, 1);
  else if (try_sqrt(E, &S) && squarefree_mod_p(S))
    pieces.emplace_back(S, 2);  // parameters past level 1 typically come doubled
  else {
    pieces = squarefree_decomposition(E);
    whole = false;
  }
  for (const auto& [g, mult] : pieces) {
    if (g.degree() < 1) continue;
    std::vector<Cx> z;
    if (whole && level >= 1) {
      std::vector<Cx> prior;
      for (const auto& r : ts.roots)
        if (r.level == level - 1) prior.push_back(r.value);
      z = level_roots(L, level, g, mult, sextic, tol, prior);
    }
    if (z.empty()) {
      if (whole && level >= 1) ts.diagnostic += "level " + std::to_string(level) + ": roots from the expanded polynomial; ";
      try {
        z = complex_roots(g, tol);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Nonconvergence) throw;
        ts.diagnostic += "level " + std::to_string(level) + ": " + e.what() + "; ";
        continue;
      }
    }
    auto rat = certify_rational_roots(g, z, abs(g.lead()));
    std::vector<TorsionRoot> rs;
    for (const Cx& v : z) rs.push_back({v, level, mult, std::nullopt});
    for (const auto& rr : rat) {
      // attach to the nearest numerical root
      std::size_t best = 0;
      double bd = 1e300;
      for (std::size_t i = 0; i < rs.size(); ++i) {
        double d = std::abs(rs[i].value - Cx(rr.value.to_double(), 0));
        if (!rs[i].rational && d < bd) {
          bd = d;
          best = i;
        }
      }
      if (!rs.empty()) {
        rs[best].rational = rr.value;
        rs[best].value = Cx(rr.value.to_double(), 0);
      }
    }
    ts.roots.insert(ts.roots.end(), rs.begin(), rs.end());
  }
}

}  // namespace

std::vector<Cx> TorsionSet::root_multiset() const {
  std::vector<Cx> out;
  for (const auto& r : roots)
    for (int i = 0; i < r.multiplicity; ++i) out.push_back(r.value);
  return out;
}

std::vector<TorsionRoot> TorsionSet::exact_order_roots() const {
  std::vector<TorsionRoot> out;
  for (const auto& r : roots)
    if (r.level == n) out.push_back(r);
  return out;
}

std::size_t TorsionSet::count(bool with_multiplicity) const {
  std::size_t c = 0;
  for (const auto& r : roots) c += with_multiplicity ? static_cast<std::size_t>(r.multiplicity) : 1;
  return c;
}

std::vector<ZPoly> torsion_levels(const SurfacePoint& P, int n, int cap) { return compute_levels(P, n, cap).E; }

ZPoly torsion_polynomial(const SurfacePoint& P, int n, int cap) {
  if (n < 1) throw Error(ErrorCode::Domain, "torsion level must be at least 1");
  ZPoly T(1);
  for (const auto& E : torsion_levels(P, n, cap)) T = T * E;
  return normalized(T);
}

TorsionSet torsion_parameters(const SurfacePoint& P, int n, double tol, int cap) {
  if (n < 1) throw Error(ErrorCode::Domain, "torsion level must be at least 1");
  Levels L = compute_levels(P, n, cap, true);
  TorsionSet ts;
  ts.n = n;
  ts.poly = ZPoly(1);
  for (int k = 0; k <= n; ++k) {
    ts.poly = ts.poly * L.E[static_cast<std::size_t>(k)];
    add_level_roots(ts, L, k, tol);
  }
  ts.poly = normalized(ts.poly);
  ts.exact_poly = L.E.back();
  return ts;
}

std::vector<CommonTorsion> common_torsion(const SurfacePoint& P1, const SurfacePoint& P2, int n_max, double tol) {
  if (P1.model.var != P2.model.var) throw Error(ErrorCode::Domain, "sections live over different base variables");
  auto L1 = torsion_levels(P1, n_max), L2 = torsion_levels(P2, n_max);
  std::vector<CommonTorsion> out;
  ZPoly T1 = L1[0], T2 = L2[0];
  for (int n = 1; n <= n_max; ++n) {
    T1 = T1 * L1[static_cast<std::size_t>(n)];
    T2 = T2 * L2[static_cast<std::size_t>(n)];
    ZPoly g = screened_gcd(T1, T2);
    if (g.degree() < 1) continue;
    CommonTorsion c;
    c.n = n;
    c.gcd = g;
    c.roots = complex_roots(g, tol);
    out.push_back(std::move(c));
  }
  return out;
}

std::string torsion_csv(const TorsionSet& ts) {
  std::ostringstream os;
  os << "n,re,im,exact_order_flag,multiplicity,rational_certified_flag,rational\r\n";
  for (const auto& r : ts.roots) {
    os << r.level << ',' << fmt(r.value.real()) << ',' << fmt(r.value.imag()) << ',' << (r.level == ts.n ? 1 : 0) << ','
       << r.multiplicity << ',' << (r.rational ? 1 : 0) << ',' << (r.rational ? r.rational->to_string() : "") << "\r\n";
  }
  return os.str();
}

}  // namespace hauteur
