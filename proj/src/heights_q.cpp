#include "hauteur/heights_q.hpp"

#include <algorithm>
#include <cmath>

#include "hauteur/numeric/factor.hpp"
#include "hauteur/parallel.hpp"

namespace hauteur {

namespace {

double to_d(double x) { return x; }
double to_d(const HpReal& x) { return static_cast<double>(x); }

// Sup-norm renormalised iteration; T is the real type underlying the complex type C.
template <class C, class T>
ArchEscape arch_impl(const std::array<C, 5>& f1, const std::array<C, 5>& f2, C z, C w, T log_scale, double tol) {
  using std::abs;
  using std::log;
  T up1 = 0, up2 = 0;
  for (std::size_t k = 0; k < 5; ++k) {
    up1 += abs(f1[k]);
    up2 += abs(f2[k]);
  }
  T az = abs(z), aw = abs(w);
  T n = az > aw ? az : aw;
  if (n == 0) throw Error(ErrorCode::UndefinedAtOrigin, "escape rate at the origin");
  ArchEscape out;
  T G = log_scale + log(n);
  z /= C(n);
  w /= C(n);
  T upper = log(up1 > up2 ? up1 : up2);
  T maxlog = upper > 0 ? upper : T(0);
  T scale = 1;
  int k = 1;
  for (; k <= 400; ++k) {
    scale /= 4;
    C nz = eval_form(f1, z, w), nw = eval_form(f2, z, w);
    T anz = abs(nz), anw = abs(nw);
    T m = anz > anw ? anz : anw;
    if (!(m > 0) || !std::isfinite(to_d(m))) throw Error(ErrorCode::Precision, "iterate collapsed to zero");
    T L = log(m);
    G += scale * L;
    T aL = abs(L);
    if (aL > maxlog) maxlog = aL;
    z = nz / C(m);
    w = nw / C(m);
    if (k >= 2 && to_d(maxlog * scale / 3) < tol) break;
  }
  out.value = to_d(G);
  out.iterations = k;
  out.tail_bound = to_d(maxlog * scale / 3);
  return out;
}

bool ill_conditioned(const Lift<Cx>& F) {
  double cmax = 0;
  for (std::size_t i = 0; i < 5; ++i) cmax = std::max({cmax, std::abs(F.f1[i]), std::abs(F.f2[i])});
  return std::abs(form_resultant(F)) < 1e-12 * std::pow(cmax, 8);
}

template <class C, class T>
ArchEscape arch_dispatch(const Lift<Cx>& F, Cx z, Cx w, double log_scale, double tol) {
  std::array<C, 5> f1, f2;
  for (std::size_t k = 0; k < 5; ++k) {
    f1[k] = C(F.f1[k].real(), F.f1[k].imag());
    f2[k] = C(F.f2[k].real(), F.f2[k].imag());
  }
  return arch_impl<C, T>(f1, f2, C(z.real(), z.imag()), C(w.real(), w.imag()), T(log_scale), tol);
}

Lift<Cx> to_complex(const Lift<Rat>& F) {
  Lift<Cx> C;
  for (std::size_t k = 0; k < 5; ++k) {
    C.f1[k] = Cx(F.f1[k].to_double(), 0);
    C.f2[k] = Cx(F.f2[k].to_double(), 0);
  }
  return C;
}

Lift<Rat> to_rat(const Lift<Int>& F) {
  Lift<Rat> R;
  for (std::size_t k = 0; k < 5; ++k) {
    R.f1[k] = Rat(F.f1[k]);
    R.f2[k] = Rat(F.f2[k]);
  }
  return R;
}

Int ipow(const Int& p, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), e);
  return r;
}

long val_trunc(const Int& x, const Int& p, long prec) {
  if (sgn(x) == 0) return prec;
  return std::min(prec, vp(x, p));
}

}  // namespace

ArchEscape escape_rate_arch(const Lift<Cx>& F, Cx z, Cx w, double tol, bool extended) {
  ArchEscape out = extended ? arch_dispatch<HpComplex, HpReal>(F, z, w, 0.0, tol)
                            : arch_dispatch<Cx, double>(F, z, w, 0.0, tol);
  out.extended = extended;
  out.ill_conditioned = ill_conditioned(F);
  return out;
}

ArchEscape escape_rate_arch(const Lift<Rat>& F, const Rat& z, const Rat& w, double tol, bool extended) {
  if (z.is_zero() && w.is_zero()) throw Error(ErrorCode::UndefinedAtOrigin, "escape rate at the origin");
  // divide by the larger coordinate exactly before leaving exact arithmetic
  bool zbig = abs(z) >= abs(w);
  Rat big = zbig ? z : w;
  Rat small = (zbig ? w : z) / big;
  double ls = log_abs(big);
  Lift<Cx> C = to_complex(F);
  ArchEscape out;
  if (extended) {
    std::array<HpComplex, 5> f1, f2;
    auto hp = [](const Rat& r) { return HpComplex(HpReal(r.num_ref().get_str()) / HpReal(r.den_ref().get_str())); };
    for (std::size_t k = 0; k < 5; ++k) {
      f1[k] = hp(F.f1[k]);
      f2[k] = hp(F.f2[k]);
    }
    HpComplex s = hp(small);
    out = arch_impl<HpComplex, HpReal>(f1, f2, zbig ? HpComplex(1) : s, zbig ? s : HpComplex(1), HpReal(ls), tol);
    out.extended = true;
  } else {
    Cx s(small.to_double(), 0);
    out = arch_impl<Cx, double>(C.f1, C.f2, zbig ? Cx(1, 0) : s, zbig ? s : Cx(1, 0), ls, tol);
  }
  out.ill_conditioned = ill_conditioned(C);
  return out;
}

ArchEscape escape_rate_arch(const Lift<HpComplex>& F, HpComplex z, HpComplex w, double tol) {
  ArchEscape out = arch_impl<HpComplex, HpReal>(F.f1, F.f2, z, w, HpReal(0), tol);
  out.extended = true;
  Lift<Cx> C;
  for (std::size_t k = 0; k < 5; ++k) {
    C.f1[k] = Cx(static_cast<double>(F.f1[k].real()), static_cast<double>(F.f1[k].imag()));
    C.f2[k] = Cx(static_cast<double>(F.f2[k].real()), static_cast<double>(F.f2[k].imag()));
  }
  out.ill_conditioned = ill_conditioned(C);
  return out;
}

FiniteEscape escape_rate_finite(const Lift<Int>& F, const Int& z, const Int& w, const Int& p, int N) {
  if (p < 2 || !is_probable_prime(p)) throw Error(ErrorCode::Domain, "escape rate at a non-prime");
  if (N < 1) throw Error(ErrorCode::InsufficientDepth, "need at least one step");
  if (sgn(z) == 0 && sgn(w) == 0) throw Error(ErrorCode::UndefinedAtOrigin, "escape rate at the origin");
  if (mpz_divisible_p(z.get_mpz_t(), p.get_mpz_t()) && mpz_divisible_p(w.get_mpz_t(), p.get_mpz_t()))
    throw Error(ErrorCode::NormalizeFirst, "coordinates share the factor " + p.get_str());
  Int res = form_resultant(F);
  if (sgn(res) == 0) throw Error(ErrorCode::DegenerateInput, "lift has zero resultant");
  const long r = vp(res, p);
  FiniteEscape out;
  out.res_valuation = r;
  out.steps = N;
  long prec = (N + 1) * r + 1;
  Int mod = ipow(p, static_cast<unsigned long>(prec));
  Int a = z % mod, b = w % mod;
  Rat partial = 0, w4 = 1;
  for (int k = 1; k <= N; ++k) {
    w4 /= Rat(4);
    if (r == 0) break;
    Int nz = eval_form(F.f1, a, b), nw = eval_form(F.f2, a, b);
    mpz_fdiv_r(nz.get_mpz_t(), nz.get_mpz_t(), mod.get_mpz_t());
    mpz_fdiv_r(nw.get_mpz_t(), nw.get_mpz_t(), mod.get_mpz_t());
    long c = std::min(val_trunc(nz, p, prec), val_trunc(nw, p, prec));
    if (c > r || c >= prec) throw Error(ErrorCode::Precision, "p-adic precision exhausted");
    if (c > 0) {
      Int pc = ipow(p, static_cast<unsigned long>(c));
      mpz_divexact(nz.get_mpz_t(), nz.get_mpz_t(), pc.get_mpz_t());
      mpz_divexact(nw.get_mpz_t(), nw.get_mpz_t(), pc.get_mpz_t());
      prec -= c;
      mod = ipow(p, static_cast<unsigned long>(prec));
      mpz_fdiv_r(nz.get_mpz_t(), nz.get_mpz_t(), mod.get_mpz_t());
      mpz_fdiv_r(nw.get_mpz_t(), nw.get_mpz_t(), mod.get_mpz_t());
    }
    a = nz;
    b = nw;
    partial += Rat(c) * w4;
  }
  out.partial = -partial;
  // the omitted tail is at most r * sum_{k>N} 4^-k
  out.gap = Rat(r) * pow(Rat(4), -N) / Rat(3);
  if (r == 0) {
    out.value = 0;
    out.snapped = true;
    return out;
  }
  Rat s = simplest_in_interval(out.partial - out.gap, out.partial);
  long dmax = 48 * ((r + 1) / 2 + 1);
  if (s.den_ref() <= dmax) {
    out.value = s;
    out.snapped = true;
  } else {
    out.value = out.partial;
  }
  return out;
}

FiniteEscape escape_rate_finite(const Lift<Rat>& F, const Int& z, const Int& w, const Int& p, int N) {
  Int D = 1;
  for (std::size_t k = 0; k < 5; ++k) {
    mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), F.f1[k].den_ref().get_mpz_t());
    mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), F.f2[k].den_ref().get_mpz_t());
  }
  Lift<Int> FZ;
  for (std::size_t k = 0; k < 5; ++k) {
    FZ.f1[k] = (F.f1[k] * Rat(D)).num();
    FZ.f2[k] = (F.f2[k] * Rat(D)).num();
  }
  FiniteEscape out = escape_rate_finite(FZ, z, w, p, N);
  Rat shift = Rat(vp(D, p), 3);
  out.value += shift;
  out.partial += shift;
  return out;
}

FiniteEscape escape_rate_finite_homogeneous(const Lift<Rat>& F, const Int& z, const Int& w, const Int& p, int N) {
  if (sgn(z) == 0 && sgn(w) == 0) throw Error(ErrorCode::UndefinedAtOrigin, "escape rate at the origin");
  long k = std::min(sgn(z) ? vp(z, p) : LONG_MAX, sgn(w) ? vp(w, p) : LONG_MAX);
  Int pk = ipow(p, static_cast<unsigned long>(k));
  FiniteEscape out = escape_rate_finite(F, Int(z / pk), Int(w / pk), p, N);
  out.value -= Rat(k);
  out.partial -= Rat(k);
  return out;
}

LocalHeight local_height(const Curve<Rat>& E, const Rat& x, const PlaceQ& v, double tol, int finite_steps) {
  IntegralModel M = integral_model(E);
  auto inv = invariants(M.curve);
  if (sgn(inv.delta) == 0) throw Error(ErrorCode::SingularCurve, "curve is singular");
  Rat xp = x * Rat(M.u) * Rat(M.u);
  Int a = xp.num(), b = xp.den();
  Lift<Int> F = standard_lift(M.curve);
  LocalHeight out;
  out.place = v;
  if (v.archimedean) {
    ArchEscape G = escape_rate_arch(to_rat(F), Rat(a), Rat(b), tol * 0.1);
    out.value = 0.5 * G.value - 0.5 * log_abs(b) - log_abs(inv.delta) / 12.0;
    out.error_bound = 0.5 * G.tail_bound + 1e-15 * (1 + std::fabs(out.value));
    out.ill_conditioned = G.ill_conditioned;
    return out;
  }
  FiniteEscape G = escape_rate_finite(F, a, b, v.p, finite_steps);
  out.multiplier = Rat(1, 2) * G.value + Rat(1, 2) * Rat(vp(b, v.p)) + Rat(vp(inv.delta, v.p), 12);
  out.value = out.multiplier.to_double() * log_abs(v.p);
  out.exact = G.snapped;
  out.error_bound = G.snapped ? 0.0 : 0.5 * G.gap.to_double() * log_abs(v.p);
  return out;
}

double archimedean_local_height(const Curve<Cx>& E, Cx x, double tol) {
  Lift<Cx> F = standard_lift(E);
  Cx delta = invariants(E).delta;
  ArchEscape G = escape_rate_arch(F, x, Cx(1, 0), tol);
  return 0.5 * G.value - std::log(std::abs(delta)) / 12.0;
}

double archimedean_local_height(const Curve<HpComplex>& E, HpComplex x, double tol) {
  Lift<HpComplex> F = standard_lift(E);
  HpComplex delta = invariants(E).delta;
  ArchEscape G = escape_rate_arch(F, x, HpComplex(1), tol);
  return 0.5 * G.value - static_cast<double>(log(abs(delta))) / 12.0;
}

std::vector<LocalHeight> local_heights_batch(const std::vector<LocalHeightJob>& jobs, double tol) {
  std::vector<LocalHeight> out(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { out[i] = local_height(jobs[i].curve, jobs[i].x, jobs[i].place, tol); });
  return out;
}

std::vector<Int> bad_primes(const Curve<Rat>& E) {
  IntegralModel M = integral_model(E);
  Int res = form_resultant(Lift<Int>(standard_lift(M.curve)));
  if (sgn(res) == 0) throw Error(ErrorCode::SingularCurve, "curve is singular");
  return prime_divisors(res);
}

CanonicalHeight canonical_height(const Curve<Rat>& E, const Rat& x, int depth) {
  if (depth < 2) throw Error(ErrorCode::InsufficientDepth, "depth must be at least 2");
  IntegralModel M = integral_model(E);
  if (sgn(invariants(M.curve).delta) == 0) throw Error(ErrorCode::SingularCurve, "curve is singular");
  Lift<Int> F = standard_lift(M.curve);
  Rat xp = x * Rat(M.u) * Rat(M.u);
  CanonicalHeight out;
  out.depth = depth;
  Int a = xp.num(), b = xp.den();
  auto naive = [](const Int& p, const Int& q) { return std::max(log_abs(p), log_abs(q)); };
  std::vector<std::pair<Int, Int>> seen{{a, b}};
  out.limit_sequence.push_back(0.5 * naive(a, b));
  double quarter = 1;
  for (int k = 1; k <= depth; ++k) {
    Int na = eval_form(F.f1, a, b), nb = eval_form(F.f2, a, b);
    Int g;
    mpz_gcd(g.get_mpz_t(), na.get_mpz_t(), nb.get_mpz_t());
    na /= g;
    nb /= g;
    if (sgn(nb) < 0 || (sgn(nb) == 0 && sgn(na) < 0)) { na = -na; nb = -nb; }
    a = na;
    b = nb;
    quarter /= 4;
    if (sgn(b) == 0 || std::find(seen.begin(), seen.end(), std::make_pair(a, b)) != seen.end()) {
      out.exact_zero = true;
    }
    seen.emplace_back(a, b);
    out.limit_sequence.push_back(out.exact_zero ? 0.0 : 0.5 * naive(a, b) * quarter);
    if (out.exact_zero) break;
  }
  if (out.exact_zero) {
    out.limit_sequence.resize(static_cast<std::size_t>(depth) + 1, 0.0);
    return out;
  }
  out.limit_estimate = out.limit_sequence.back();
  Int a0 = xp.num(), b0 = xp.den();
  out.arch_term = 0.5 * escape_rate_arch(to_rat(F), Rat(a0), Rat(b0), 1e-15).value;
  double total = out.arch_term;
  for (const Int& p : prime_divisors(form_resultant(F))) {
    FiniteEscape G = escape_rate_finite(F, a0, b0, p, 40);
    Rat half = Rat(1, 2) * G.value;
    out.finite_exact = out.finite_exact && G.snapped;
    out.finite_terms.emplace_back(p, half);
    total += half.to_double() * log_abs(p);
  }
  out.value = total;
  out.gap = std::fabs(out.limit_estimate - out.value);
  return out;
}

TateValue tate_series_local_height(Cx q, Cx w, int terms) {
  double aq = std::abs(q);
  if (!(aq < 1) || aq == 0) throw Error(ErrorCode::Domain, "Tate parameter needs 0 < |q| < 1");
  if (w == Cx(0, 0)) throw Error(ErrorCode::Domain, "w must be nonzero");
  double lq = std::log(aq);
  double s = std::log(std::abs(w)) / lq;
  double fl = std::floor(s);
  Cx u = w * std::pow(q, -fl);
  s -= fl;
  if (std::abs(u - 1.0) < 1e-300) throw Error(ErrorCode::UndefinedAtOrigin, "w is a power of q");
  double B2 = s * s - s + 1.0 / 6.0;
  double v = -0.5 * B2 * lq - std::log(std::abs(1.0 - u));
  Cx qn = 1;
  for (int n = 1; n <= terms; ++n) {
    qn *= q;
    v -= std::log(std::abs((1.0 - qn * u) * (1.0 - qn / u)));
  }
  TateValue out;
  out.value = v;
  double qT = std::pow(aq, terms);
  out.error_bar = 2.0 * (qT * aq + qT) / (1.0 - aq) + 1e-15 * terms * (1 + std::fabs(v));
  return out;
}

}  // namespace hauteur
