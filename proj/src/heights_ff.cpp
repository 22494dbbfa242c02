#include "hauteur/heights_ff.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "hauteur/heights_q.hpp"
#include "hauteur/numeric/factor.hpp"
#include "hauteur/numeric/gcd.hpp"
#include "hauteur/numeric/modp.hpp"

namespace hauteur {

namespace {

ZPoly integral(const Poly& p) {
  std::vector<Int> c;
  for (const auto& x : p.coeffs()) c.push_back(x.num());
  return ZPoly(c);
}

Int joint_content(const ZPoly& a, const ZPoly& b) {
  Int g;
  Int ca = content(a), cb = content(b);
  mpz_gcd(g.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  return g;
}

void remove_joint_content(ZPoly& a, ZPoly& b) {
  Int g = joint_content(a, b);
  if (g > 1) {
    a = divexact(a, g);
    b = divexact(b, g);
  }
}

// Primitive integral pair proportional to (a, b) over Q.
std::pair<ZPoly, ZPoly> integral_pair(const Poly& a, const Poly& b) {
  Int L = 1;
  for (const auto* p : {&a, &b})
    for (const auto& c : p->coeffs()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.den_ref().get_mpz_t());
  ZPoly A = integral(a * Rat(L)), B = integral(b * Rat(L));
  remove_joint_content(A, B);
  return {A, B};
}

// Z[s] truncated mod s^prec.
struct SeriesRing {
  using Elem = ZPoly;
  long prec = 1;
  Elem reduce(const Elem& a) const { return truncate(a, static_cast<std::size_t>(prec)); }
  Elem mul(const Elem& a, const Elem& b) const { return mul_trunc(a, b, static_cast<std::size_t>(prec)); }
  long ord(const Elem& a) const {
    if (a.is_zero()) return prec;
    return std::min<long>(prec, static_cast<long>(a.low_order()));
  }
  Elem extract(const Elem& a, long c) const { return shift_down(a, static_cast<std::size_t>(c)); }
  void set_prec(long p) { prec = p; }
  void normalize(Elem& a, Elem& b) const { remove_joint_content(a, b); }
};

// Q[t] mod m^prec for an irreducible m.
struct MAdicRing {
  using Elem = Poly;
  Poly m, M;
  long prec = 1;
  explicit MAdicRing(const ZPoly& mz) : m(mz) {}
  Elem reduce(const Elem& a) const { return M.is_zero() ? a : divrem(a, M).second; }
  Elem mul(const Elem& a, const Elem& b) const { return reduce(a * b); }
  long ord(const Elem& a) const {
    Poly x = a;
    long k = 0;
    while (k < prec && !x.is_zero()) {
      auto [q, r] = divrem(x, m);
      if (!r.is_zero()) break;
      x = q;
      ++k;
    }
    return x.is_zero() ? prec : k;
  }
  Elem extract(const Elem& a, long c) const { return divrem(a, pow(m, static_cast<unsigned>(c))).first; }
  void set_prec(long p) {
    prec = p;
    M = p < (1L << 20) ? pow(m, static_cast<unsigned>(p)) : Poly();
  }
  void normalize(Elem& a, Elem& b) const {
    auto [A, B] = integral_pair(a, b);
    a = Poly(A);
    b = Poly(B);
  }
};

template <class Ring>
typename Ring::Elem eval_form_in(const Ring& R, const std::array<typename Ring::Elem, 5>& f, const typename Ring::Elem& z,
                                 const typename Ring::Elem& w) {
  auto acc = f[0];
  auto wp = w;
  for (int k = 1; k <= 4; ++k) {
    acc = R.mul(acc, z) + R.mul(f[static_cast<std::size_t>(k)], wp);
    if (k < 4) wp = R.mul(wp, w);
  }
  return acc;
}

template <class Ring>
FfEscape escape_loop(Ring& R, std::array<typename Ring::Elem, 5> f1, std::array<typename Ring::Elem, 5> f2,
                     typename Ring::Elem a, typename Ring::Elem b, long r, int N) {
  if (N < 1) throw Error(ErrorCode::InsufficientDepth, "need at least one step");
  FfEscape out;
  out.res_order = r;
  out.steps = N;
  long prec = (N + 1) * r + 1;
  // the initial pair may share a power of the uniformizer
  if (a.is_zero() && b.is_zero()) throw Error(ErrorCode::UndefinedAtOrigin, "escape rate at the origin");
  R.set_prec(LONG_MAX / 4);
  long c0 = std::min(R.ord(a), R.ord(b));
  if (c0 > 0) {
    a = R.extract(a, c0);
    b = R.extract(b, c0);
  }
  R.set_prec(prec);
  a = R.reduce(a);
  b = R.reduce(b);
  for (auto& x : f1) x = R.reduce(x);
  for (auto& x : f2) x = R.reduce(x);
  Rat partial = 0, w4 = 1;
  for (int k = 1; k <= N && r > 0; ++k) {
    w4 /= Rat(4);
    auto na = eval_form_in(R, f1, a, b), nb = eval_form_in(R, f2, a, b);
    long c = std::min(R.ord(na), R.ord(nb));
    if (c > r || c >= prec) throw Error(ErrorCode::Precision, "precision exhausted at a place of the base");
    if (c > 0) {
      na = R.extract(na, c);
      nb = R.extract(nb, c);
      prec -= c;
      R.set_prec(prec);
      na = R.reduce(na);
      nb = R.reduce(nb);
    }
    R.normalize(na, nb);
    a = na;
    b = nb;
    out.extracted.push_back(c);
    partial += Rat(c) * w4;
  }
  out.partial = -partial;
  out.gap = Rat(r) * pow(Rat(4), -N) / Rat(3);
  if (r == 0) {
    out.value = 0;
    out.snapped = true;
  } else {
    Rat s = simplest_in_interval(out.partial - out.gap, out.partial);
    long dmax = 48 * ((r + 1) / 2 + 1);
    out.snapped = s.den_ref() <= dmax;
    out.value = out.snapped ? s : out.partial;
  }
  Rat shift(-c0);
  out.value += shift;
  out.partial += shift;
  return out;
}

int max_degree(const Lift<ZPoly>& F) {
  int E = 0;
  for (std::size_t k = 0; k < 5; ++k) E = std::max({E, F.f1[k].degree(), F.f2[k].degree()});
  return E;
}

// s^E f(1/s)
ZPoly at_infinity(const ZPoly& f, int E) {
  if (f.is_zero()) return f;
  return shift_up(reverse(f, static_cast<std::size_t>(f.degree())), static_cast<std::size_t>(E - f.degree()));
}

// q^E f((s + p)/q)
ZPoly at_rational(const ZPoly& f, const Int& p, const Int& q, int E) {
  if (f.is_zero()) return f;
  Int scale;
  mpz_pow_ui(scale.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(E - f.degree()));
  return substitute_affine(f, p, q, f.degree()) * scale;
}

Cx hp_to_cx(const HpComplex& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

HpComplex eval_hp(const ZPoly& f, const HpComplex& t) {
  HpComplex acc(0);
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * t + HpComplex(HpReal(f[i].get_str()));
  return acc;
}

}  // namespace

Lift<ZPoly> cleared_lift(const SurfaceModel& S) { return standard_lift(S.cleared); }

SurfacePoint zero_section(const SurfaceModel& S) {
  SurfacePoint P;
  P.model = S;
  P.zero = true;
  P.lift = {ZPoly(1), ZPoly()};
  return P;
}

SurfacePoint make_section(const SurfaceModel& S, const RatFunc& x, std::optional<RatFunc> y) {
  if (y && !on_curve(S.raw, x, *y)) throw Error(ErrorCode::OffCurve, "section does not satisfy the Weierstrass equation");
  SurfacePoint P;
  P.model = S;
  P.x = x;
  P.y = std::move(y);
  RatFunc xc = S.u * S.u * x;
  auto [A, B] = integral_pair(xc.num(), xc.den());
  if (B.lead() < 0) {
    A = -A;
    B = -B;
  }
  P.lift = {A, B};
  return P;
}

FfEscape ff_escape_rate_ord(const Lift<ZPoly>& F, const SectionX& X, const FfPlace& g, int N) {
  if (form_resultant(F).is_zero()) throw Error(ErrorCode::DegenerateInput, "lift has zero resultant");
  if (g.kind == FfPlace::Kind::Algebraic) {
    MAdicRing R(g.minpoly);
    std::array<Poly, 5> f1, f2;
    for (std::size_t k = 0; k < 5; ++k) {
      f1[k] = Poly(F.f1[k]);
      f2[k] = Poly(F.f2[k]);
    }
    R.set_prec(LONG_MAX / 4);
    long r = R.ord(Poly(form_resultant(F)));
    return escape_loop(R, f1, f2, Poly(X.A), Poly(X.B), r, N);
  }
  const int E = max_degree(F);
  Lift<ZPoly> Fs;
  ZPoly a, b;
  int d = 0;
  if (g.is_infinity()) {
    for (std::size_t k = 0; k < 5; ++k) {
      Fs.f1[k] = at_infinity(F.f1[k], E);
      Fs.f2[k] = at_infinity(F.f2[k], E);
    }
    d = std::max(X.A.degree(), X.B.degree());
    a = at_infinity(X.A, d);
    b = at_infinity(X.B, d);
  } else {
    const Int p = g.value.num(), q = g.value.den();
    for (std::size_t k = 0; k < 5; ++k) {
      Fs.f1[k] = at_rational(F.f1[k], p, q, E);
      Fs.f2[k] = at_rational(F.f2[k], p, q, E);
    }
    int e = std::max(X.A.degree(), X.B.degree());
    a = at_rational(X.A, p, q, e);
    b = at_rational(X.B, p, q, e);
  }
  SeriesRing R;
  long r = static_cast<long>(form_resultant(Fs).low_order());
  FfEscape out = escape_loop(R, Fs.f1, Fs.f2, a, b, r, N);
  if (g.is_infinity()) {
    Rat shift = Rat(d) + Rat(E, 3);
    out.value += shift;
    out.partial += shift;
  }
  return out;
}

PlaceSplit split_places(const std::vector<ZPoly>& polys) {
  std::vector<Rat> rational;
  std::vector<ZPoly> pieces;
  for (const auto& f : polys) {
    if (f.degree() < 1) continue;
    for (const auto& [g, mult] : squarefree_decomposition(f)) {
      if (g.degree() < 1) continue;
      ZPoly rest = g;
      for (const auto& rr : rational_roots(g)) {
        rational.push_back(rr.value);
        rest = divexact(rest, FfPlace::rational(rr.value).minpoly);
      }
      if (rest.degree() < 1) continue;
      // refine against the pieces seen so far
      std::vector<ZPoly> next;
      for (auto& e : pieces) {
        if (rest.degree() < 1) {
          next.push_back(e);
          continue;
        }
        ZPoly c = gcd(e, rest);
        if (c.degree() >= 1) {
          ZPoly e1 = divexact(e, c);
          if (e1.degree() >= 1) next.push_back(primitive_part(e1));
          next.push_back(c);
          rest = primitive_part(divexact(rest, c));
        } else {
          next.push_back(e);
        }
      }
      if (rest.degree() >= 1) next.push_back(primitive_part(rest));
      pieces = std::move(next);
    }
  }
  std::sort(rational.begin(), rational.end());
  rational.erase(std::unique(rational.begin(), rational.end()), rational.end());
  PlaceSplit out;
  for (const auto& v : rational) {
    out.places.push_back(FfPlace::rational(v));
    out.certified.push_back(true);
  }
  std::vector<std::pair<FfPlace, bool>> alg;
  for (const auto& m : pieces) alg.emplace_back(FfPlace::algebraic(m), certify_irreducible(m));
  std::sort(alg.begin(), alg.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto& [pl, c] : alg) {
    out.places.push_back(pl);
    out.certified.push_back(c);
  }
  return out;
}

BaseDivisor divisor_DEP(const SurfacePoint& P, int N) {
  if (P.zero) throw Error(ErrorCode::DegenerateInput, "the zero section has no height divisor");
  Lift<ZPoly> F = cleared_lift(P.model);
  ZPoly res = form_resultant(F);
  PlaceSplit split = split_places({res, P.lift.B, P.model.delta});
  split.places.push_back(FfPlace::infinity());
  split.certified.push_back(true);
  BaseDivisor D;
  for (std::size_t i = 0; i < split.places.size(); ++i) {
    const FfPlace& g = split.places[i];
    FfEscape G = ff_escape_rate_ord(F, P.lift, g, N);
    DivisorEntry e;
    e.place = g;
    e.escape = G.value;
    e.snapped = G.snapped;
    e.gap = G.gap;
    e.irreducible_certified = split.certified[i];
    e.ord_b = P.lift.B.is_zero() ? 0 : ord_at(P.lift.B, g);
    e.ord_delta = ord_at(P.model.delta, g);
    e.coeff = Rat(1, 2) * G.value + Rat(e.ord_b, 2) + Rat(e.ord_delta, 12);
    D.exact = D.exact && G.snapped && e.irreducible_certified;
    D.degree += e.coeff * Rat(g.degree());
    D.audit.push_back(e);
    if (!e.coeff.is_zero()) D.entries.push_back(e);
  }
  return D;
}

// Divide A and B by every power of the squarefree g they share. A large-prime test
// screens candidates; exact division confirms them.
void strip_common_factor(ZPoly& A, ZPoly& B, const ZPoly& g, std::vector<ZPoly>* removed) {
  const modp::u64 p = modp::large_prime(3);
  modp::Vec gp = modp::from_zpoly(g, p);
  for (;;) {
    if (A.degree() < g.degree() || B.degree() < g.degree()) return;
    modp::Vec c = modp::gcd(gp, modp::rem(modp::from_zpoly(A, p), gp, p), p);
    if (c.size() < 2) return;
    c = modp::gcd(c, modp::rem(modp::from_zpoly(B, p), c, p), p);
    if (c.size() < 2) return;
    ZPoly qa, qb;
    if (static_cast<int>(c.size()) - 1 == g.degree() && try_divexact(A, g, &qa) && try_divexact(B, g, &qb)) {
      A = std::move(qa);
      B = std::move(qb);
      if (removed) removed->push_back(g);
      continue;
    }
    // partial or unconfirmed: exact gcd
    ZPoly e = gcd(g, pseudo_remainder(A, g));
    if (e.degree() >= 1) e = gcd(e, pseudo_remainder(B, e));
    if (e.degree() < 1) return;
    A = divexact(A, e);
    B = divexact(B, e);
    if (removed) removed->push_back(e);
  }
}

ZPoly strip_factors(ZPoly f, const std::vector<ZPoly>& gs, std::vector<ZPoly>* removed) {
  const modp::u64 p = modp::large_prime(3);
  for (const auto& g : gs) {
    modp::Vec gp = modp::from_zpoly(g, p);
    ZPoly q;
    while (f.degree() >= g.degree() && modp::rem(modp::from_zpoly(f, p), gp, p).empty() && try_divexact(f, g, &q)) {
      f = std::move(q);
      if (removed) removed->push_back(g);
    }
  }
  return f;
}

XMapStep x_map_step(const Lift<ZPoly>& F, const SectionX& X, const std::vector<ZPoly>& strike, std::vector<ZPoly>* removed) {
  const ZPoly &z = X.A, &w = X.B;
  ZPoly z2 = sqr(z), w2 = sqr(w);
  ZPoly z3 = z2 * z, z2w = z2 * w, zw2 = z * w2, w3 = w2 * w;
  const std::array<const ZPoly*, 4> cubic = {&z3, &z2w, &zw2, &w3};
  ZPoly inner, q;
  for (std::size_t k = 0; k < 4; ++k) {
    if (!F.f1[k].is_zero()) inner += F.f1[k] * *cubic[k];
    if (!F.f2[k + 1].is_zero()) q += F.f2[k + 1] * *cubic[k];
  }
  if (!F.f2[0].is_zero()) throw Error(ErrorCode::Domain, "lift is not a standard lift");
  ZPoly A = z * inner;
  if (!F.f1[4].is_zero()) A += F.f1[4] * sqr(w2);
  XMapStep out;
  out.q = q;
  ZPoly B = w * q;
  if (B.is_zero()) {
    out.next = {ZPoly(1), ZPoly()};
    return out;
  }
  for (const auto& g : strike) strip_common_factor(A, B, g, removed);
  remove_joint_content(A, B);
  if (B.lead() < 0) {
    A = -A;
    B = -B;
  }
  out.next = {A, B};
  return out;
}

std::vector<ZPoly> resultant_places(const SurfaceModel& S) {
  std::vector<ZPoly> out;
  for (const auto& g : split_places({form_resultant(cleared_lift(S)), S.delta}).places) out.push_back(g.minpoly);
  return out;
}

SectionX iterate_x_map(const SurfacePoint& P, int n, int cap) {
  if (n < 0) throw Error(ErrorCode::Domain, "negative iteration count");
  if (n > cap) throw Error(ErrorCode::Resource, "iteration count " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
  Lift<ZPoly> F = cleared_lift(P.model);
  // common factors of F(A, B) for coprime (A, B) divide the resultant
  std::vector<ZPoly> strike = resultant_places(P.model);
  SectionX X = P.lift;
  for (int k = 0; k < n && !X.B.is_zero(); ++k) X = x_map_step(F, X, strike).next;
  return X;
}

FfHeight ff_canonical_height(const SurfacePoint& P, int N, int depth) {
  FfHeight out;
  if (P.zero) return out;
  Lift<ZPoly> F = cleared_lift(P.model);
  PlaceSplit split = split_places({form_resultant(F)});
  split.places.push_back(FfPlace::infinity());
  Rat sum = 0;
  for (const auto& g : split.places) {
    FfEscape G = ff_escape_rate_ord(F, P.lift, g, N);
    out.exact = out.exact && G.snapped;
    sum += G.value * Rat(g.degree());
  }
  for (bool c : split.certified) out.exact = out.exact && c;
  out.value = Rat(1, 2) * sum;
  Rat w4 = 1;
  for (int k = 0; k <= depth; ++k) {
    SectionX X = iterate_x_map(P, k, std::max(depth, 10));
    int h = X.B.is_zero() ? 0 : std::max(X.A.degree(), X.B.degree());
    out.limit_sequence.push_back(Rat(h, 2) * w4);
    w4 /= Rat(4);
  }
  return out;
}

RatFunc reference_xi(const FfPlace& g) {
  switch (g.kind) {
    case FfPlace::Kind::Infinity:
      return RatFunc::t();
    case FfPlace::Kind::Rational:
      return RatFunc(Poly::constant(1), Poly{-g.value, Rat(1)});
    default:
      return RatFunc(Poly::constant(1), Poly(g.minpoly));
  }
}

ReferenceHeightSpec reference_spec(const BaseDivisor& D) {
  ReferenceHeightSpec s;
  for (const auto& e : D.entries) s.entries.emplace_back(e.place, e.coeff);
  return s;
}

ReferenceValue reference_height(const ReferenceHeightSpec& spec, const Rat& t, const PlaceQ& v) {
  ReferenceValue out;
  for (const auto& [g, c] : spec.entries) {
    // inverse of xi_g at t; zero means t is a pole of xi_g
    Rat inv;
    switch (g.kind) {
      case FfPlace::Kind::Infinity:
        if (t.is_zero()) continue;
        inv = Rat(1) / t;
        break;
      case FfPlace::Kind::Rational:
        inv = t - g.value;
        break;
      default:
        inv = eval(g.minpoly, t);
    }
    if (inv.is_zero()) throw Error(ErrorCode::Pole, "t = " + t.to_string() + " lies in the support");
    if (v.archimedean) {
      double x = 1.0 / inv.to_double();
      out.value += 0.5 * c.to_double() * std::log1p(x * x);
    } else {
      long k = vp(inv, v.p);
      if (k > 0) out.multiplier += c * Rat(k);
    }
  }
  if (!v.archimedean) out.value = out.multiplier.to_double() * log_abs(v.p);
  return out;
}

std::vector<Int> quasi_triviality_candidates(const SurfacePoint& P, const BaseDivisor& D) {
  std::vector<Int> out{2, 3};
  auto add_int = [&](const Int& n) {
    if (sgn(n) == 0) return;
    for (const auto& p : prime_divisors(n)) out.push_back(p);
  };
  auto add_poly = [&](const ZPoly& f) {
    if (f.is_zero()) return;
    add_int(content(f));
    add_int(f.lead());
    add_int(f.coeff(0));
  };
  const SurfaceModel& S = P.model;
  add_poly(S.delta);
  add_poly(P.lift.A);
  add_poly(P.lift.B);
  for (const auto* c : {&S.cleared.a1, &S.cleared.a2, &S.cleared.a3, &S.cleared.a4, &S.cleared.a6}) add_poly(*c);
  add_poly(integral_pair(S.u.num(), S.u.den()).first);
  if (!P.lift.A.is_zero() && !P.lift.B.is_zero() && P.lift.A.degree() + P.lift.B.degree() > 0)
    add_int(resultant(P.lift.A, P.lift.B));
  // radical of delta * B0 and its discriminant
  ZPoly rad(1);
  for (const auto& f : {S.delta, P.lift.B}) {
    if (f.degree() < 1) continue;
    for (const auto& [g, m] : squarefree_decomposition(f)) rad = rad * g;
  }
  rad = primitive_part(rad);
  if (rad.degree() >= 1) {
    for (const auto& [g, m] : squarefree_decomposition(rad)) {
      if (g.degree() >= 1) add_int(discriminant(g));
      add_poly(g);
    }
  }
  for (const auto& e : D.entries) {
    if (e.place.kind == FfPlace::Kind::Rational) {
      add_int(e.place.value.num());
      add_int(e.place.value.den());
    } else if (e.place.kind == FfPlace::Kind::Algebraic) {
      add_poly(e.place.minpoly);
      add_int(discriminant(e.place.minpoly));
    }
    add_int(e.coeff.den());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QuasiTrivialReport quasi_triviality_check(const SurfacePoint& P, const BaseDivisor& D, const Rat& t,
                                          const std::vector<Int>& primes) {
  QuasiTrivialReport out;
  out.t = t;
  const SurfaceModel& S = P.model;
  if (eval(S.delta, t).is_zero()) throw Error(ErrorCode::SingularCurve, "singular fiber at t = " + t.to_string());
  Rat b = eval(P.lift.B, t);
  if (b.is_zero()) throw Error(ErrorCode::Pole, "section meets the zero section at t = " + t.to_string());
  Curve<Rat> Et = specialize_cleared(S, t);
  Rat xt = eval(P.lift.A, t) / b;
  ReferenceHeightSpec spec = reference_spec(D);
  std::vector<Int> cand = quasi_triviality_candidates(P, D);
  for (const auto& p : primes) {
    QuasiTrivialEntry e;
    e.p = p;
    LocalHeight L = local_height(Et, xt, PlaceQ::finite(p));
    e.local = L.multiplier;
    e.exact = L.exact;
    e.reference = reference_height(spec, t, PlaceQ::finite(p)).multiplier;
    e.equal = e.exact && e.local == e.reference;
    e.candidate = std::binary_search(cand.begin(), cand.end(), p);
    if (!e.equal) {
      out.exceptional.push_back(p);
      out.contained = out.contained && e.candidate;
    }
    out.entries.push_back(e);
  }
  return out;
}

double fiber_local_height(const SurfacePoint& P, const Cx& t, double tol) {
  const SurfaceModel& S = P.model;
  Curve<Cx> C = specialize_cleared(S, t);
  Lift<Cx> F = standard_lift(C);
  Cx A = eval(P.lift.A, t), B = P.lift.B.is_zero() ? Cx(0, 0) : eval(P.lift.B, t);
  double cmax = 0;
  for (std::size_t i = 0; i < 5; ++i) cmax = std::max({cmax, std::abs(F.f1[i]), std::abs(F.f2[i])});
  if (std::abs(form_resultant(F)) >= 1e-12 * std::pow(cmax, 8)) {
    ArchEscape G = escape_rate_arch(F, A, B, tol);
    return 0.5 * G.value - 0.5 * std::log(std::abs(B)) - std::log(std::abs(invariants(C).delta)) / 12.0;
  }
  HpComplex th(HpReal(t.real()), HpReal(t.imag()));
  const auto& c = S.cleared;
  Curve<HpComplex> Ch{eval_hp(c.a1, th), eval_hp(c.a2, th), eval_hp(c.a3, th), eval_hp(c.a4, th), eval_hp(c.a6, th)};
  HpComplex Ah = eval_hp(P.lift.A, th), Bh = eval_hp(P.lift.B, th);
  ArchEscape G = escape_rate_arch(standard_lift(Ch), Ah, Bh, std::min(tol, 1e-16));
  return 0.5 * G.value - 0.5 * std::log(std::abs(hp_to_cx(Bh))) -
         static_cast<double>(log(abs(invariants(Ch).delta))) / 12.0;
}

RegularizedPotential regularized_potential(const SurfacePoint& P, const BaseDivisor& D, const Rat& t0) {
  RegularizedPotential rp;
  rp.point = P;
  rp.t0 = Cx(t0.to_double(), 0);
  rp.u = RatFunc(Poly{-t0, Rat(1)});
  rp.c = 0;
  for (const auto& e : D.entries)
    if (e.place == FfPlace::rational(t0)) rp.c = e.coeff;
  return rp;
}

PotentialValue regularized_potential_eval(const RegularizedPotential& rp, const Cx& t, double radius) {
  auto V = [&](const Cx& s) {
    return fiber_local_height(rp.point, s) + rp.c.to_double() * std::log(std::abs(eval(rp.u, s)));
  };
  PotentialValue out;
  if (std::abs(t - rp.t0) > 0) {
    out.value = V(t);
    return out;
  }
  // mean over four points on a small circle
  const Cx dirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  double sum = 0;
  for (const auto& d : dirs) sum += V(t + radius * d);
  out.value = sum / 4;
  out.extrapolated = true;
  return out;
}

}  // namespace hauteur
