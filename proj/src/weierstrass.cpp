#include "hauteur/weierstrass.hpp"

#include <algorithm>

#include "hauteur/numeric/factor.hpp"
#include "hauteur/numeric/gcd.hpp"
#include "hauteur/numeric/parse.hpp"
#include "hauteur/numeric/roots.hpp"

namespace hauteur {

std::optional<Rat> j_invariant(const Curve<Rat>& E) {
  auto v = invariants(E);
  if (v.delta.is_zero()) return std::nullopt;
  return v.c4 * v.c4 * v.c4 / v.delta;
}

std::optional<RatFunc> j_invariant(const Curve<RatFunc>& E) {
  auto v = invariants(E);
  if (v.delta.is_zero()) return std::nullopt;
  return v.c4 * v.c4 * v.c4 / v.delta;
}

namespace {

template <class R>
std::vector<std::vector<R>> sylvester(const Lift<R>& F) {
  std::vector<std::vector<R>> S(8, std::vector<R>(8, R(0)));
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k <= 4; ++k) {
      S[i][i + k] = F.f1[static_cast<std::size_t>(k)];
      S[4 + i][i + k] = F.f2[static_cast<std::size_t>(k)];
    }
  return S;
}

template <class R, class DivExact>
R bareiss(std::vector<std::vector<R>> S, DivExact divexact_fn) {
  const int N = static_cast<int>(S.size());
  R prev(1);
  int sign = 1;
  for (int k = 0; k < N - 1; ++k) {
    if (is_zero(S[k][k])) {
      int piv = -1;
      for (int r = k + 1; r < N; ++r)
        if (!is_zero(S[r][k])) { piv = r; break; }
      if (piv < 0) return R(0);
      std::swap(S[k], S[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i) {
      for (int j = k + 1; j < N; ++j) {
        R v = S[i][j] * S[k][k] - S[i][k] * S[k][j];
        S[i][j] = divexact_fn(v, prev);
      }
      S[i][k] = R(0);
    }
    prev = S[k][k];
  }
  R det = S[N - 1][N - 1];
  if (sign < 0) det = R(0) - det;
  return det;
}

template <class R>
R gauss_det(std::vector<std::vector<R>> S) {
  const int N = static_cast<int>(S.size());
  R det(1);
  for (int k = 0; k < N; ++k) {
    int piv = -1;
    for (int r = k; r < N; ++r)
      if (!is_zero(S[r][k])) { piv = r; break; }
    if (piv < 0) return R(0);
    if (piv != k) { std::swap(S[k], S[piv]); det = R(0) - det; }
    det = det * S[k][k];
    for (int i = k + 1; i < N; ++i) {
      if (is_zero(S[i][k])) continue;
      R f = S[i][k] / S[k][k];
      for (int j = k; j < N; ++j) S[i][j] = S[i][j] - f * S[k][j];
    }
  }
  return det;
}

}  // namespace

Int form_resultant(const Lift<Int>& F) {
  return bareiss(sylvester(F), [](const Int& a, const Int& b) {
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  });
}

ZPoly form_resultant(const Lift<ZPoly>& F) {
  return bareiss(sylvester(F), [](const ZPoly& a, const ZPoly& b) { return divexact(a, b); });
}

Rat form_resultant(const Lift<Rat>& F) { return gauss_det(sylvester(F)); }

Cx form_resultant(const Lift<Cx>& F) {
  // partial pivoting for stability
  auto S = sylvester(F);
  const int N = 8;
  Cx det = 1;
  for (int k = 0; k < N; ++k) {
    int piv = k;
    for (int r = k + 1; r < N; ++r)
      if (std::abs(S[r][k]) > std::abs(S[piv][k])) piv = r;
    if (S[piv][k] == Cx(0, 0)) return 0;
    if (piv != k) { std::swap(S[k], S[piv]); det = -det; }
    det *= S[k][k];
    for (int i = k + 1; i < N; ++i) {
      Cx f = S[i][k] / S[k][k];
      for (int j = k; j < N; ++j) S[i][j] -= f * S[k][j];
    }
  }
  return det;
}

IntegralModel integral_model(const Curve<Rat>& E) {
  Int u = 1;
  for (const Rat* a : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6})
    mpz_lcm(u.get_mpz_t(), u.get_mpz_t(), a->den_ref().get_mpz_t());
  IntegralModel M;
  M.u = u;
  auto scale = [&](const Rat& a, int i) {
    Rat v = a * pow(Rat(u), i);
    if (!v.is_integer()) throw Error(ErrorCode::Domain, "integral model construction failed");
    return v.num();
  };
  M.curve = {scale(E.a1, 1), scale(E.a2, 2), scale(E.a3, 3), scale(E.a4, 4), scale(E.a6, 6)};
  return M;
}

Curve<RatFunc> parse_curve(const std::array<std::string, 5>& c, const std::string& var) {
  return {parse_ratfunc(c[0], var), parse_ratfunc(c[1], var), parse_ratfunc(c[2], var), parse_ratfunc(c[3], var),
          parse_ratfunc(c[4], var)};
}

namespace {

Poly poly_lcm(const Poly& a, const Poly& b) {
  Poly g = poly_gcd(a, b);
  return monic(divrem(a * b, g).first);
}

ZPoly integral_zpoly(const Poly& p) {
  std::vector<Int> c;
  for (const auto& x : p.coeffs()) {
    if (!x.is_integer()) throw Error(ErrorCode::Domain, "expected integral coefficients");
    c.push_back(x.num());
  }
  return ZPoly(c);
}

}  // namespace

SurfaceModel make_surface(const Curve<RatFunc>& E, const std::string& var) {
  SurfaceModel S;
  S.raw = E;
  S.var = var;
  const std::array<const RatFunc*, 5> a = {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6};
  const std::array<int, 5> w = {1, 2, 3, 4, 6};
  Poly D = Poly::constant(1);
  for (auto* f : a) D = poly_lcm(D, f->den());
  // reduce exponents at rational poles to the minimum that clears every coefficient
  Poly u = D;
  if (D.degree() > 0) {
    ZPoly Dz = to_primitive(D).z;
    for (const auto& rr : rational_roots(Dz)) {
      FfPlace g = FfPlace::rational(rr.value);
      long need = 0;
      for (std::size_t i = 0; i < 5; ++i) {
        if (a[i]->is_zero()) continue;
        long o = ord_at(a[i]->den(), g);
        need = std::max(need, (o + w[i] - 1) / w[i]);
      }
      Poly lin{-rr.value, Rat(1)};
      u = divrem(u, pow(lin, static_cast<unsigned>(rr.multiplicity))).first * pow(lin, static_cast<unsigned>(need));
    }
  }
  std::array<Poly, 5> cleared;
  Int L = 1;
  for (std::size_t i = 0; i < 5; ++i) {
    RatFunc v = *a[i] * RatFunc(pow(u, static_cast<unsigned>(w[i])));
    if (!v.is_polynomial()) throw Error(ErrorCode::Domain, "failed to clear denominators");
    cleared[i] = v.num() * (Rat(1) / v.den().lead());
    for (const auto& c : cleared[i].coeffs()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.den_ref().get_mpz_t());
  }
  std::array<ZPoly, 5> z;
  for (std::size_t i = 0; i < 5; ++i) z[i] = integral_zpoly(cleared[i] * pow(Rat(L), w[i]));
  S.cleared = {z[0], z[1], z[2], z[3], z[4]};
  S.u = RatFunc(u * Rat(L));
  S.delta = invariants(S.cleared).delta;
  if (S.delta.is_zero()) throw Error(ErrorCode::NotEllipticSurface, "discriminant is identically zero");
  return S;
}

Specialization specialize(const Curve<RatFunc>& E, const Rat& t0) {
  auto ev = [&](const RatFunc& f, const char* name) {
    try {
      return eval(f, t0);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Pole)
        throw Error(ErrorCode::NeedsModelChange, std::string("coefficient ") + name + " has a pole at t = " + t0.to_string());
      throw;
    }
  };
  Specialization s;
  s.curve = {ev(E.a1, "a1"), ev(E.a2, "a2"), ev(E.a3, "a3"), ev(E.a4, "a4"), ev(E.a6, "a6")};
  s.singular = invariants(s.curve).delta.is_zero();
  return s;
}

Curve<Cx> specialize(const Curve<RatFunc>& E, const Cx& t0) {
  return {eval(E.a1, t0), eval(E.a2, t0), eval(E.a3, t0), eval(E.a4, t0), eval(E.a6, t0)};
}

Curve<Cx> specialize_cleared(const SurfaceModel& S, const Cx& t0) {
  const auto& c = S.cleared;
  return {eval(c.a1, t0), eval(c.a2, t0), eval(c.a3, t0), eval(c.a4, t0), eval(c.a6, t0)};
}

Curve<Rat> specialize_cleared(const SurfaceModel& S, const Rat& t0) {
  const auto& c = S.cleared;
  return {eval(c.a1, t0), eval(c.a2, t0), eval(c.a3, t0), eval(c.a4, t0), eval(c.a6, t0)};
}

namespace {

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

long ord_or_huge(const ZPoly& f, const FfPlace& g) {
  if (f.is_zero()) return 1L << 40;
  return ord_at(f, g);
}

}  // namespace

long minimal_discriminant_order(const SurfaceModel& S, const FfPlace& g) {
  auto v = invariants(S.cleared);
  long o4 = ord_or_huge(v.c4, g), o6 = ord_or_huge(v.c6, g), od = ord_at(v.delta, g);
  long k = std::min(floor_div(o4, 4), floor_div(o6, 6));
  return od - 12 * k;
}

std::vector<SingularParameter> singular_parameters(const SurfaceModel& S) {
  std::vector<SingularParameter> out;
  std::vector<FfPlace> candidates;
  for (const auto& [g, mult] : squarefree_decomposition(S.delta)) {
    ZPoly rest = g;
    for (const auto& rr : rational_roots(g)) {
      candidates.push_back(FfPlace::rational(rr.value));
      rest = divexact(rest, FfPlace::rational(rr.value).minpoly);
    }
    if (rest.degree() >= 1) candidates.push_back(FfPlace::algebraic(rest));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.push_back(FfPlace::infinity());
  for (const auto& g : candidates) {
    long od = minimal_discriminant_order(S, g);
    if (od <= 0) continue;
    SingularParameter sp;
    sp.place = g;
    sp.ord_delta_minimal = od;
    if (g.kind == FfPlace::Kind::Rational) sp.approx = {Cx(g.value.to_double(), 0)};
    if (g.kind == FfPlace::Kind::Algebraic) {
      sp.approx = complex_roots(g.minpoly);
      sp.irreducible_certified = certify_irreducible(g.minpoly);
    }
    out.push_back(sp);
  }
  return out;
}

}  // namespace hauteur
