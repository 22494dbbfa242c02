#include <doctest.h>

#include <random>

#include "hauteur/numeric/parse.hpp"
#include "hauteur/weierstrass.hpp"

using namespace hauteur;

namespace {

RatFunc rf(const char* s) { return parse_ratfunc(s); }

Curve<RatFunc> silverman() { return {rf("1/t"), rf("2/t"), rf("1/t"), rf("0"), rf("0")}; }
Curve<RatFunc> legendre() { return {rf("0"), rf("-(1+t)"), rf("0"), rf("t"), rf("0")}; }

// oracle: discriminant of the cubic a x^3 + b x^2 + c x + d
mpq_class cubic_disc(mpq_class a, mpq_class b, mpq_class c, mpq_class d) {
  return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
}

// oracle: tangent doubling on a general Weierstrass curve
mpq_class double_x(const Curve<Rat>& E, mpq_class x, mpq_class y) {
  mpq_class a1 = E.a1.value(), a2 = E.a2.value(), a3 = E.a3.value(), a4 = E.a4.value();
  mpq_class lam = (3 * x * x + 2 * a2 * x + a4 - a1 * y) / (2 * y + a1 * x + a3);
  return lam * lam + a1 * lam - a2 - 2 * x;
}

// oracle: determinant by fraction Gaussian elimination with mpq
mpq_class det_q(std::vector<std::vector<mpq_class>> M) {
  int n = static_cast<int>(M.size());
  mpq_class d = 1;
  for (int k = 0; k < n; ++k) {
    int p = k;
    while (p < n && M[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) { std::swap(M[p], M[k]); d = -d; }
    d *= M[k][k];
    for (int i = k + 1; i < n; ++i) {
      mpq_class f = M[i][k] / M[k][k];
      for (int j = k; j < n; ++j) M[i][j] -= f * M[k][j];
    }
  }
  return d;
}

std::vector<Rat> finite_rational(const std::vector<SingularParameter>& s) {
  std::vector<Rat> out;
  for (auto& p : s)
    if (p.place.kind == FfPlace::Kind::Rational) out.push_back(p.place.value);
  return out;
}

bool has_infinity(const std::vector<SingularParameter>& s) {
  for (auto& p : s)
    if (p.place.is_infinity()) return true;
  return false;
}

}  // namespace

TEST_CASE("invariants against cubic-discriminant oracle and syzygies") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = [&] { return Rat(static_cast<long>(rng() % 41) - 20, static_cast<long>(rng() % 5) + 1); };
    Curve<Rat> E{r(), r(), r(), r(), r()};
    auto v = invariants(E);
    CHECK(Rat(4) * v.b8 == v.b2 * v.b6 - v.b4 * v.b4);
    CHECK(v.c4 * v.c4 * v.c4 - v.c6 * v.c6 == Rat(1728) * v.delta);
    mpq_class d = cubic_disc(4, v.b2.value(), 2 * v.b4.value(), v.b6.value());
    CHECK(Rat(d) == Rat(16) * v.delta);
  }
}

TEST_CASE("short Weierstrass and j examples") {
  Curve<Rat> E{0, 0, 0, Rat(3), Rat(5)};
  auto v = invariants(E);
  CHECK(v.b2 == Rat(0));
  CHECK(v.b4 == Rat(6));
  CHECK(v.b6 == Rat(20));
  CHECK(v.b8 == Rat(-9));
  CHECK(*j_invariant(Curve<Rat>{0, 0, 0, 1, 0}) == Rat(1728));
  CHECK(!j_invariant(Curve<Rat>{0, 0, 0, 0, 0}).has_value());
  auto cusp = invariants(Curve<RatFunc>{0, 0, 0, 0, rf("t")});
  CHECK(cusp.delta == rf("-432 t^2"));
}

TEST_CASE("Legendre family") {
  auto v = invariants(legendre());
  CHECK(v.b2 == rf("-4(1+t)"));
  CHECK(v.b4 == rf("2t"));
  CHECK(v.b6 == rf("0"));
  CHECK(v.b8 == rf("-t^2"));
  CHECK(v.delta == rf("16 t^2 (t-1)^2"));
  auto D = duplication_map(legendre());
  // phi = (x^2 - t)^2, psi = 4x(x-1)(x-t)
  CHECK(D.phi[0] == rf("t^2"));
  CHECK(D.phi[2] == rf("-2t"));
  CHECK(D.phi[4] == rf("1"));
  CHECK(D.psi[1] == rf("4t"));
  CHECK(D.psi[2] == rf("-4(1+t)"));
  CHECK(D.psi[0] == rf("0"));
  auto F = standard_lift(legendre());
  auto [A, B] = apply_lift(F, RatFunc(2), RatFunc(1));
  CHECK(A / B == rf("(4-t)^2/(8(2-t))"));
}

TEST_CASE("duplication map agrees with tangent doubling") {
  std::mt19937_64 rng(2);
  int done = 0;
  while (done < 30) {
    long x0 = static_cast<long>(rng() % 21) - 10, y0 = static_cast<long>(rng() % 21) - 10;
    long a1 = static_cast<long>(rng() % 5) - 2, a2 = static_cast<long>(rng() % 5) - 2, a3 = static_cast<long>(rng() % 5) - 2,
         a4 = static_cast<long>(rng() % 11) - 5;
    // choose a6 so that (x0, y0) lies on the curve
    long a6 = y0 * y0 + a1 * x0 * y0 + a3 * y0 - x0 * x0 * x0 - a2 * x0 * x0 - a4 * x0;
    Curve<Rat> E{a1, a2, a3, a4, a6};
    if (invariants(E).delta.is_zero()) continue;
    if (2 * y0 + a1 * x0 + a3 == 0) continue;
    CHECK(on_curve(E, Rat(x0), Rat(y0)));
    auto D = duplication_map(E);
    Rat x(x0), phi = 0, psi = 0;
    for (int k = 4; k >= 0; --k) phi = phi * x + D.phi[static_cast<size_t>(k)];
    for (int k = 3; k >= 0; --k) psi = psi * x + D.psi[static_cast<size_t>(k)];
    CHECK(phi / psi == Rat(double_x(E, x0, y0)));
    // form resultant equals delta^2 up to sign, against a naive determinant
    Lift<Rat> F = standard_lift(E);
    std::vector<std::vector<mpq_class>> S(8, std::vector<mpq_class>(8, 0));
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k <= 4; ++k) {
        S[i][i + k] = F.f1[k].value();
        S[4 + i][i + k] = F.f2[k].value();
      }
    Rat res = form_resultant(F);
    CHECK(res == Rat(det_q(S)));
    CHECK(abs(res) == invariants(E).delta * invariants(E).delta);
    ++done;
  }
}

TEST_CASE("specialize") {
  CHECK_THROWS_AS(specialize(silverman(), Rat(0)), Error);
  try {
    specialize(silverman(), Rat(0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NeedsModelChange);
  }
  auto s3 = specialize(legendre(), Rat(3));
  CHECK(s3.curve.a2 == Rat(-4));
  CHECK(s3.curve.a4 == Rat(3));
  CHECK(s3.curve.a6 == Rat(0));
  CHECK(!s3.singular);
  CHECK(specialize(legendre(), Rat(1)).singular);
}

TEST_CASE("cleared model") {
  auto S = make_surface(silverman());
  CHECK(S.u == rf("t"));
  CHECK(S.cleared.a1 == ZPoly{1});
  CHECK(S.cleared.a2 == ZPoly{0, 2});
  CHECK(S.cleared.a3 == ZPoly{0, 0, 1});
  // delta' = -t^5 (t+1)^2 (27t+2) = t^12 * raw delta
  CHECK(RatFunc(Poly(S.delta)) == invariants(silverman()).delta * pow(rf("t"), 12));
  CHECK(invariants(silverman()).delta == rf("-(t+1)^2(27t+2)/t^7"));
  Curve<RatFunc> c6{0, 0, 0, 0, rf("1/t^6")};
  CHECK(make_surface(c6).u == rf("t"));
  Curve<RatFunc> half{0, rf("1/2"), 0, 0, rf("t/3")};
  auto H = make_surface(half);
  CHECK(H.u == rf("6"));
  CHECK(H.cleared.a2 == ZPoly{18});
  CHECK(H.cleared.a6 == ZPoly{0, 15552});
  CHECK_THROWS_AS(make_surface(Curve<RatFunc>{0, 0, 0, 0, 0}), Error);
}

TEST_CASE("singular parameters") {
  auto sv = singular_parameters(make_surface(silverman()));
  auto fin = finite_rational(sv);
  REQUIRE(fin.size() == 3);
  CHECK(fin[0] == Rat(-1));
  CHECK(fin[1] == Rat(-2, 27));
  CHECK(fin[2] == Rat(0));
  // the minimal model at infinity still has a discriminant of order 4
  CHECK(has_infinity(sv));
  auto lg = singular_parameters(make_surface(legendre()));
  fin = finite_rational(lg);
  REQUIRE(fin.size() == 2);
  CHECK(fin[0] == Rat(0));
  CHECK(fin[1] == Rat(1));
  CHECK(has_infinity(lg));
  auto cu = singular_parameters(make_surface(Curve<RatFunc>{0, 0, 0, 0, rf("t")}));
  fin = finite_rational(cu);
  REQUIRE(fin.size() == 1);
  CHECK(fin[0] == Rat(0));
  CHECK(has_infinity(cu));
  // an irrational orbit: y^2 = x^3 + t^2 + 1
  auto ir = singular_parameters(make_surface(Curve<RatFunc>{0, 0, 0, 0, rf("t^2+1")}));
  bool found = false;
  for (auto& p : ir)
    if (p.place.kind == FfPlace::Kind::Algebraic) {
      found = true;
      CHECK(p.place.minpoly == ZPoly{1, 0, 1});
      CHECK(p.approx.size() == 2);
    }
  CHECK(found);
  // y^2 = x^3 + t^4 x is a quadratic twist with good reduction at 0
  auto q = singular_parameters(make_surface(Curve<RatFunc>{0, 0, 0, rf("t^4"), 0}));
  fin = finite_rational(q);
  CHECK(fin.empty());
}
