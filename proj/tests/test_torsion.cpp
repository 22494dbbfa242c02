#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hauteur/heights_q.hpp"
#include "hauteur/numeric/gcd.hpp"
#include "hauteur/numeric/parse.hpp"
#include "hauteur/torsion.hpp"

using namespace hauteur;

namespace {

RatFunc rf(const char* s) { return parse_ratfunc(s); }
SurfaceModel legendre() { return make_surface(Curve<RatFunc>{rf("0"), rf("-(1+t)"), rf("0"), rf("t"), rf("0")}); }
SurfacePoint legendre_point(const char* x) { return make_section(legendre(), rf(x)); }
SurfacePoint silverman_point() {
  return make_section(make_surface(Curve<RatFunc>{rf("1/t"), rf("2/t"), rf("1/t"), rf("0"), rf("0")}), rf("0"), rf("0"));
}

bool has_root(const std::vector<TorsionRoot>& rs, const Rat& t) {
  for (const auto& r : rs)
    if (r.rational && *r.rational == t) return true;
  return false;
}

bool same_up_to_sign(const ZPoly& a, const ZPoly& b) { return a == b || a == -b; }

}  // namespace

TEST_CASE("torsion polynomials of the Legendre section x = 2") {
  auto P = legendre_point("2");
  CHECK(same_up_to_sign(torsion_polynomial(P, 1), ZPoly{-2, 1}));
  ZPoly T2 = torsion_polynomial(P, 2);
  CHECK(eval(T2, Rat(4)) == 0);
  CHECK(eval(T2, Rat(2)) == 0);
  CHECK_THROWS_AS(torsion_polynomial(P, 0), Error);
  CHECK_THROWS_AS(torsion_polynomial(P, 11), Error);

  auto t1 = torsion_parameters(P, 1);
  REQUIRE(t1.exact_order_roots().size() == 1);
  CHECK(t1.exact_order_roots()[0].rational == Rat(2));

  auto t2 = torsion_parameters(P, 2);
  CHECK(t2.diagnostic.empty());
  CHECK_FALSE(has_root(t2.exact_order_roots(), Rat(2)));
  CHECK(has_root(t2.exact_order_roots(), Rat(4)));
  CHECK(has_root(t2.exact_order_roots(), Rat(4, 3)));
  CHECK(t2.count(true) == static_cast<std::size_t>(t2.poly.degree()));
}

TEST_CASE("level structure and counting") {
  auto P = legendre_point("2");
  auto levels = torsion_levels(P, 6);
  std::size_t prev = 0;
  for (int n = 1; n <= 6; ++n) {
    auto ts = torsion_parameters(P, n);
    CHECK(ts.diagnostic.empty());
    CHECK(ts.count(true) == static_cast<std::size_t>(ts.poly.degree()));
    CHECK(ts.count(true) >= prev);
    prev = ts.count(true);
    // exact-order piece is coprime to every lower level
    for (int k = 0; k < n; ++k) CHECK(gcd(levels[static_cast<std::size_t>(n)], levels[static_cast<std::size_t>(k)]).degree() == 0);
  }
  double r5 = static_cast<double>(torsion_parameters(P, 5).count(true)) / std::pow(4.0, 5);
  double r6 = static_cast<double>(torsion_parameters(P, 6).count(true)) / std::pow(4.0, 6);
  CHECK(std::fabs(r6 - r5) <= 0.2 * r6);
}

TEST_CASE("rational torsion parameters have height zero") {
  for (auto P : {legendre_point("2"), legendre_point("5"), silverman_point()}) {
    auto ts = torsion_parameters(P, 6);
    CHECK(ts.diagnostic.empty());
    int seen = 0;
    for (const auto& r : ts.roots) {
      if (!r.rational) continue;
      ++seen;
      Curve<Rat> E = specialize_cleared(P.model, *r.rational);
      CHECK(!invariants(E).delta.is_zero());
      Rat B = eval(P.lift.B, *r.rational);
      if (B.is_zero()) continue;  // the section passes through O there
      auto h = canonical_height(E, eval(P.lift.A, *r.rational) / B, 6);
      CHECK_MESSAGE(h.exact_zero, r.rational->to_string());
    }
    CHECK(seen > 0);
  }
}

TEST_CASE("root sets are closed under conjugation") {
  auto ts = torsion_parameters(legendre_point("5"), 5);
  for (const auto& r : ts.roots) {
    double best = 1e300;
    for (const auto& s : ts.roots)
      if (s.level == r.level) best = std::min(best, std::abs(s.value - std::conj(r.value)));
    CHECK(best <= 1e-8 * std::max(1.0, std::abs(r.value)));
  }
}

TEST_CASE("common torsion") {
  auto P2 = legendre_point("2"), P5 = legendre_point("5");
  CHECK(common_torsion(P2, P5, 6).empty());
  CHECK(common_torsion(P5, P2, 6).empty());
  auto self = common_torsion(P2, P2, 4);
  REQUIRE(self.size() == 4);
  for (const auto& c : self) {
    CHECK(same_up_to_sign(c.gcd, torsion_polynomial(P2, c.n)));
    CHECK(c.roots.size() == static_cast<std::size_t>(c.gcd.degree()));
  }
  auto other = make_surface(Curve<RatFunc>{0, 0, 0, rf("-1"), parse_ratfunc("s", "s")}, "s");
  CHECK_THROWS_AS(common_torsion(P2, make_section(other, parse_ratfunc("3", "s")), 2), Error);
}

TEST_CASE("torsion CSV") {
  auto ts = torsion_parameters(legendre_point("2"), 2);
  std::string csv = torsion_csv(ts);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "n,re,im,exact_order_flag,multiplicity,rational_certified_flag,rational\r");
  int rows = 0;
  bool two = false, four = false;
  while (std::getline(is, line)) {
    REQUIRE(!line.empty());
    CHECK(line.back() == '\r');
    ++rows;
    two = two || line.rfind("1,2,0,0,1,1,2\r", 0) == 0;
    four = four || line == "2,4,0,1,2,1,4\r";
  }
  CHECK(rows == static_cast<int>(ts.roots.size()));
  CHECK(two);
  CHECK(four);
}
