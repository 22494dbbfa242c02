#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "hauteur/error.hpp"
#include "hauteur/numeric/factor.hpp"
#include "hauteur/numeric/gcd.hpp"
#include "hauteur/numeric/parse.hpp"
#include "hauteur/numeric/roots.hpp"
#include "hauteur/numeric/valuation.hpp"

using namespace hauteur;

namespace {

// --- oracles -------------------------------------------------------------

std::vector<Int> schoolbook(const std::vector<Int>& a, const std::vector<Int>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Int> c(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  while (!c.empty() && c.back() == 0) c.pop_back();
  return c;
}

// Euclid over Q with plain mpq arithmetic, monic result
std::vector<mpq_class> euclid_gcd(std::vector<mpq_class> a, std::vector<mpq_class> b) {
  auto trim = [](std::vector<mpq_class>& v) { while (!v.empty() && v.back() == 0) v.pop_back(); };
  trim(a); trim(b);
  while (!b.empty()) {
    std::vector<mpq_class> r = a;
    while (r.size() >= b.size() && !r.empty()) {
      mpq_class f = r.back() / b.back();
      size_t off = r.size() - b.size();
      for (size_t j = 0; j < b.size(); ++j) r[off + j] -= f * b[j];
      r.pop_back();
      trim(r);
    }
    a = b;
    b = r;
  }
  mpq_class l = a.back();
  for (auto& x : a) x /= l;
  return a;
}

long naive_vp(Int x, const Int& p) {
  long k = 0;
  x = abs(x);
  while (x % p == 0) { x /= p; ++k; }
  return k;
}

std::vector<Cx> eigen_companion(const std::vector<double>& c) {
  int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i] / c[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<Cx> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

ZPoly random_zpoly(std::mt19937_64& rng, int deg, int bits) {
  std::vector<Int> c(deg + 1);
  gmp_randclass gr(gmp_randinit_default);
  gr.seed(static_cast<unsigned long>(rng()));
  for (auto& x : c) {
    x = gr.get_z_bits(bits);
    if (rng() & 1) x = -x;
  }
  if (c.back() == 0) c.back() = 1;
  return ZPoly(c);
}

Poly P(std::initializer_list<long> c) {
  std::vector<Rat> v;
  for (long x : c) v.emplace_back(x);
  return Poly(v);
}

}  // namespace

TEST_CASE("rational parsing and snapping") {
  CHECK(Rat::parse("-3/6") == Rat(-1, 2));
  CHECK(Rat::parse("0.25") == Rat(1, 4));
  CHECK(Rat::parse("1.5e-1") == Rat(3, 20));
  CHECK_THROWS_AS(Rat::parse("1/0"), Error);
  CHECK(simplest_in_interval(Rat(31, 100), Rat(34, 100)) == Rat(1, 3));
  CHECK(simplest_in_interval(Rat(-7, 4), Rat(-5, 4)) == Rat(-3, 2));
  CHECK(simplest_in_interval(Rat(2, 7), Rat(2, 7)) == Rat(2, 7));
}

TEST_CASE("Kronecker multiplication matches schoolbook") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int da = 1 + static_cast<int>(rng() % 80), db = 1 + static_cast<int>(rng() % 80);
    int bits = 1 + static_cast<int>(rng() % 300);
    ZPoly a = random_zpoly(rng, da, bits), b = random_zpoly(rng, db, 1 + static_cast<int>(rng() % 90));
    CHECK(mul(a, b).coeffs() == schoolbook(a.coeffs(), b.coeffs()));
    CHECK(sqr(a).coeffs() == schoolbook(a.coeffs(), a.coeffs()));
    size_t n = rng() % 60 + 1;
    CHECK(mul_trunc(a, b, n) == truncate(mul(a, b), n));
  }
}

TEST_CASE("poly_gcd examples") {
  CHECK(poly_gcd(P({-1, 0, 1}), P({-1, 1})) == P({-1, 1}));
  CHECK(poly_gcd(P({2, -3, 1}), P({-1, 0, 1})) == P({-1, 1}));
  CHECK(poly_gcd(P({0, 1}), P({1})) == P({1}));
  CHECK_THROWS_AS(poly_gcd(Poly(), Poly()), Error);
  try {
    poly_gcd(Poly(), Poly());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateInput);
  }
}

TEST_CASE("gcd against Euclid oracle, small and modular paths") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    ZPoly g = random_zpoly(rng, static_cast<int>(rng() % 6), 20);
    ZPoly a = mul(g, random_zpoly(rng, static_cast<int>(rng() % 30), 40));
    ZPoly b = mul(g, random_zpoly(rng, static_cast<int>(rng() % 30), 40));
    std::vector<mpq_class> qa, qb;
    for (auto& c : a.coeffs()) qa.emplace_back(c);
    for (auto& c : b.coeffs()) qb.emplace_back(c);
    auto want = euclid_gcd(qa, qb);
    Poly got = poly_gcd(Poly(a), Poly(b));
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) CHECK(got[i].value() == want[i]);
    CHECK(subresultant_gcd(a, b) == modular_gcd(a, b));
  }
}

TEST_CASE("gcd laws") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ZPoly a = random_zpoly(rng, 1 + static_cast<int>(rng() % 10), 10);
    ZPoly b = random_zpoly(rng, 1 + static_cast<int>(rng() % 10), 10);
    ZPoly c = random_zpoly(rng, 1 + static_cast<int>(rng() % 4), 10);
    Poly g = poly_gcd(Poly(a), Poly(b));
    CHECK(g == poly_gcd(Poly(b), Poly(a)));
    CHECK(divrem(Poly(a), g).second.is_zero());
    CHECK(divrem(Poly(b), g).second.is_zero());
    // gcd(ac, bc) = gcd(a,b) * monic(c)
    CHECK(poly_gcd(Poly(mul(a, c)), Poly(mul(b, c))) == monic(g * Poly(c)));
  }
}

TEST_CASE("ratfunc normalisation is idempotent") {
  RatFunc f(P({-1, 0, 1}) * Rat(3), P({2, 0, 2}) * P({1, 1}));
  CHECK(f.den() == P({1, 0, 1}));
  CHECK(f.num() == P({-3, 3}) * Rat(1, 2));
  RatFunc g(f.num(), f.den());
  CHECK(g == f);
}

TEST_CASE("vp examples and laws") {
  CHECK(vp(Int(24), Int(2)) == 3);
  CHECK(vp(Rat(8, 9), Int(3)) == -2);
  CHECK(vp(Int(7), Int(5)) == 0);
  CHECK_THROWS_AS(vp(Int(0), Int(3)), Error);
  std::mt19937_64 rng(3);
  const std::vector<unsigned long> primes = primes_up_to(200);
  for (int trial = 0; trial < 100; ++trial) {
    Int n = static_cast<unsigned long>(rng() % 100000 + 1), d = static_cast<unsigned long>(rng() % 100000 + 1);
    Rat x(n, d);
    // product formula: log|x| + sum_p -vp(x) log p = 0
    double sum = log_abs(x);
    for (auto& [p, e] : factor_integer(x.num() * x.den())) sum -= static_cast<double>(vp(x, p)) * log_abs(p);
    CHECK(std::fabs(sum) < 1e-9);
    Int m = static_cast<unsigned long>(rng() % 5000 + 1);
    for (unsigned long p : {2ul, 3ul, 7ul}) {
      CHECK(vp(n * m, Int(p)) == vp(n, Int(p)) + vp(m, Int(p)));
      CHECK(vp(n, Int(p)) == naive_vp(n, Int(p)));
    }
  }
}

TEST_CASE("ord_at examples and sum over places") {
  RatFunc f(P({0, 0, 1}), P({1, 1}));
  CHECK(ord_at(f, FfPlace::rational(0)) == 2);
  CHECK(ord_at(f, FfPlace::infinity()) == -1);
  CHECK(ord_at(f, FfPlace::rational(-1)) == -1);
  CHECK_THROWS_AS(ord_at(RatFunc(), FfPlace::rational(0)), Error);
  // (t^2+1)^3 (2t-3) / t^4 : degree-weighted sum of orders is zero
  Poly m = P({1, 0, 1});
  RatFunc g(pow(m, 3) * P({-3, 2}), P({0, 0, 0, 0, 1}));
  long s = ord_at(g, FfPlace::algebraic(to_primitive(m).z)) * 2 + ord_at(g, FfPlace::rational(Rat(3, 2))) +
           ord_at(g, FfPlace::rational(0)) + ord_at(g, FfPlace::infinity());
  CHECK(ord_at(g, FfPlace::algebraic(to_primitive(m).z)) == 3);
  CHECK(s == 0);
  // additivity
  RatFunc h(P({5, 0, 1}), P({0, 1}));
  for (auto pl : {FfPlace::rational(0), FfPlace::infinity(), FfPlace::algebraic(to_primitive(m).z)})
    CHECK(ord_at(g * h, pl) == ord_at(g, pl) + ord_at(h, pl));
}

TEST_CASE("complex_roots examples") {
  auto r = complex_roots(P({1, 0, 1}));
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - Cx(0, -1)) < 1e-12);
  CHECK(std::abs(r[1] - Cx(0, 1)) < 1e-12);
  auto r3 = complex_roots(P({-1, 3, -3, 1}));
  REQUIRE(r3.size() == 3);
  for (auto z : r3) CHECK(std::abs(z - 1.0) < 1e-4);
  CHECK_THROWS_AS(complex_roots(Poly()), Error);
}

TEST_CASE("complex_roots against companion oracle") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Int> c(11);
    std::vector<double> cd(11);
    for (int i = 0; i <= 10; ++i) {
      c[i] = static_cast<long>(std::llround(nd(rng) * 1000));
      if (i == 10 && c[i] == 0) c[i] = 1;
      if (i == 0 && c[i] == 0) c[i] = 1;
      cd[i] = c[i].get_d();
    }
    ZPoly f(c);
    auto got = complex_roots(f);
    auto want = eigen_companion(cd);
    REQUIRE(got.size() == want.size());
    for (auto z : want) {
      double best = 1e9;
      for (auto w : got) best = std::min(best, std::abs(z - w));
      CHECK(best < 10 * 1e-10 * std::max(1.0, std::abs(z)));
    }
    // root sum
    Cx s = 0;
    for (auto z : got) s += z;
    CHECK(std::abs(s + cd[9] / cd[10]) < 1e-8 * (1 + std::abs(cd[9] / cd[10])));
  }
}

TEST_CASE("parser") {
  CHECK(parse_ratfunc("2/t") == RatFunc(P({2}), P({0, 1})));
  CHECK(parse_ratfunc("t^2-1") == RatFunc(P({-1, 0, 1})));
  CHECK(parse_ratfunc("-(t+1)^2(27t+2)/t^7") ==
        RatFunc(-(pow(P({1, 1}), 2) * P({2, 27})), pow(P({0, 1}), 7)));
  CHECK(parse_ratfunc("-1/4") == RatFunc(Rat(-1, 4)));
  try {
    parse_ratfunc("t/(");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(e.position() == 3);
  }
}

TEST_CASE("rational roots and factoring") {
  auto rr = rational_roots(to_primitive(P({-2, 1}) * P({2, 27}) * P({1, 1}) * P({1, 1}) * P({1, 0, 1})).z);
  REQUIRE(rr.size() == 3);
  CHECK(rr[0].value == Rat(-1));
  CHECK(rr[0].multiplicity == 2);
  CHECK(rr[1].value == Rat(-2, 27));
  CHECK(rr[2].value == Rat(2));
  auto f = factor_integer(Int("1000000016000000063"));
  REQUIRE(f.size() == 2);
  CHECK(f[0].first * f[1].first == Int("1000000016000000063"));
  auto sq = squarefree_decomposition(to_primitive(pow(P({-1, 1}), 3) * P({2, 0, 1})).z);
  REQUIRE(sq.size() == 2);
  CHECK(sq[0].second == 1);
  CHECK(sq[1].second == 3);
  CHECK(resultant(ZPoly{-1, 0, 1}, ZPoly{-2, 1}) == 3);
}
