#include "hauteur/numeric/modp.hpp"

#include <mutex>

#include "hauteur/error.hpp"

namespace hauteur::modp {

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) {
  if (a % p == 0) throw Error(ErrorCode::Domain, "inverse of zero mod p");
  return powmod(a, p - 2, p);
}

u64 reduce(const Int& x, u64 p) {
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), p);
  return r.get_ui();
}

void trim(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Vec from_zpoly(const ZPoly& a, u64 p) {
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = mpz_fdiv_ui(a[i].get_mpz_t(), p);
  trim(v);
  return v;
}

Vec mul(const Vec& a, const Vec& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Vec c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      c[i + j] += mulmod(a[i], b[j], p);
      if (c[i + j] >= p) c[i + j] -= p;
    }
  }
  trim(c);
  return c;
}

Vec rem(const Vec& a, const Vec& b, u64 p) {
  if (b.empty()) throw Error(ErrorCode::Domain, "remainder by zero mod p");
  Vec r = a;
  trim(r);
  if (r.size() < b.size()) return r;
  u64 inv = invmod(b.back(), p);
  std::size_t db = b.size() - 1;
  for (std::size_t k = r.size(); k-- > db;) {
    u64 f = mulmod(r[k], inv, p);
    if (!f) continue;
    for (std::size_t j = 0; j <= db; ++j) {
      u64 t = mulmod(f, b[j], p);
      u64& x = r[k - db + j];
      x = x >= t ? x - t : x + p - t;
    }
  }
  r.resize(db);
  trim(r);
  return r;
}

Vec mulmod_poly(const Vec& a, const Vec& b, const Vec& m, u64 p) { return rem(mul(a, b, p), m, p); }

Vec make_monic(Vec a, u64 p) {
  trim(a);
  if (a.empty()) return a;
  u64 inv = invmod(a.back(), p);
  for (auto& x : a) x = mulmod(x, inv, p);
  return a;
}

Vec gcd(Vec a, Vec b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Vec r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), p);
}

Vec derivative(const Vec& a, u64 p) {
  if (a.size() <= 1) return {};
  Vec d(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = mulmod(a[i], i % p, p);
  trim(d);
  return d;
}

u64 large_prime(std::size_t index) {
  static std::mutex mu;
  static std::vector<u64> cache;
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= index) {
    u64 start = cache.empty() ? (u64(1) << 61) - 1 : cache.back() - 2;
    Int c(static_cast<unsigned long>(start));
    while (mpz_probab_prime_p(c.get_mpz_t(), 30) == 0) c -= 2;
    cache.push_back(c.get_ui());
  }
  return cache[index];
}

bool irreducible_mod_p(const Vec& f_in, u64 p) {
  Vec f = make_monic(f_in, p);
  std::size_t d = f.size() - 1;
  if (d <= 1) return d == 1;
  Vec x{0, 1};
  Vec xp = x;
  for (std::size_t i = 1; i <= d / 2; ++i) {
    // xp = xp^p mod f
    Vec base = xp, r{1};
    u64 e = p;
    while (e) {
      if (e & 1) r = mulmod_poly(r, base, f, p);
      base = mulmod_poly(base, base, f, p);
      e >>= 1;
    }
    xp = r;
    Vec diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    Vec g = gcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace hauteur::modp
