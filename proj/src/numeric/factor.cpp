#include "hauteur/numeric/factor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hauteur/error.hpp"
#include "hauteur/numeric/modp.hpp"
#include "hauteur/numeric/roots.hpp"

namespace hauteur {

bool is_probable_prime(const Int& n) { return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

std::vector<unsigned long> primes_up_to(unsigned long bound) {
  std::vector<char> sieve(bound + 1, 1);
  std::vector<unsigned long> out;
  for (unsigned long i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (unsigned long j = i * i; j <= bound; j += i) sieve[j] = 0;
  }
  return out;
}

namespace {

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
Int rho(const Int& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 1000; ++c) {
    Int y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, m = 128;
    auto f = [&](const Int& v) { Int w = v * v + c; mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t()); return w; };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Int d = abs(x - y);
          q *= d;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
      if (r > (1ul << 26)) break;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Int d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  throw Error(ErrorCode::Resource, "integer factorisation failed for " + n.get_str());
}

void factor_rec(const Int& n, std::map<Int, int>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) { out[n]++; return; }
  Int d = rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<Int, int>> factor_integer(const Int& n_in) {
  if (n_in == 0) throw Error(ErrorCode::Domain, "factorisation of zero");
  Int n = abs(n_in);
  std::map<Int, int> out;
  static const std::vector<unsigned long> small = primes_up_to(100000);
  for (unsigned long p : small) {
    if (n == 1) break;
    if (Int(p) * Int(p) > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      out[Int(p)]++;
    }
  }
  if (n > 1) factor_rec(n, out);
  return {out.begin(), out.end()};
}

std::vector<Int> prime_divisors(const Int& n) {
  std::vector<Int> out;
  for (auto& [p, e] : factor_integer(n)) out.push_back(p);
  return out;
}

namespace {

const modp::u64 kScreenPrime = modp::large_prime(5);

// q^n f(p/q) mod a large prime; a nonzero value rules the candidate out
bool vanishes_mod(const modp::Vec& fp, const Rat& x) {
  if (fp.empty()) return true;
  const modp::u64 P = kScreenPrime;
  modp::u64 p = modp::reduce(x.num_ref(), P), q = modp::reduce(x.den_ref(), P);
  modp::u64 acc = 0;
  for (std::size_t i = fp.size(); i-- > 0;) acc = (modp::mulmod(acc, p, P) + modp::mulmod(fp[i], modp::powmod(q, fp.size() - 1 - i, P), P)) % P;
  return acc == 0;
}

}  // namespace

std::vector<RationalRoot> certify_rational_roots(const ZPoly& f_in, const std::vector<Cx>& approx, const Int& max_den) {
  std::vector<RationalRoot> found;
  ZPoly f = primitive_part(f_in);
  if (f.degree() < 1) return found;
  const Int& lc = f.lead();
  modp::Vec fp = modp::from_zpoly(f, kScreenPrime);
  if (fp.size() != f.size()) fp.clear();  // leading coefficient vanishes mod the prime
  auto already = [&](const Rat& v) {
    return std::any_of(found.begin(), found.end(), [&](const RationalRoot& r) { return r.value == v; });
  };
  for (const Cx& z : approx) {
    if (std::fabs(z.imag()) > 1e-3 * (1.0 + std::abs(z))) continue;
    double x = z.real();
    if (!std::isfinite(x) || std::fabs(x) > 1e15) continue;
    // continued-fraction convergents of x
    Int h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double rem = x;
    for (int step = 0; step < 40; ++step) {
      double a = std::floor(rem);
      Int ai(a);
      Int h2 = ai * h1 + h0, k2 = ai * k1 + k0;
      h0 = h1; h1 = h2; k0 = k1; k1 = k2;
      if (k1 > max_den) break;
      Rat cand(h1, k1);
      if (std::fabs(cand.to_double() - x) <= 1e-3 * (1.0 + std::fabs(x)) &&
          mpz_divisible_p(lc.get_mpz_t(), cand.den_ref().get_mpz_t()) && !already(cand) && vanishes_mod(fp, cand)) {
        ZPoly lin(std::vector<Int>{-cand.num(), cand.den()});
        ZPoly q, cur = f;
        int mult = 0;
        while (try_divexact(cur, lin, &q)) { cur = q; ++mult; }
        if (mult > 0) { found.push_back({cand, mult}); break; }
      }
      double frac = rem - a;
      if (std::fabs(frac) < 1e-12) break;
      rem = 1.0 / frac;
    }
  }
  std::sort(found.begin(), found.end(), [](const RationalRoot& a, const RationalRoot& b) { return a.value < b.value; });
  return found;
}

std::vector<RationalRoot> rational_roots(const ZPoly& f) {
  ZPoly g = primitive_part(f);
  if (g.degree() < 1) return {};
  std::vector<RationalRoot> out;
  std::size_t z = g.low_order();
  if (z > 0) { out.push_back({Rat(0), static_cast<int>(z)}); g = shift_down(g, z); }
  if (g.degree() >= 1) {
    auto rest = certify_rational_roots(g, complex_roots(g, 1e-10), abs(g.lead()) + 1);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  std::sort(out.begin(), out.end(), [](const RationalRoot& a, const RationalRoot& b) { return a.value < b.value; });
  return out;
}

bool certify_irreducible(const ZPoly& m) {
  if (m.degree() <= 3) return true;  // callers strip rational roots first
  for (unsigned long p : primes_up_to(400)) {
    if (mpz_divisible_ui_p(m.lead().get_mpz_t(), p)) continue;
    modp::Vec f = modp::from_zpoly(m, p);
    if (modp::gcd(f, modp::derivative(f, p), p).size() > 1) continue;
    if (modp::irreducible_mod_p(f, p)) return true;
  }
  return false;
}

}  // namespace hauteur
