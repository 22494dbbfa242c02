#include "hauteur/numeric/gcd.hpp"

#include "hauteur/error.hpp"
#include "hauteur/numeric/modp.hpp"

namespace hauteur {

ZPoly subresultant_gcd(const ZPoly& a_in, const ZPoly& b_in) {
  ZPoly A = primitive_part(a_in), B = primitive_part(b_in);
  if (A.is_zero()) return B;
  if (B.is_zero()) return A;
  if (A.degree() < B.degree()) std::swap(A, B);
  Int g = 1, h = 1;
  while (true) {
    int delta = A.degree() - B.degree();
    ZPoly R = pseudo_remainder(A, B);
    if (R.is_zero()) return primitive_part(B);
    if (R.degree() == 0) return ZPoly::constant(1);
    A = std::move(B);
    Int hd;
    mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta));
    B = divexact(R, g * hd);
    g = A.lead();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      Int gd, hd1;
      mpz_pow_ui(gd.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
      mpz_pow_ui(hd1.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta - 1));
      mpz_divexact(h.get_mpz_t(), gd.get_mpz_t(), hd1.get_mpz_t());
    }
  }
}

namespace {

ZPoly symmetric_lift(const std::vector<Int>& h, const Int& M) {
  Int half = M / 2;
  std::vector<Int> c(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) c[i] = h[i] > half ? h[i] - M : h[i];
  return ZPoly(std::move(c));
}

bool divides_mod(const ZPoly& g, const ZPoly& a, std::size_t prime_index) {
  modp::u64 p = modp::large_prime(prime_index);
  if (mpz_fdiv_ui(g.lead().get_mpz_t(), p) == 0) return true;
  return modp::rem(modp::from_zpoly(a, p), modp::from_zpoly(g, p), p).empty();
}

}  // namespace

ZPoly modular_gcd(const ZPoly& a_in, const ZPoly& b_in) {
  ZPoly a = primitive_part(a_in), b = primitive_part(b_in);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.degree() == 0 || b.degree() == 0) return ZPoly::constant(1);
  Int glc;
  mpz_gcd(glc.get_mpz_t(), a.lead().get_mpz_t(), b.lead().get_mpz_t());
  int cur = std::min(a.degree(), b.degree()) + 1;
  std::vector<Int> H;
  Int M = 0;
  ZPoly last;
  for (std::size_t idx = 0; idx < 100000; ++idx) {
    modp::u64 p = modp::large_prime(idx);
    if (mpz_fdiv_ui(a.lead().get_mpz_t(), p) == 0 || mpz_fdiv_ui(b.lead().get_mpz_t(), p) == 0) continue;
    modp::Vec g = modp::gcd(modp::from_zpoly(a, p), modp::from_zpoly(b, p), p);
    int d = static_cast<int>(g.size()) - 1;
    if (d == 0) return ZPoly::constant(1);
    if (d > cur) continue;
    modp::u64 s = mpz_fdiv_ui(glc.get_mpz_t(), p);
    for (auto& x : g) x = modp::mulmod(x, s, p);
    if (d < cur) {
      cur = d;
      H.assign(g.size(), Int(0));
      for (std::size_t i = 0; i < g.size(); ++i) H[i] = static_cast<unsigned long>(g[i]);
      M = static_cast<unsigned long>(p);
      last = ZPoly();
      continue;
    }
    // CRT: x = H mod M, x = g mod p
    Int Mp = static_cast<unsigned long>(p);
    modp::u64 minv = modp::invmod(mpz_fdiv_ui(M.get_mpz_t(), p), p);
    for (std::size_t i = 0; i < H.size(); ++i) {
      modp::u64 hi = mpz_fdiv_ui(H[i].get_mpz_t(), p);
      modp::u64 diff = (g[i] + p - hi) % p;
      modp::u64 k = modp::mulmod(diff, minv, p);
      H[i] += M * static_cast<unsigned long>(k);
    }
    M *= Mp;
    ZPoly cand = primitive_part(symmetric_lift(H, M));
    if (cand == last) {
      bool ok = true;
      for (std::size_t j = 0; j < 3 && ok; ++j)
        ok = divides_mod(cand, a, idx + 1 + j) && divides_mod(cand, b, idx + 1 + j);
      if (ok && try_divexact(a, cand, nullptr) && try_divexact(b, cand, nullptr)) return cand;
    }
    last = std::move(cand);
  }
  throw Error(ErrorCode::Nonconvergence, "modular gcd did not stabilise");
}

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero() && b.is_zero()) throw Error(ErrorCode::DegenerateInput, "gcd of two zero polynomials");
  std::size_t deg = static_cast<std::size_t>(std::max(a.degree(), b.degree()));
  std::size_t bits = std::max(a.max_bits(), b.max_bits());
  if (deg <= 24 && bits <= 256) return subresultant_gcd(a, b);
  return modular_gcd(a, b);
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) throw Error(ErrorCode::DegenerateInput, "gcd of two zero polynomials");
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  return monic(Poly(gcd(to_primitive(a).z, to_primitive(b).z)));
}

Int resultant(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  const int m = a.degree(), n = b.degree();
  if (m == 0 && n == 0) return 1;
  const int N = m + n;
  std::vector<std::vector<Int>> S(static_cast<std::size_t>(N), std::vector<Int>(static_cast<std::size_t>(N)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= m; ++k) S[i][i + k] = a[static_cast<std::size_t>(m - k)];
  for (int i = 0; i < m; ++i)
    for (int k = 0; k <= n; ++k) S[n + i][i + k] = b[static_cast<std::size_t>(n - k)];
  // Bareiss fraction-free elimination
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < N - 1; ++k) {
    if (sgn(S[k][k]) == 0) {
      int piv = -1;
      for (int r = k + 1; r < N; ++r)
        if (sgn(S[r][k]) != 0) { piv = r; break; }
      if (piv < 0) return 0;
      std::swap(S[k], S[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i) {
      for (int j = k + 1; j < N; ++j) {
        Int v = S[i][j] * S[k][k] - S[i][k] * S[k][j];
        mpz_divexact(S[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      S[i][k] = 0;
    }
    prev = S[k][k];
  }
  Int det = S[N - 1][N - 1];
  return sign > 0 ? det : Int(-det);
}

Int discriminant(const ZPoly& a) {
  int n = a.degree();
  if (n < 1) throw Error(ErrorCode::Domain, "discriminant of a constant");
  Int r = resultant(a, derivative(a));
  Int q;
  mpz_divexact(q.get_mpz_t(), r.get_mpz_t(), a.lead().get_mpz_t());
  if ((n * (n - 1) / 2) % 2) q = -q;
  return q;
}

std::vector<std::pair<ZPoly, int>> squarefree_decomposition(const ZPoly& f_in) {
  std::vector<std::pair<ZPoly, int>> out;
  ZPoly f = primitive_part(f_in);
  if (f.degree() < 1) return out;
  // Yun's algorithm over Q with primitive representatives
  ZPoly fp = derivative(f);
  ZPoly a0 = gcd(f, fp);
  Poly A0(a0);
  Poly B = divrem(Poly(f), A0).first;
  Poly C = divrem(Poly(fp), A0).first;
  Poly D = C - derivative(B);
  int i = 1;
  while (B.degree() > 0) {
    Poly g = poly_gcd(B, D);
    if (g.degree() > 0) out.emplace_back(to_primitive(g).z, i);
    B = divrem(B, g).first;
    C = divrem(D, g).first;
    D = C - derivative(B);
    ++i;
  }
  return out;
}

}  // namespace hauteur
