#include "hauteur/numeric/zpoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hauteur/error.hpp"

namespace hauteur {

ZPoly::ZPoly(std::initializer_list<long> coeffs) {
  for (long v : coeffs) c_.emplace_back(v);
  trim();
}

ZPoly ZPoly::monomial(const Int& v, std::size_t deg) {
  std::vector<Int> c(deg + 1);
  c[deg] = v;
  return ZPoly(std::move(c));
}

void ZPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

std::size_t ZPoly::low_order() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (sgn(c_[i]) != 0) return i;
  return c_.size();
}

std::size_t ZPoly::max_bits() const {
  std::size_t m = 0;
  for (const auto& x : c_) m = std::max(m, mpz_sizeinbase(x.get_mpz_t(), 2));
  return m;
}

std::string ZPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const Int& v = c_[k];
    if (sgn(v) == 0) continue;
    Int a = abs(v);
    if (first) { if (sgn(v) < 0) os << "-"; }
    else os << (sgn(v) < 0 ? " - " : " + ");
    first = false;
    if (k == 0 || a != 1) os << a.get_str();
    if (k > 0) {
      if (a != 1) os << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

ZPoly operator+(const ZPoly& a, const ZPoly& b) {
  ZPoly r = a;
  return r += b;
}

ZPoly& operator+=(ZPoly& a, const ZPoly& b) {
  auto& c = a.mutable_coeffs();
  if (c.size() < b.size()) c.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  a.trim();
  return a;
}

ZPoly operator-(const ZPoly& a) {
  std::vector<Int> c(a.coeffs());
  for (auto& x : c) x = -x;
  return ZPoly(std::move(c));
}

ZPoly operator-(const ZPoly& a, const ZPoly& b) {
  std::vector<Int> c(a.coeffs());
  if (c.size() < b.size()) c.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
  return ZPoly(std::move(c));
}

ZPoly operator*(const ZPoly& a, const Int& s) {
  if (sgn(s) == 0) return {};
  std::vector<Int> c(a.coeffs());
  for (auto& x : c) x *= s;
  return ZPoly(std::move(c));
}

ZPoly operator*(const ZPoly& a, const ZPoly& b) { return mul(a, b); }

namespace {

constexpr unsigned kLimbBits = GMP_NUMB_BITS;

// OR |v| << offset into limb array (the target bit range must be zero)
void or_shifted(std::vector<mp_limb_t>& dst, std::size_t offset, const mpz_t v) {
  std::size_t n = mpz_size(v);
  if (n == 0) return;
  const mp_limb_t* src = mpz_limbs_read(v);
  std::size_t L = offset / kLimbBits;
  unsigned s = offset % kLimbBits;
  if (s == 0) {
    for (std::size_t j = 0; j < n; ++j) dst[L + j] |= src[j];
  } else {
    mp_limb_t carry = 0;
    for (std::size_t j = 0; j < n; ++j) {
      dst[L + j] |= (src[j] << s) | carry;
      carry = src[j] >> (kLimbBits - s);
    }
    if (carry) dst[L + n] |= carry;
  }
}

void limbs_to_mpz(mpz_t z, const std::vector<mp_limb_t>& limbs) {
  std::size_t n = limbs.size();
  while (n > 0 && limbs[n - 1] == 0) --n;
  if (n == 0) { mpz_set_ui(z, 0); return; }
  mp_limb_t* w = mpz_limbs_write(z, static_cast<mp_size_t>(n));
  std::copy(limbs.begin(), limbs.begin() + static_cast<std::ptrdiff_t>(n), w);
  mpz_limbs_finish(z, static_cast<mp_size_t>(n));
}

// Evaluate a at 2^bits with signed coefficients.
Int pack(const ZPoly& a, std::size_t bits) {
  std::size_t total = a.size() * bits + 2 * kLimbBits;
  std::size_t nl = total / kLimbBits + 1;
  std::vector<mp_limb_t> pos(nl, 0), neg(nl, 0);
  bool any_neg = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Int& c = a[i];
    int s = sgn(c);
    if (s == 0) continue;
    if (s > 0) or_shifted(pos, i * bits, c.get_mpz_t());
    else { or_shifted(neg, i * bits, c.get_mpz_t()); any_neg = true; }
  }
  Int P, N;
  limbs_to_mpz(P.get_mpz_t(), pos);
  if (any_neg) {
    limbs_to_mpz(N.get_mpz_t(), neg);
    P -= N;
  }
  return P;
}

void extract_bits(mpz_t out, const mp_limb_t* limbs, std::size_t nlimbs, std::size_t offset,
                  std::size_t bits) {
  std::size_t L = offset / kLimbBits;
  unsigned s = offset % kLimbBits;
  std::size_t outl = (bits + kLimbBits - 1) / kLimbBits;
  if (L >= nlimbs) { mpz_set_ui(out, 0); return; }
  mp_limb_t* w = mpz_limbs_write(out, static_cast<mp_size_t>(outl));
  for (std::size_t j = 0; j < outl; ++j) {
    mp_limb_t lo = (L + j < nlimbs) ? limbs[L + j] : 0;
    mp_limb_t hi = (L + j + 1 < nlimbs) ? limbs[L + j + 1] : 0;
    w[j] = s == 0 ? lo : ((lo >> s) | (hi << (kLimbBits - s)));
  }
  unsigned top = bits % kLimbBits;
  if (top) w[outl - 1] &= (mp_limb_t(1) << top) - 1;
  mpz_limbs_finish(out, static_cast<mp_size_t>(outl));
}

// Inverse of pack for balanced digits in (-2^(bits-1), 2^(bits-1)).
ZPoly unpack(const Int& V, std::size_t bits, std::size_t count) {
  std::vector<Int> c(count);
  int sign = sgn(V);
  if (sign == 0) return {};
  Int absV = abs(V);
  const mp_limb_t* limbs = mpz_limbs_read(absV.get_mpz_t());
  std::size_t nl = mpz_size(absV.get_mpz_t());
  bool carry = false;
  Int full;
  mpz_setbit(full.get_mpz_t(), bits);
  for (std::size_t i = 0; i < count; ++i) {
    Int& d = c[i];
    extract_bits(d.get_mpz_t(), limbs, nl, i * bits, bits);
    if (carry) d += 1;
    if (sgn(d) > 0 && mpz_sizeinbase(d.get_mpz_t(), 2) >= bits) {
      d -= full;
      carry = true;
    } else {
      carry = false;
    }
    if (sign < 0) d = -d;
  }
  return ZPoly(std::move(c));
}

std::size_t ceil_log2(std::size_t n) {
  std::size_t b = 0;
  while ((std::size_t(1) << b) < n) ++b;
  return b;
}

ZPoly schoolbook(const ZPoly& a, const ZPoly& b) {
  std::vector<Int> c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return ZPoly(std::move(c));
}

}  // namespace

ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::size_t m = std::min(a.size(), b.size());
  if (m <= 12) return schoolbook(a, b);
  std::size_t bits = a.max_bits() + b.max_bits() + ceil_log2(m) + 2;
  Int pa = pack(a, bits);
  Int prod;
  if (&a == &b) prod = pa * pa;
  else prod = pa * pack(b, bits);
  return unpack(prod, bits, a.size() + b.size() - 1);
}

ZPoly sqr(const ZPoly& a) { return mul(a, a); }

bool try_sqrt(const ZPoly& a, ZPoly* root) {
  if (a.is_zero() || sgn(a.lead()) < 0 || a.degree() % 2 != 0) return false;
  const std::size_t half = static_cast<std::size_t>(a.degree() / 2);
  for (std::size_t bits = a.max_bits() / 2 + ceil_log2(a.size()) + 32; bits <= 4 * a.max_bits() + 256; bits *= 2) {
    // a(2^bits) from even and odd parts spaced 2 * bits apart, so the packed digits do not overlap
    std::vector<Int> even, odd;
    for (std::size_t i = 0; i < a.size(); ++i) (i % 2 ? odd : even).push_back(a[i]);
    Int V = pack(ZPoly(even), 2 * bits);
    if (!odd.empty()) {
      Int W = pack(ZPoly(odd), 2 * bits);
      mpz_mul_2exp(W.get_mpz_t(), W.get_mpz_t(), bits);
      V += W;
    }
    if (sgn(V) <= 0) return false;
    Int r, rem;
    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), V.get_mpz_t());
    if (sgn(rem) != 0) return false;
    ZPoly s = unpack(r, bits, half + 1);
    if (s.degree() == static_cast<int>(half) && sqr(s) == a) {
      if (root) *root = std::move(s);
      return true;
    }
  }
  return false;
}

ZPoly pow(const ZPoly& a, unsigned e) {
  ZPoly r = ZPoly::constant(1), base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    e >>= 1;
    if (e) base = sqr(base);
  }
  return r;
}

ZPoly truncate(const ZPoly& a, std::size_t n) {
  if (a.size() <= n) return a;
  return ZPoly(std::vector<Int>(a.coeffs().begin(), a.coeffs().begin() + static_cast<std::ptrdiff_t>(n)));
}

ZPoly mul_trunc(const ZPoly& a, const ZPoly& b, std::size_t n) {
  return truncate(mul(truncate(a, n), truncate(b, n)), n);
}

ZPoly shift_down(const ZPoly& a, std::size_t k) {
  if (k == 0) return a;
  if (a.size() <= k) return {};
  return ZPoly(std::vector<Int>(a.coeffs().begin() + static_cast<std::ptrdiff_t>(k), a.coeffs().end()));
}

ZPoly shift_up(const ZPoly& a, std::size_t k) {
  if (a.is_zero() || k == 0) return a;
  std::vector<Int> c(k);
  c.insert(c.end(), a.coeffs().begin(), a.coeffs().end());
  return ZPoly(std::move(c));
}

Int content(const ZPoly& a) {
  Int g = 0;
  for (const auto& x : a.coeffs()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

ZPoly divexact(const ZPoly& a, const Int& d) {
  std::vector<Int> c(a.coeffs());
  for (auto& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  return ZPoly(std::move(c));
}

ZPoly primitive_part(const ZPoly& a) {
  if (a.is_zero()) return a;
  Int g = content(a);
  if (sgn(a.lead()) < 0) g = -g;
  if (g == 1) return a;
  return divexact(a, g);
}

ZPoly derivative(const ZPoly& a) {
  if (a.size() <= 1) return {};
  std::vector<Int> c(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) c[i - 1] = a[i] * static_cast<unsigned long>(i);
  return ZPoly(std::move(c));
}

ZPoly reverse(const ZPoly& a, std::size_t deg) {
  std::vector<Int> c(deg + 1);
  for (std::size_t i = 0; i < a.size() && i <= deg; ++i) c[deg - i] = a[i];
  return ZPoly(std::move(c));
}

ZPoly pseudo_remainder(const ZPoly& a, const ZPoly& b) {
  if (b.is_zero()) throw Error(ErrorCode::Domain, "pseudo-remainder by zero");
  if (a.degree() < b.degree()) return a;
  std::vector<Int> r(a.coeffs());
  const int db = b.degree();
  const Int& lb = b.lead();
  int e = a.degree() - db + 1;
  int top = a.degree();
  while (top >= db) {
    Int lr = r[static_cast<std::size_t>(top)];
    // r = lb * r - lr * x^(top-db) * b
    for (int i = 0; i <= top; ++i) r[static_cast<std::size_t>(i)] *= lb;
    if (sgn(lr) != 0)
      for (int j = 0; j <= db; ++j) mpz_submul(r[static_cast<std::size_t>(top - db + j)].get_mpz_t(), lr.get_mpz_t(), b[static_cast<std::size_t>(j)].get_mpz_t());
    --e;
    --top;
    while (top >= db && sgn(r[static_cast<std::size_t>(top)]) == 0) {
      for (int i = 0; i <= top; ++i) r[static_cast<std::size_t>(i)] *= lb;
      --e;
      --top;
    }
  }
  r.resize(static_cast<std::size_t>(std::max(top + 1, 0)));
  ZPoly rem(std::move(r));
  if (e > 0) {
    Int f;
    mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
    rem = rem * f;
  }
  return rem;
}

bool try_divexact(const ZPoly& a, const ZPoly& b, ZPoly* q) {
  if (b.is_zero()) throw Error(ErrorCode::Domain, "division by zero polynomial");
  if (a.is_zero()) { if (q) *q = {}; return true; }
  if (a.degree() < b.degree()) return false;
  std::vector<Int> r(a.coeffs());
  const int db = b.degree();
  const Int& lb = b.lead();
  std::vector<Int> qc(static_cast<std::size_t>(a.degree() - db + 1));
  Int t;
  for (int k = a.degree() - db; k >= 0; --k) {
    Int& top = r[static_cast<std::size_t>(k + db)];
    if (sgn(top) == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return false;
    mpz_divexact(t.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    for (int j = 0; j <= db; ++j) mpz_submul(r[static_cast<std::size_t>(k + j)].get_mpz_t(), t.get_mpz_t(), b[static_cast<std::size_t>(j)].get_mpz_t());
    qc[static_cast<std::size_t>(k)] = t;
  }
  for (int i = 0; i < db; ++i)
    if (sgn(r[static_cast<std::size_t>(i)]) != 0) return false;
  if (q) *q = ZPoly(std::move(qc));
  return true;
}

ZPoly divexact(const ZPoly& a, const ZPoly& b) {
  ZPoly q;
  if (!try_divexact(a, b, &q)) throw Error(ErrorCode::Domain, "inexact polynomial division");
  return q;
}

Int eval_homog(const ZPoly& a, const Int& p, const Int& q, int deg) {
  // sum a_i p^i q^(deg-i)
  Int acc = 0, qpow = 1;
  // Horner in p with q powers: acc = (...((a_n) p + a_{n-1} q) p + ...) then times q^(deg-n)
  if (a.is_zero()) return 0;
  int n = a.degree();
  acc = a[static_cast<std::size_t>(n)];
  for (int i = n - 1; i >= 0; --i) {
    acc *= p;
    qpow *= q;
    acc += a[static_cast<std::size_t>(i)] * qpow;
  }
  if (deg > n) {
    Int extra;
    mpz_pow_ui(extra.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(deg - n));
    acc *= extra;
  }
  return acc;
}

Int eval(const ZPoly& a, const Int& x) {
  Int acc = 0;
  for (std::size_t k = a.size(); k-- > 0;) { acc *= x; acc += a[k]; }
  return acc;
}

Rat eval(const ZPoly& a, const Rat& x) {
  if (a.is_zero()) return Rat(0);
  return Rat(eval_homog(a, x.num(), x.den(), a.degree()), [&] {
    Int d;
    mpz_pow_ui(d.get_mpz_t(), x.den_ref().get_mpz_t(), static_cast<unsigned long>(a.degree()));
    return d;
  }());
}

Cx eval(const ZPoly& a, const Cx& z) {
  Cx acc = 0;
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * z + Cx(Rat(a[k]).to_double(), 0.0);
  return acc;
}

ZPoly substitute_affine(const ZPoly& a, const Int& p, const Int& q, int d) {
  // Horner with the linear polynomial (s + p) and scaling by q
  if (a.is_zero()) return a;
  int n = a.degree();
  ZPoly lin(std::vector<Int>{p, Int(1)});
  ZPoly acc = ZPoly::constant(a[static_cast<std::size_t>(n)]);
  Int qpow = 1;
  for (int i = n - 1; i >= 0; --i) {
    qpow *= q;
    acc = mul(acc, lin) + ZPoly::constant(a[static_cast<std::size_t>(i)] * qpow);
  }
  if (d > n) {
    Int extra;
    mpz_pow_ui(extra.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(d - n));
    acc = acc * extra;
  }
  return acc;
}

}  // namespace hauteur
