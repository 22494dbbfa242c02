#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hauteur/numeric/rat.hpp"

namespace hauteur {

// Dense polynomial with integer coefficients, lowest degree first, no trailing zeros.
class ZPoly {
 public:
  ZPoly() = default;
  explicit ZPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
  ZPoly(std::initializer_list<long> coeffs);
  explicit ZPoly(long v) : ZPoly(std::vector<Int>{Int(v)}) {}
  static ZPoly constant(const Int& v) { return ZPoly(std::vector<Int>{v}); }
  static ZPoly monomial(const Int& v, std::size_t deg);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }
  const Int& operator[](std::size_t i) const { return c_[i]; }
  Int coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }
  const Int& lead() const { return c_.back(); }
  const std::vector<Int>& coeffs() const { return c_; }
  std::vector<Int>& mutable_coeffs() { return c_; }
  void trim();

  // lowest index with nonzero coefficient; size() for the zero polynomial
  std::size_t low_order() const;
  std::size_t max_bits() const;
  std::string to_string(const std::string& var = "t") const;

  friend bool operator==(const ZPoly& a, const ZPoly& b) { return a.c_ == b.c_; }

 private:
  std::vector<Int> c_;
};

ZPoly operator+(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a);
ZPoly operator*(const ZPoly& a, const ZPoly& b);
ZPoly operator*(const ZPoly& a, const Int& s);
ZPoly& operator+=(ZPoly& a, const ZPoly& b);

ZPoly mul(const ZPoly& a, const ZPoly& b);
ZPoly sqr(const ZPoly& a);
// exact square root with positive leading coefficient, when a is a perfect square in Z[x]
bool try_sqrt(const ZPoly& a, ZPoly* root);
ZPoly pow(const ZPoly& a, unsigned e);
// product truncated mod x^n
ZPoly mul_trunc(const ZPoly& a, const ZPoly& b, std::size_t n);
ZPoly truncate(const ZPoly& a, std::size_t n);
ZPoly shift_down(const ZPoly& a, std::size_t k);  // a / x^k, low terms dropped
ZPoly shift_up(const ZPoly& a, std::size_t k);

Int content(const ZPoly& a);  // nonnegative gcd of coefficients
ZPoly divexact(const ZPoly& a, const Int& d);
ZPoly primitive_part(const ZPoly& a);  // positive leading coefficient
ZPoly derivative(const ZPoly& a);
ZPoly reverse(const ZPoly& a, std::size_t deg);  // x^deg a(1/x)

// pseudo-remainder lc(b)^(deg a - deg b + 1) a mod b
ZPoly pseudo_remainder(const ZPoly& a, const ZPoly& b);
// exact quotient a / b in Z[x]; throws if b does not divide a
ZPoly divexact(const ZPoly& a, const ZPoly& b);
// true and quotient when b | a in Z[x]
bool try_divexact(const ZPoly& a, const ZPoly& b, ZPoly* q);

// q^deg(a) * a(p/q) for q != 0, computed exactly
Int eval_homog(const ZPoly& a, const Int& p, const Int& q, int deg);
Int eval(const ZPoly& a, const Int& x);
Rat eval(const ZPoly& a, const Rat& x);
Cx eval(const ZPoly& a, const Cx& z);
// q^d a((s + p)/q) as a polynomial in s, with d = deg a
ZPoly substitute_affine(const ZPoly& a, const Int& p, const Int& q, int d);

}  // namespace hauteur
