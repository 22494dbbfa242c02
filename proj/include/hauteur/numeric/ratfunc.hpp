#pragma once

#include <optional>
#include <string>

#include "hauteur/numeric/poly.hpp"

namespace hauteur {

// num/den in Q(t) with gcd(num, den) = 1 and den monic.
class RatFunc {
 public:
  RatFunc() : num_(), den_(Poly::constant(1)) {}
  RatFunc(long v) : num_(Poly::constant(Rat(v))), den_(Poly::constant(1)) {}  // NOLINT
  RatFunc(const Rat& v) : num_(Poly::constant(v)), den_(Poly::constant(1)) {}  // NOLINT
  RatFunc(const Poly& p) : num_(p), den_(Poly::constant(1)) {}  // NOLINT
  RatFunc(const Poly& num, const Poly& den);

  static RatFunc t() { return RatFunc(Poly::x()); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  std::optional<Rat> constant_value() const;
  std::string to_string(const std::string& var = "t") const;

  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

 private:
  Poly num_, den_;
};

RatFunc normalize(const Poly& num, const Poly& den);
RatFunc operator+(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a);
RatFunc operator*(const RatFunc& a, const RatFunc& b);
RatFunc operator/(const RatFunc& a, const RatFunc& b);
RatFunc pow(const RatFunc& a, long e);

// Value at t0; throws Pole when the denominator vanishes.
Rat eval(const RatFunc& f, const Rat& t0);
Cx eval(const RatFunc& f, const Cx& z);

}  // namespace hauteur
