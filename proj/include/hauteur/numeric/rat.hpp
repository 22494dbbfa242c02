#pragma once

#include <gmpxx.h>

#include <compare>
#include <complex>
#include <string>
#include <string_view>

namespace hauteur {

using Int = mpz_class;
using Cx = std::complex<double>;

// Exact rational, always in lowest terms with positive denominator.
class Rat {
 public:
  Rat() = default;
  Rat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(const Int& n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  Rat(const Int& n, const Int& d);
  explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  // Accepts "a", "a/b", "-a/b" and decimals such as "0.25" or "-1.5e-3".
  static Rat parse(std::string_view s);

  const mpq_class& value() const { return q_; }
  Int num() const { return q_.get_num(); }
  Int den() const { return q_.get_den(); }
  const mpz_class& num_ref() const { return q_.get_num(); }
  const mpz_class& den_ref() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const;
  std::string to_string() const { return q_.get_str(); }

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

Rat abs(const Rat& a);
Rat pow(const Rat& a, long e);

// natural log of |x| for big integers without overflow; x != 0.
double log_abs(const Int& x);
double log_abs(const Rat& x);

// Simplest rational (smallest denominator, then smallest |numerator|) in [lo, hi].
Rat simplest_in_interval(const Rat& lo, const Rat& hi);

}  // namespace hauteur
