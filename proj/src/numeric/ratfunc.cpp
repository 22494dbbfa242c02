#include "hauteur/numeric/ratfunc.hpp"

#include "hauteur/error.hpp"
#include "hauteur/numeric/gcd.hpp"

namespace hauteur {

RatFunc normalize(const Poly& num, const Poly& den) { return RatFunc(num, den); }

RatFunc::RatFunc(const Poly& num, const Poly& den) : num_(num), den_(den) {
  if (den_.is_zero()) throw Error(ErrorCode::Domain, "rational function with zero denominator");
  if (num_.is_zero()) { den_ = Poly::constant(1); return; }
  if (!(den_.lead() == Rat(1))) {
    Rat inv = Rat(1) / den_.lead();
    num_ = num_ * inv;
    den_ = den_ * inv;
  }
  if (den_.degree() > 0 && num_.degree() > 0) {
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = divrem(num_, g).first;
      den_ = divrem(den_, g).first;
    }
  }
}

std::optional<Rat> RatFunc::constant_value() const {
  if (!is_constant()) return std::nullopt;
  return num_.coeff(0);
}

std::string RatFunc::to_string(const std::string& var) const {
  if (den_.degree() == 0) return num_.to_string(var);
  return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den() == b.den()) return RatFunc(a.num() + b.num(), a.den());
  return RatFunc(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num(), a.den()); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num() * b.num(), a.den() * b.den());
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw Error(ErrorCode::Domain, "division by the zero rational function");
  return RatFunc(a.num() * b.den(), a.den() * b.num());
}

RatFunc pow(const RatFunc& a, long e) {
  if (e < 0) return pow(RatFunc(1) / a, -e);
  auto u = static_cast<unsigned>(e);
  return RatFunc(pow(a.num(), u), pow(a.den(), u));
}

Rat eval(const RatFunc& f, const Rat& t0) {
  Rat d = eval(f.den(), t0);
  if (d.is_zero()) throw Error(ErrorCode::Pole, "pole at t = " + t0.to_string());
  return eval(f.num(), t0) / d;
}

Cx eval(const RatFunc& f, const Cx& z) { return eval(f.num(), z) / eval(f.den(), z); }

}  // namespace hauteur
