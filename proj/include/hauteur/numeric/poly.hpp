#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hauteur/numeric/rat.hpp"
#include "hauteur/numeric/zpoly.hpp"

namespace hauteur {

// Polynomial over Q, lowest degree first; the empty vector is zero.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<Rat> coeffs) : c_(coeffs) { trim(); }
  static Poly constant(const Rat& v) { return Poly(std::vector<Rat>{v}); }
  static Poly x() { return Poly{Rat(0), Rat(1)}; }
  explicit Poly(const ZPoly& z);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }
  const Rat& operator[](std::size_t i) const { return c_[i]; }
  Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
  const Rat& lead() const { return c_.back(); }
  const std::vector<Rat>& coeffs() const { return c_; }
  std::string to_string(const std::string& var = "t") const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<Rat> c_;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator-(const Poly& a);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Rat& s);
Poly pow(const Poly& a, unsigned e);
std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b);
Poly monic(const Poly& a);
Poly derivative(const Poly& a);
Rat eval(const Poly& a, const Rat& x);
Cx eval(const Poly& a, const Cx& z);

// a = scale * z with z primitive in Z[x] and positive leading coefficient
struct ScaledZPoly {
  ZPoly z;
  Rat scale;
};
ScaledZPoly to_primitive(const Poly& a);

}  // namespace hauteur
