#pragma once

#include <string>

#include "hauteur/numeric/ratfunc.hpp"

namespace hauteur {

// A place of Q.
struct PlaceQ {
  bool archimedean = true;
  Int p = 0;

  static PlaceQ arch() { return {}; }
  static PlaceQ finite(const Int& prime) { return {false, prime}; }
  std::string to_string() const { return archimedean ? std::string("inf") : p.get_str(); }
  friend bool operator==(const PlaceQ& a, const PlaceQ& b) { return a.archimedean == b.archimedean && a.p == b.p; }
};

// p-adic valuation; zero input is a domain error.
long vp(const Int& x, const Int& p);
long vp(const Rat& x, const Int& p);
// log |x|_p as a multiple of log p is -vp(x); archimedean log |x| as a double
double log_abs_at(const Rat& x, const PlaceQ& v);

// A place of Q(t): a rational point, a Galois orbit given by its minimal polynomial, or infinity.
struct FfPlace {
  enum class Kind { Rational, Algebraic, Infinity };
  Kind kind = Kind::Infinity;
  Rat value;       // Rational
  ZPoly minpoly;   // primitive, positive leading coefficient; for Rational it is q t - p

  static FfPlace infinity() { return {}; }
  static FfPlace rational(const Rat& v);
  static FfPlace algebraic(const ZPoly& m);  // degree 1 input becomes Rational
  int degree() const { return kind == Kind::Algebraic ? minpoly.degree() : 1; }
  bool is_infinity() const { return kind == Kind::Infinity; }
  std::string to_string(const std::string& var = "t") const;
  friend bool operator==(const FfPlace& a, const FfPlace& b);
};
// canonical order: rational by value, then algebraic by degree and coefficients, infinity last
bool operator<(const FfPlace& a, const FfPlace& b);

long ord_at(const ZPoly& f, const FfPlace& g);
long ord_at(const Poly& f, const FfPlace& g);
long ord_at(const RatFunc& f, const FfPlace& g);

}  // namespace hauteur
