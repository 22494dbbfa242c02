#include "hauteur/numeric/valuation.hpp"

#include <cmath>

#include "hauteur/error.hpp"

namespace hauteur {

long vp(const Int& x, const Int& p) {
  if (sgn(x) == 0) throw Error(ErrorCode::Domain, "valuation of zero");
  if (p < 2) throw Error(ErrorCode::Domain, "valuation at a non-prime");
  Int r;
  return static_cast<long>(mpz_remove(r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long vp(const Rat& x, const Int& p) {
  if (x.is_zero()) throw Error(ErrorCode::Domain, "valuation of zero");
  return vp(x.num_ref(), p) - vp(x.den_ref(), p);
}

double log_abs_at(const Rat& x, const PlaceQ& v) {
  if (v.archimedean) return log_abs(x);
  return -static_cast<double>(vp(x, v.p)) * log_abs(v.p);
}

FfPlace FfPlace::rational(const Rat& v) {
  FfPlace g;
  g.kind = Kind::Rational;
  g.value = v;
  g.minpoly = ZPoly(std::vector<Int>{-v.num(), v.den()});
  return g;
}

FfPlace FfPlace::algebraic(const ZPoly& m) {
  ZPoly mp = primitive_part(m);
  if (mp.degree() < 1) throw Error(ErrorCode::Domain, "minimal polynomial of degree < 1");
  if (mp.degree() == 1) return rational(Rat(-mp[0], mp[1]));
  FfPlace g;
  g.kind = Kind::Algebraic;
  g.minpoly = mp;
  return g;
}

std::string FfPlace::to_string(const std::string& var) const {
  switch (kind) {
    case Kind::Rational: return value.to_string();
    case Kind::Algebraic: return minpoly.to_string(var);
    case Kind::Infinity: return "inf";
  }
  return "";
}

bool operator==(const FfPlace& a, const FfPlace& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == FfPlace::Kind::Rational) return a.value == b.value;
  if (a.kind == FfPlace::Kind::Algebraic) return a.minpoly == b.minpoly;
  return true;
}

bool operator<(const FfPlace& a, const FfPlace& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  if (a.kind == FfPlace::Kind::Rational) return a.value < b.value;
  if (a.kind == FfPlace::Kind::Algebraic) {
    if (a.minpoly.degree() != b.minpoly.degree()) return a.minpoly.degree() < b.minpoly.degree();
    for (std::size_t i = a.minpoly.size(); i-- > 0;)
      if (a.minpoly[i] != b.minpoly[i]) return a.minpoly[i] < b.minpoly[i];
  }
  return false;
}

long ord_at(const ZPoly& f, const FfPlace& g) {
  if (f.is_zero()) throw Error(ErrorCode::Domain, "order of the zero function");
  if (g.is_infinity()) return -f.degree();
  long k = 0;
  ZPoly cur = f, q;
  while (cur.degree() >= g.minpoly.degree() && try_divexact(primitive_part(cur), g.minpoly, &q)) {
    cur = q;
    ++k;
  }
  return k;
}

long ord_at(const Poly& f, const FfPlace& g) {
  if (f.is_zero()) throw Error(ErrorCode::Domain, "order of the zero function");
  return ord_at(to_primitive(f).z, g);
}

long ord_at(const RatFunc& f, const FfPlace& g) {
  if (f.is_zero()) throw Error(ErrorCode::Domain, "order of the zero function");
  return ord_at(f.num(), g) - ord_at(f.den(), g);
}

}  // namespace hauteur
