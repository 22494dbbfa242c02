#include "hauteur/numeric/poly.hpp"

#include <sstream>

#include "hauteur/error.hpp"

namespace hauteur {

Poly::Poly(const ZPoly& z) {
  c_.reserve(z.size());
  for (const auto& v : z.coeffs()) c_.emplace_back(v);
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const Rat& v = c_[k];
    if (v.is_zero()) continue;
    Rat a = abs(v);
    if (first) { if (v.sign() < 0) os << "-"; }
    else os << (v.sign() < 0 ? " - " : " + ");
    first = false;
    bool unit = a == Rat(1);
    if (k == 0 || !unit) os << a.to_string();
    if (k > 0) {
      if (!unit) os << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rat> c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<Rat> c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
  return Poly(std::move(c));
}

Poly operator-(const Poly& a) {
  std::vector<Rat> c(a.coeffs());
  for (auto& x : c) x = -x;
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Rat& s) {
  std::vector<Rat> c(a.coeffs());
  for (auto& x : c) x *= s;
  return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.size() > 16 && b.size() > 16) {
    auto pa = to_primitive(a), pb = to_primitive(b);
    return Poly(mul(pa.z, pb.z)) * (pa.scale * pb.scale);
  }
  std::vector<Rat> c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return Poly(std::move(c));
}

Poly pow(const Poly& a, unsigned e) {
  Poly r = Poly::constant(1), base = a;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(ErrorCode::Domain, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<Rat> r(a.coeffs());
  std::vector<Rat> q(static_cast<std::size_t>(a.degree() - b.degree() + 1));
  Rat inv = Rat(1) / b.lead();
  const int db = b.degree();
  for (int k = a.degree() - db; k >= 0; --k) {
    Rat f = r[static_cast<std::size_t>(k + db)] * inv;
    q[static_cast<std::size_t>(k)] = f;
    if (f.is_zero()) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k + j)] -= f * b[static_cast<std::size_t>(j)];
  }
  r.resize(static_cast<std::size_t>(db));
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly monic(const Poly& a) {
  if (a.is_zero()) return a;
  return a * (Rat(1) / a.lead());
}

Poly derivative(const Poly& a) {
  if (a.size() <= 1) return {};
  std::vector<Rat> c(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) c[i - 1] = a[i] * Rat(static_cast<long>(i));
  return Poly(std::move(c));
}

Rat eval(const Poly& a, const Rat& x) {
  Rat acc = 0;
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * x + a[k];
  return acc;
}

Cx eval(const Poly& a, const Cx& z) {
  Cx acc = 0;
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * z + Cx(a[k].to_double(), 0.0);
  return acc;
}

ScaledZPoly to_primitive(const Poly& a) {
  if (a.is_zero()) return {ZPoly(), Rat(0)};
  Int L = 1;
  for (const auto& c : a.coeffs()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.den_ref().get_mpz_t());
  std::vector<Int> z(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) z[i] = a[i].num() * (L / a[i].den());
  ZPoly zp(std::move(z));
  Int g = content(zp);
  if (sgn(zp.lead()) < 0) g = -g;
  zp = divexact(zp, g);
  return {zp, Rat(g, L)};
}

}  // namespace hauteur
