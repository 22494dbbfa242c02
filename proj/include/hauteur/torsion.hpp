#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hauteur/heights_ff.hpp"

namespace hauteur {

struct TorsionRoot {
  Cx value;
  int level = 0;  // exact order 2^level
  int multiplicity = 1;
  std::optional<Rat> rational;  // certified exactly
};

struct TorsionSet {
  int n = 0;
  ZPoly poly;        // parameters of order dividing 2^n
  ZPoly exact_poly;  // parameters of exact order 2^n
  std::vector<TorsionRoot> roots;  // all levels 0..n, one entry per distinct root
  std::string diagnostic;          // nonempty when root finding failed somewhere

  std::vector<Cx> root_multiset() const;  // repeated by multiplicity
  std::vector<TorsionRoot> exact_order_roots() const;
  std::size_t count(bool with_multiplicity) const;
};

// Exact-order pieces E_0..E_n; E_k vanishes where P_t has order exactly 2^k.
std::vector<ZPoly> torsion_levels(const SurfacePoint& P, int n, int cap = 10);

ZPoly torsion_polynomial(const SurfacePoint& P, int n, int cap = 10);
TorsionSet torsion_parameters(const SurfacePoint& P, int n, double tol = 1e-10, int cap = 10);

struct CommonTorsion {
  int n = 0;
  ZPoly gcd;
  std::vector<Cx> roots;
};
// Levels n <= n_max where the two torsion polynomials share a factor.
std::vector<CommonTorsion> common_torsion(const SurfacePoint& P1, const SurfacePoint& P2, int n_max, double tol = 1e-10);

// n, re, im, exact_order_flag, multiplicity, rational_certified_flag
std::string torsion_csv(const TorsionSet& ts);

}  // namespace hauteur
