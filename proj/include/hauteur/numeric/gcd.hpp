#pragma once

#include <utility>
#include <vector>

#include "hauteur/numeric/poly.hpp"
#include "hauteur/numeric/zpoly.hpp"

namespace hauteur {

// gcd of the primitive parts, primitive with positive leading coefficient.
ZPoly gcd(const ZPoly& a, const ZPoly& b);
ZPoly subresultant_gcd(const ZPoly& a, const ZPoly& b);
ZPoly modular_gcd(const ZPoly& a, const ZPoly& b);

// Monic gcd over Q. Both arguments zero is a degenerate input.
Poly poly_gcd(const Poly& a, const Poly& b);

Int resultant(const ZPoly& a, const ZPoly& b);
Int discriminant(const ZPoly& a);

// f = c * prod g_i^i with g_i primitive, squarefree and pairwise coprime
std::vector<std::pair<ZPoly, int>> squarefree_decomposition(const ZPoly& f);

}  // namespace hauteur
