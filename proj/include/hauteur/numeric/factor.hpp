#pragma once

#include <utility>
#include <vector>

#include "hauteur/numeric/zpoly.hpp"

namespace hauteur {

bool is_probable_prime(const Int& n);
// prime factorisation of |n| (n != 0), ascending
std::vector<std::pair<Int, int>> factor_integer(const Int& n);
std::vector<Int> prime_divisors(const Int& n);
std::vector<unsigned long> primes_up_to(unsigned long bound);

struct RationalRoot {
  Rat value;
  int multiplicity = 1;
};
// Exact rational roots of f, found by rounding the given approximations through their
// continued-fraction convergents and certifying each candidate by exact evaluation.
std::vector<RationalRoot> certify_rational_roots(const ZPoly& f, const std::vector<Cx>& approx,
                                                 const Int& max_den = Int(1000000));
// Rational roots via numerically computed roots of f
std::vector<RationalRoot> rational_roots(const ZPoly& f);

// Irreducibility over Q for a squarefree f without rational roots, certified by an
// irreducible reduction mod a small prime; false means "not certified".
bool certify_irreducible(const ZPoly& f);

}  // namespace hauteur
