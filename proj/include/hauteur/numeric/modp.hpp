#pragma once

#include <cstdint>
#include <vector>

#include "hauteur/numeric/zpoly.hpp"

namespace hauteur::modp {

using u64 = std::uint64_t;
using Vec = std::vector<u64>;  // lowest degree first, trimmed

inline u64 mulmod(u64 a, u64 b, u64 p) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p);
}
u64 powmod(u64 a, u64 e, u64 p);
u64 invmod(u64 a, u64 p);
u64 reduce(const Int& x, u64 p);

Vec from_zpoly(const ZPoly& a, u64 p);
void trim(Vec& a);
Vec mul(const Vec& a, const Vec& b, u64 p);
Vec rem(const Vec& a, const Vec& b, u64 p);
Vec mulmod_poly(const Vec& a, const Vec& b, const Vec& m, u64 p);
Vec gcd(Vec a, Vec b, u64 p);  // monic
Vec make_monic(Vec a, u64 p);
Vec derivative(const Vec& a, u64 p);

// Deterministic list of primes below 2^61, largest first.
u64 large_prime(std::size_t index);

// True when f (degree >= 1) is irreducible over F_p (f squarefree mod p assumed).
bool irreducible_mod_p(const Vec& f, u64 p);

}  // namespace hauteur::modp
