#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hauteur/weierstrass.hpp"

namespace hauteur {

// Coprime polynomial pair (A, B) with x = A / B on the cleared model; B = 0 is the zero section.
struct SectionX {
  ZPoly A, B;
};

struct SurfacePoint {
  SurfaceModel model;
  RatFunc x;
  std::optional<RatFunc> y;
  bool zero = false;
  SectionX lift;  // x-coordinate on the cleared model
};

// Off-curve y raises OffCurve. Without y only x-level data is available.
SurfacePoint make_section(const SurfaceModel& S, const RatFunc& x, std::optional<RatFunc> y = std::nullopt);
SurfacePoint zero_section(const SurfaceModel& S);

Lift<ZPoly> cleared_lift(const SurfaceModel& S);

struct FfEscape {
  Rat value;
  Rat partial;
  Rat gap;  // the limit lies in [partial - gap, partial]
  bool snapped = false;
  int steps = 0;
  long res_order = 0;
  std::vector<long> extracted;  // common order removed at each step
};

// G_{F, ord_g}(X) = -lim min(ord_g A_n, ord_g B_n) / 4^n.
FfEscape ff_escape_rate_ord(const Lift<ZPoly>& F, const SectionX& X, const FfPlace& g, int N = 8);

// Squarefree pieces of f split into places: rational roots and coprime remainders.
struct PlaceSplit {
  std::vector<FfPlace> places;
  std::vector<bool> certified;  // algebraic pieces certified irreducible
};
PlaceSplit split_places(const std::vector<ZPoly>& polys);

struct DivisorEntry {
  FfPlace place;
  Rat coeff;  // local height at each conjugate point
  Rat escape;
  long ord_b = 0, ord_delta = 0;
  bool snapped = true;
  Rat gap;
  bool irreducible_certified = true;
};

struct BaseDivisor {
  std::vector<DivisorEntry> entries;  // nonzero coefficients only
  std::vector<DivisorEntry> audit;    // every candidate place
  Rat degree;
  bool exact = true;
};

BaseDivisor divisor_DEP(const SurfacePoint& P, int N = 8);

struct FfHeight {
  Rat value;  // 1/2 sum deg(g) G_g(A0, B0)
  bool exact = true;
  std::vector<Rat> limit_sequence;  // 1/2 h(x([2^k]P)) / 4^k
};
FfHeight ff_canonical_height(const SurfacePoint& P, int N = 8, int depth = 4);

struct XMapStep {
  SectionX next;
  ZPoly q;  // next.B = X.B * q before common factors are removed
};
// One doubling step on the cleared model; common factors among `strike` are removed
// (each division is appended to `removed`).
XMapStep x_map_step(const Lift<ZPoly>& F, const SectionX& X, const std::vector<ZPoly>& strike,
                    std::vector<ZPoly>* removed = nullptr);
// Minimal polynomials of the zeros of the lift resultant and of the discriminant.
std::vector<ZPoly> resultant_places(const SurfaceModel& S);
// Divide out every power of each g (primitive) that divides f.
ZPoly strip_factors(ZPoly f, const std::vector<ZPoly>& gs, std::vector<ZPoly>* removed = nullptr);
void strip_common_factor(ZPoly& A, ZPoly& B, const ZPoly& g, std::vector<ZPoly>* removed = nullptr);

// x([2^n]P) on the cleared model, content removed each step.
SectionX iterate_x_map(const SurfacePoint& P, int n, int cap = 10);

struct ReferenceHeightSpec {
  std::vector<std::pair<FfPlace, Rat>> entries;
};
ReferenceHeightSpec reference_spec(const BaseDivisor& D);
RatFunc reference_xi(const FfPlace& g);

struct ReferenceValue {
  double value = 0;
  Rat multiplier;  // finite places: value = multiplier * log p
};
ReferenceValue reference_height(const ReferenceHeightSpec& spec, const Rat& t, const PlaceQ& v);

struct QuasiTrivialEntry {
  Int p;
  Rat local, reference;
  bool equal = false;
  bool exact = true;
  bool candidate = false;  // p in the precomputed candidate list
};

struct QuasiTrivialReport {
  Rat t;
  std::vector<QuasiTrivialEntry> entries;
  std::vector<Int> exceptional;  // primes with a difference
  bool contained = true;         // every exceptional prime is a candidate
};

std::vector<Int> quasi_triviality_candidates(const SurfacePoint& P, const BaseDivisor& D);
QuasiTrivialReport quasi_triviality_check(const SurfacePoint& P, const BaseDivisor& D, const Rat& t,
                                          const std::vector<Int>& primes);

// Archimedean local height of P_t on the fiber at a complex parameter.
double fiber_local_height(const SurfacePoint& P, const Cx& t, double tol = 1e-13);

struct RegularizedPotential {
  SurfacePoint point;
  Cx t0;
  RatFunc u;
  Rat c;
};
RegularizedPotential regularized_potential(const SurfacePoint& P, const BaseDivisor& D, const Rat& t0);

struct PotentialValue {
  double value = 0;
  bool extrapolated = false;
};
PotentialValue regularized_potential_eval(const RegularizedPotential& rp, const Cx& t, double radius = 1e-5);

}  // namespace hauteur
