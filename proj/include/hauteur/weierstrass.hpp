#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hauteur/error.hpp"
#include "hauteur/numeric/hp.hpp"
#include "hauteur/numeric/ratfunc.hpp"
#include "hauteur/numeric/valuation.hpp"

namespace hauteur {

inline bool is_zero(const Rat& x) { return x.is_zero(); }
inline bool is_zero(const RatFunc& x) { return x.is_zero(); }
inline bool is_zero(const Int& x) { return sgn(x) == 0; }
inline bool is_zero(const ZPoly& x) { return x.is_zero(); }
template <class T>
bool is_zero(const std::complex<T>& x) { return x == std::complex<T>(0, 0); }

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
template <class R>
struct Curve {
  R a1{}, a2{}, a3{}, a4{}, a6{};
};

template <class R>
struct Invariants {
  R b2, b4, b6, b8, c4, c6, delta;
};

template <class R>
Invariants<R> invariants(const Curve<R>& E) {
  Invariants<R> v;
  v.b2 = E.a1 * E.a1 + R(4) * E.a2;
  v.b4 = R(2) * E.a4 + E.a1 * E.a3;
  v.b6 = E.a3 * E.a3 + R(4) * E.a6;
  v.b8 = E.a1 * E.a1 * E.a6 + R(4) * E.a2 * E.a6 - E.a1 * E.a3 * E.a4 + E.a2 * E.a3 * E.a3 - E.a4 * E.a4;
  v.c4 = v.b2 * v.b2 - R(24) * v.b4;
  v.c6 = -(v.b2 * v.b2 * v.b2) + R(36) * v.b2 * v.b4 - R(216) * v.b6;
  v.delta = -(v.b2 * v.b2 * v.b8) - R(8) * v.b4 * v.b4 * v.b4 - R(27) * v.b6 * v.b6 + R(9) * v.b2 * v.b4 * v.b6;
  return v;
}

// j = c4^3 / delta; a singular curve has no j-invariant.
std::optional<Rat> j_invariant(const Curve<Rat>& E);
std::optional<RatFunc> j_invariant(const Curve<RatFunc>& E);

// Coefficient k multiplies z^(4-k) w^k.
template <class R>
struct Lift {
  std::array<R, 5> f1{}, f2{};
};

// x-coordinate doubling: phi / psi with phi = x^4 - b4 x^2 - 2 b6 x - b8 and psi = 4x^3 + b2 x^2 + 2 b4 x + b6
template <class R>
struct DuplicationMap {
  std::array<R, 5> phi;  // coefficient of x^k
  std::array<R, 4> psi;
};

template <class R>
DuplicationMap<R> duplication_map(const Curve<R>& E) {
  auto v = invariants(E);
  return {{-v.b8, R(-2) * v.b6, -v.b4, R(0), R(1)}, {v.b6, R(2) * v.b4, v.b2, R(4)}};
}

template <class R>
Lift<R> standard_lift(const Curve<R>& E) {
  auto v = invariants(E);
  Lift<R> F;
  F.f1 = {R(1), R(0), -v.b4, R(-2) * v.b6, -v.b8};
  F.f2 = {R(0), R(4), v.b2, R(2) * v.b4, v.b6};
  return F;
}

template <class R>
R eval_form(const std::array<R, 5>& f, const R& z, const R& w) {
  // Horner in z with powers of w
  R acc = f[0];
  R wp = w;
  for (int k = 1; k <= 4; ++k) {
    acc = acc * z + f[static_cast<std::size_t>(k)] * wp;
    if (k < 4) wp = wp * w;
  }
  return acc;
}

template <class R>
std::pair<R, R> apply_lift(const Lift<R>& F, const R& z, const R& w) {
  return {eval_form(F.f1, z, w), eval_form(F.f2, z, w)};
}

// Resultant of the two binary quartics (8x8 Sylvester determinant).
Int form_resultant(const Lift<Int>& F);
ZPoly form_resultant(const Lift<ZPoly>& F);
Rat form_resultant(const Lift<Rat>& F);
Cx form_resultant(const Lift<Cx>& F);

// Cleared integral model of a curve over Q: x' = u^2 x, y' = u^3 y.
struct IntegralModel {
  Curve<Int> curve;
  Int u = 1;
};
IntegralModel integral_model(const Curve<Rat>& E);

template <class R>
bool on_curve(const Curve<R>& E, const R& x, const R& y) {
  R lhs = y * y + E.a1 * x * y + E.a3 * y;
  R rhs = x * x * x + E.a2 * x * x + E.a4 * x + E.a6;
  return is_zero(lhs - rhs);
}

// An elliptic surface over Q(t), given by rational-function coefficients, together with a
// cleared model whose coefficients lie in Z[t] (x' = u^2 x with u in Q[t]).
struct SurfaceModel {
  Curve<RatFunc> raw;
  Curve<ZPoly> cleared;
  RatFunc u;
  ZPoly delta;  // discriminant of the cleared model
  std::string var = "t";
};
SurfaceModel make_surface(const Curve<RatFunc>& E, const std::string& var = "t");
Curve<RatFunc> parse_curve(const std::array<std::string, 5>& coeffs, const std::string& var = "t");

struct Specialization {
  Curve<Rat> curve;
  bool singular = false;
};
// Evaluate the raw coefficients at t0; a pole raises NeedsModelChange.
Specialization specialize(const Curve<RatFunc>& E, const Rat& t0);
Curve<Cx> specialize(const Curve<RatFunc>& E, const Cx& t0);
Curve<Cx> specialize_cleared(const SurfaceModel& S, const Cx& t0);
Curve<Rat> specialize_cleared(const SurfaceModel& S, const Rat& t0);

struct SingularParameter {
  FfPlace place;
  long ord_delta_minimal = 0;  // order of the minimal discriminant
  bool irreducible_certified = true;
  std::vector<Cx> approx;      // complex positions (empty for infinity)
};
// Places of Q(t), including infinity, where the minimal model has bad reduction.
std::vector<SingularParameter> singular_parameters(const SurfaceModel& S);
long minimal_discriminant_order(const SurfaceModel& S, const FfPlace& g);

}  // namespace hauteur
