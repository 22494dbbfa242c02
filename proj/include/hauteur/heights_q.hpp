#pragma once

#include <optional>
#include <vector>

#include "hauteur/weierstrass.hpp"

namespace hauteur {

struct ArchEscape {
  double value = 0;
  int iterations = 0;
  double tail_bound = 0;
  bool ill_conditioned = false;
  bool extended = false;
};

// Archimedean escape rate G_F(X) = lim 4^-n log ||F^n(X)|| with sup-norm renormalisation.
ArchEscape escape_rate_arch(const Lift<Cx>& F, Cx z, Cx w, double tol = 1e-12, bool extended = false);
ArchEscape escape_rate_arch(const Lift<Rat>& F, const Rat& z, const Rat& w, double tol = 1e-12, bool extended = false);
ArchEscape escape_rate_arch(const Lift<HpComplex>& F, HpComplex z, HpComplex w, double tol = 1e-20);

struct FiniteEscape {
  Rat value;    // G_p(X) / log p (snapped when possible)
  Rat partial;  // unsnapped partial value after N steps
  Rat gap;      // the limit lies in [partial - gap, partial]
  bool snapped = false;
  int steps = 0;
  long res_valuation = 0;  // vp of the form resultant
};

// Non-archimedean escape rate for coprime integer (z, w); N steps then rational snapping.
FiniteEscape escape_rate_finite(const Lift<Int>& F, const Int& z, const Int& w, const Int& p, int N = 8);
FiniteEscape escape_rate_finite(const Lift<Rat>& F, const Int& z, const Int& w, const Int& p, int N = 8);
// Same, for any nonzero integer pair; the p-content is extracted first.
FiniteEscape escape_rate_finite_homogeneous(const Lift<Rat>& F, const Int& z, const Int& w, const Int& p, int N = 8);

struct LocalHeight {
  PlaceQ place;
  double value = 0;          // in nats
  Rat multiplier;            // finite places: value = multiplier * log p
  bool exact = false;        // finite place with a snapped escape rate
  double error_bound = 0;
  bool ill_conditioned = false;
};

// Escape-rate local height for a point with x-coordinate x on E (x is never the point at infinity).
LocalHeight local_height(const Curve<Rat>& E, const Rat& x, const PlaceQ& v, double tol = 1e-12, int finite_steps = 32);
double archimedean_local_height(const Curve<Cx>& E, Cx x, double tol = 1e-13);
double archimedean_local_height(const Curve<HpComplex>& E, HpComplex x, double tol = 1e-20);

struct LocalHeightJob {
  Curve<Rat> curve;
  Rat x;
  PlaceQ place;
};
std::vector<LocalHeight> local_heights_batch(const std::vector<LocalHeightJob>& jobs, double tol = 1e-12);

struct CanonicalHeight {
  double value = 0;           // sum of local escape rates (estimate ii)
  double limit_estimate = 0;  // 1/2 h(X_k) / 4^k at the requested depth (estimate i)
  double gap = 0;
  bool exact_zero = false;
  int depth = 0;
  std::vector<double> limit_sequence;  // estimate i for k = 0..depth
  double arch_term = 0;                // 1/2 G_inf
  std::vector<std::pair<Int, Rat>> finite_terms;  // (p, 1/2 G_p / log p)
  bool finite_exact = true;
};

CanonicalHeight canonical_height(const Curve<Rat>& E, const Rat& x, int depth = 7);

// Primes dividing the resultant of the standard lift of the integral model.
std::vector<Int> bad_primes(const Curve<Rat>& E);

struct TateValue {
  double value = 0;
  double error_bar = 0;
};
TateValue tate_series_local_height(Cx q, Cx w, int terms = 60);

}  // namespace hauteur
