#pragma once

#include <functional>
#include <vector>

#include "hauteur/numeric/poly.hpp"

namespace hauteur {

struct NewtonStep {
  Cx ratio;               // f / f'
  double backward_error;  // |f| relative to the sum of absolute terms
};
using NewtonFn = std::function<NewtonStep(const Cx&)>;

struct RootOptions {
  double tol = 1e-10;
  int max_sweeps = 1000;
  std::vector<char> fixed;  // nonzero: known root, held in place and only repels
  bool relative = false;    // step tolerance relative to |z| (roots clustered at 0)
};

struct AberthResult {
  std::vector<Cx> roots;
  std::vector<double> backward_error;
  int sweeps = 0;
  bool converged = false;
};

// Simultaneous Aberth-Ehrlich iteration (Gauss-Seidel updates) from the given starting points.
AberthResult aberth(std::vector<Cx> start, const NewtonFn& f, const RootOptions& opt);

// Starting points on circles read off the upper Newton polygon of (i, log|c_i|).
// Entries equal to -inf mark zero coefficients; c_0 and c_n must be nonzero.
std::vector<Cx> newton_polygon_start(const std::vector<double>& log_abs_coeffs);

// Newton ratio and backward error for a polynomial with coefficients scaled into doubles.
NewtonFn poly_newton(const ZPoly& f);
std::vector<double> log_abs_coeffs(const ZPoly& f);

// All complex roots with multiplicity, sorted lexicographically after rounding to tol.
std::vector<Cx> complex_roots(const Poly& f, double tol = 1e-10);
std::vector<Cx> complex_roots(const ZPoly& f, double tol = 1e-10);
// eigenvalues of the companion matrix
std::vector<Cx> companion_roots(const ZPoly& f);

void sort_roots(std::vector<Cx>& roots, double tol);

}  // namespace hauteur
