#pragma once

#include <string>
#include <vector>

#include "hauteur/heights_ff.hpp"
#include "hauteur/torsion.hpp"

namespace hauteur {

// Nodes span the closed rectangle: nx columns from re_min to re_max, ny rows from im_max
// down to im_min. Storage is row-major from (re_min, im_max).
struct GridSpec {
  double re_min = -1, re_max = 1, im_min = -1, im_max = 1;
  int nx = 2, ny = 2;
  double exclusion_radius = 1e-3;

  void validate() const;  // Domain error
  double hx() const { return (re_max - re_min) / (nx - 1); }
  double hy() const { return (im_max - im_min) / (ny - 1); }
  Cx node(int i, int j) const;
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i); }
  bool operator==(const GridSpec&) const = default;
};

// "re_min,re_max,im_min,im_max"
GridSpec parse_region(const std::string& text, int nx, int ny);

struct PotentialGrid {
  GridSpec spec;
  std::vector<double> values;  // NaN marks a missing node
  std::vector<Cx> centers;     // exclusion centers
  // G = a log|t - c| + continuous near c; a is minus the function-field escape rate there
  std::vector<std::pair<Cx, double>> log_parts;
};

// Finite parameters where the lift degenerates (zeros of the lift resultant and the discriminant).
std::vector<Cx> exclusion_centers(const SurfacePoint& P);

// G_{F_t}(A(t), B(t)) on the cleared model at each node.
PotentialGrid grid_potential(const SurfacePoint& P, const GridSpec& spec);

struct SubharmonicStats {
  std::size_t checked = 0, satisfied = 0;
  double fraction() const { return checked ? static_cast<double>(satisfied) / static_cast<double>(checked) : 1.0; }
};
// G(center) <= mean of the four neighbours (weighted by 1/h^2) + eps * scale, scale = max(1, max |G|).
SubharmonicStats subharmonic_check(const PotentialGrid& G, double eps = 1e-6);

struct DensityGrid {
  GridSpec spec;
  std::vector<double> values;  // density per unit area
  double mass = 0;             // sum of values * cell area
  double raw_mass = 0;         // the same before clamping
  Rat normalization{1};
  double escaped = 0;          // empirical measures: mass outside the rectangle
  std::size_t stencil_nodes = 0, negative_nodes = 0;  // before clamping, below -1e-4 * scale
};

// 5-point stencil of G/2 over 2 pi h^2, divided by `normalization` (deg D), clamped at 0.
// The log parts are subtracted first so their point masses stay out of the grid.
DensityGrid laplacian_density(const PotentialGrid& G, const Rat& normalization = Rat(1));

struct EscapeImage {
  GridSpec spec;
  std::vector<unsigned char> marks;
  double threshold = 10000;
  int max_iter = 8;
};

// Marks t when |f_t^n(x(P_t))| >= threshold for some 0 <= n <= max_iter, with f_t the
// x-duplication map of the fiber in the given model.
EscapeImage escape_time_image(const SurfacePoint& P, const GridSpec& spec, double threshold = 10000, int max_iter = 8);

// Histogram of points, mass 1 in total; each node owns the cell of size hx * hy around it.
DensityGrid empirical_measure(const std::vector<Cx>& points, const GridSpec& spec);
DensityGrid empirical_measure(const TorsionSet& ts, const GridSpec& spec, int level);

// Half the L1 distance of the cell masses, each normalized to mass 1 on the rectangle.
// The smoothed variant first applies a Gaussian blur with sigma = 2 cells.
double discrepancy(const DensityGrid& a, const DensityGrid& b, bool smoothed = false);

std::string image_ppm(const EscapeImage& img);
std::string density_ppm(const DensityGrid& d);
std::string grid_csv(const GridSpec& spec, const std::vector<double>& values);

}  // namespace hauteur
