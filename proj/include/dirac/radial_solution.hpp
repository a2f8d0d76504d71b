#pragma once
#include <array>
#include <complex>
#include <vector>

namespace dirac {

using Cx = std::complex<double>;
using Spinor2 = std::array<Cx, 2>;  // (f+, f-)

// A sampled radial spinor pair on a strictly increasing grid. Derivatives at
// the nodes are kept alongside the values; they come from the exact system
// right-hand side and give us cubic Hermite evaluation between nodes plus a
// corrected-trapezoid quadrature that is fourth order on the stored grid.
struct RadialSolution {
  int k = 0;
  double energy = 0.0;

  std::vector<double> grid;       // r values, strictly increasing
  std::vector<Spinor2> values;    // (f+(r), f-(r))
  std::vector<Spinor2> derivs;    // d/dr of the above at the nodes

  struct Tolerances {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
  } tolerances;

  double norm_sq = 0.0;  // int (|f+|^2 + |f-|^2) dr over the grid span

  bool empty() const { return grid.empty(); }
  double r_min() const { return grid.front(); }
  double r_max() const { return grid.back(); }

  // Cubic Hermite interpolation; r must lie inside [r_min, r_max].
  Spinor2 value_at(double r) const;
  // Derivative of the Hermite interpolant (exact at the nodes).
  Spinor2 derivative_at(double r) const;
};

// int (|f+|^2 + |f-|^2) dr via derivative-corrected trapezoid.
double l2_norm_sq(const RadialSolution& f);

// int (f+ conj(g+) + f- conj(g-)) dr over the overlap of the two grids.
Cx l2_inner(const RadialSolution& f, const RadialSolution& g);

}  // namespace dirac
