#include "dirac/radial_solution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dirac {

namespace {

// index of the grid interval containing r
std::size_t locate(const std::vector<double>& grid, double r) {
  auto it = std::upper_bound(grid.begin(), grid.end(), r);
  if (it == grid.begin() || it == grid.end()) {
    if (r == grid.back()) return grid.size() - 2;
    throw std::out_of_range("RadialSolution::value_at: r outside grid span");
  }
  return static_cast<std::size_t>(it - grid.begin()) - 1;
}

}  // namespace

Spinor2 RadialSolution::value_at(double r) const {
  if (grid.size() < 2) throw std::out_of_range("RadialSolution: empty grid");
  const std::size_t i = locate(grid, r);
  const double h = grid[i + 1] - grid[i];
  const double s = (r - grid[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  Spinor2 out;
  for (int c = 0; c < 2; ++c) {
    out[c] = h00 * values[i][c] + h * h10 * derivs[i][c] +
             h01 * values[i + 1][c] + h * h11 * derivs[i + 1][c];
  }
  return out;
}

Spinor2 RadialSolution::derivative_at(double r) const {
  if (grid.size() < 2) throw std::out_of_range("RadialSolution: empty grid");
  const std::size_t i = locate(grid, r);
  const double h = grid[i + 1] - grid[i];
  const double s = (r - grid[i]) / h;
  const double d00 = -6 * s * (1 - s) / h;
  const double d10 = (1 - s) * (1 - 3 * s);
  const double d01 = 6 * s * (1 - s) / h;
  const double d11 = s * (3 * s - 2);
  Spinor2 out;
  for (int c = 0; c < 2; ++c) {
    out[c] = d00 * values[i][c] + d10 * derivs[i][c] +
             d01 * values[i + 1][c] + d11 * derivs[i + 1][c];
  }
  return out;
}

double l2_norm_sq(const RadialSolution& f) {
  if (f.grid.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < f.grid.size(); ++i) {
    const double h = f.grid[i + 1] - f.grid[i];
    double p0 = 0, p1 = 0, d0 = 0, d1 = 0;
    for (int c = 0; c < 2; ++c) {
      p0 += std::norm(f.values[i][c]);
      p1 += std::norm(f.values[i + 1][c]);
      d0 += 2.0 * std::real(std::conj(f.values[i][c]) * f.derivs[i][c]);
      d1 += 2.0 * std::real(std::conj(f.values[i + 1][c]) * f.derivs[i + 1][c]);
    }
    total += 0.5 * h * (p0 + p1) + h * h / 12.0 * (d0 - d1);
  }
  return total;
}

Cx l2_inner(const RadialSolution& f, const RadialSolution& g) {
  const double lo = std::max(f.r_min(), g.r_min());
  const double hi = std::min(f.r_max(), g.r_max());
  if (!(lo < hi)) return 0.0;
  // merge both grids over the overlap, integrate p = f . conj(g) with
  // p' = f' . conj(g) + f . conj(g') on each merged interval
  std::vector<double> pts;
  pts.reserve(f.grid.size() + g.grid.size());
  for (double r : f.grid)
    if (r >= lo && r <= hi) pts.push_back(r);
  for (double r : g.grid)
    if (r >= lo && r <= hi) pts.push_back(r);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto eval = [](const RadialSolution& s, double r, Spinor2& v, Spinor2& d) {
    v = s.value_at(r);
    d = s.derivative_at(r);
  };

  Cx total = 0.0;
  Spinor2 fv0, fd0, gv0, gd0, fv1, fd1, gv1, gd1;
  eval(f, pts[0], fv0, fd0);
  eval(g, pts[0], gv0, gd0);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    eval(f, pts[i + 1], fv1, fd1);
    eval(g, pts[i + 1], gv1, gd1);
    const double h = pts[i + 1] - pts[i];
    Cx p0 = 0, p1 = 0, q0 = 0, q1 = 0;
    for (int c = 0; c < 2; ++c) {
      p0 += fv0[c] * std::conj(gv0[c]);
      p1 += fv1[c] * std::conj(gv1[c]);
      q0 += fd0[c] * std::conj(gv0[c]) + fv0[c] * std::conj(gd0[c]);
      q1 += fd1[c] * std::conj(gv1[c]) + fv1[c] * std::conj(gd1[c]);
    }
    total += 0.5 * h * (p0 + p1) + h * h / 12.0 * (q0 - q1);
    fv0 = fv1; fd0 = fd1; gv0 = gv1; gd0 = gd1;
  }
  return total;
}

}  // namespace dirac
