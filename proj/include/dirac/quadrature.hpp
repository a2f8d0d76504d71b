#pragma once
#include <functional>
#include <span>

namespace dirac {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // Gauss-Kronrod error estimate
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7, K15). Panels split greedily at the largest
// error estimate until |error| <= max(abs_tol, rel_tol |value|) or the panel
// budget runs out; the caller inspects the returned estimate.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double abs_tol = 1e-12,
                              double rel_tol = 1e-10,
                              std::span<const double> breakpoints = {},
                              int max_panels = 6000);

}  // namespace dirac
