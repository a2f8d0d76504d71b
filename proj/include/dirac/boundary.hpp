#pragma once
#include <array>
#include <complex>
#include <span>
#include <vector>

#include "dirac/channels.hpp"
#include "dirac/radial_solution.hpp"

namespace dirac {

// 2x2 complex matrix, row-major. Real-valued in the subcritical and
// critical regimes; complex in the supercritical one.
struct Mat2 {
  std::array<std::array<Cx, 2>, 2> m{};

  Cx& operator()(int i, int j) { return m[i][j]; }
  const Cx& operator()(int i, int j) const { return m[i][j]; }

  Cx det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  Mat2 inverse() const;
  Spinor2 apply(const Spinor2& v) const;
  Mat2 operator*(const Mat2& o) const;
};

// Regime-specific matrix linking asymptotic coefficients (A+, A-) to the
// boundary values (Gamma+, Gamma-). Identity is used in the critical regime,
// where the log model carries the structure instead.
struct ConnectionMatrix {
  int k = 0;
  Regime regime = Regime::Subcritical;
  Mat2 entries;
  bool second_branch = false;  // subcritical with lambda + k - gamma = 0
};

// Rejects essentially self-adjoint channels (no boundary data there).
ConnectionMatrix connection_matrix(const PotentialParams& p, int k);

// Model value of (f+(r), f-(r)) for given asymptotic coefficients:
//   subcritical   D . (A+ r^g, A- r^-g)
//   critical      (M log r + I) . (A+, A-)
//   supercritical E . (A+ r^{ig}, A- r^{-ig})
Spinor2 asymptotic_model(const PotentialParams& p, int k, const Spinor2& coeffs,
                         double r);

// The nilpotent log-model matrix M (defined for every channel; it is the
// 1/r coefficient matrix of the radial system).
Mat2 log_model_matrix(const PotentialParams& p, int k);

// Energy-aware refinement of the asymptotic model: each branch carries its
// Frobenius series up to r^{alpha+order}, generated by the matrix recursion
// (N - (alpha+n) I) v_n = -K v_{n-1}. Needed wherever boundary data must
// survive a round trip through the integrator at 1e-8: the leading-order
// model alone contaminates the regular branch at O(r^{1-2 gamma}).
Spinor2 asymptotic_model_series(const PotentialParams& p, int k, double energy,
                                const Spinor2& coeffs, double r,
                                int order = 3);

struct FitWindow {
  double lo = 1e-8;
  double hi = 1e-5;
};

struct BoundaryData {
  int k = 0;
  Cx gamma_plus{};   // Gamma+
  Cx gamma_minus{};  // Gamma-
  Spinor2 coeffs{};  // (A+, A-)
  double fit_residual = 0.0;
};

// Least-squares fit of (A+, A-) against the asymptotic model over the
// given samples; throws IllConditionedFit when the (column-equilibrated)
// design matrix has condition number above 1e10.
BoundaryData fit_boundary_data(std::span<const double> r,
                               std::span<const Spinor2> f,
                               const PotentialParams& p, int k);

// Same, using the solution's stored samples inside the fit window.
BoundaryData extract_boundary_data(const RadialSolution& sol,
                                   const PotentialParams& p, int k,
                                   const FitWindow& window = {});

// Gamma+(f) conj(Gamma-(g)) - Gamma-(f) conj(Gamma+(g)); channels must match.
Cx boundary_form(const BoundaryData& lhs, const BoundaryData& rhs);

struct WronskianOptions {
  double eps0 = 1e-5;    // ladder start
  int terms = 8;         // geometric sequence length, ratio 1/2
  double rel_tol = 1e-6; // convergence criterion on successive extrapolants
};

// Extrapolated eps -> 0 limit of det [ f+(eps) conj(g+(eps))
//                                      f-(eps) conj(g-(eps)) ]
// over a geometric eps ladder with iterated first-order Richardson.
// Throws NonConvergent when the extrapolants fail to stabilize.
Cx wronskian_limit(const RadialSolution& f, const RadialSolution& g,
                   const WronskianOptions& opts = {});

// Richardson table helper shared with the Green-identity checks: values[i]
// belongs to eps0 / 2^i. Returns the final extrapolant; *spread (optional)
// receives the relative difference of the last two extrapolants.
Cx richardson_limit(std::span<const Cx> values, double* spread = nullptr);

}  // namespace dirac
