#pragma once
#include <iosfwd>
#include <optional>
#include <vector>

#include "dirac/boundary.hpp"
#include "dirac/channels.hpp"
#include "dirac/extensions.hpp"
#include "dirac/radial_solution.hpp"

namespace dirac {

// Right-hand side of the eigenvalue system h f = E f:
//   f+' = -((k+lambda)/r) f+ + (E + m - (nu-mu)/r) f-
//   f-' =  ((k+lambda)/r) f- - (E - m - (nu+mu)/r) f+
Spinor2 radial_rhs(const PotentialParams& p, int k, double energy, double r,
                   const Spinor2& state);

// Model value at r0 for the solution ray of a Gamma+ = b Gamma-:
// (Gamma+, Gamma-) = (b, a), coefficients via the inverse connection matrix
// (identity in the critical regime). Throws DegenerateRelation on (0,0).
Spinor2 small_r_initial_data(const PotentialParams& p, int k,
                             const RelationRow& row, double r0);

// Recessive Frobenius start r^{+gamma} for essentially self-adjoint
// channels (also valid in the subcritical regime).
Spinor2 small_r_recessive_data(const PotentialParams& p, int k, double r0);

// exp(N log r) applied to (Gamma+, Gamma-), where N is the 1/r coefficient
// matrix; equals the asymptotic model in every regime and is real for real
// boundary values. N^2 = delta I gives the closed form.
Spinor2 small_r_model_from_boundary(const PotentialParams& p, int k,
                                    const Spinor2& gamma, double r);

struct LargeRData {
  Spinor2 value{};       // one-term Liouville-Green value at r_inf
  Spinor2 direction{};   // unit decaying eigenvector (E+m, -kappa)/|.|
  double log_scale = 0;  // log of the scalar prefactor r^sigma e^{-kappa r}
  double kappa = 0;      // sqrt(m^2 - E^2)
  double sigma = 0;      // -(nu E + mu m)/kappa
  double r_inf = 0;      // radius actually used
};

// r_inf <= 0 requests automatic selection (about 40 e-foldings of decay).
// Throws EnergyOutsideGap for |energy| >= m.
LargeRData large_r_decaying_data(const PotentialParams& p, int k,
                                 double energy, double r_inf = 0.0);

struct SolveOptions {
  double r0 = 1e-8;           // outward start radius
  double r_inf = 0.0;         // 0 = automatic
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int scan_points = 400;      // bracketing resolution per window
  int max_count = 16;
  FitWindow fit_window{};
};

struct EigenvalueResult {
  int k = 0;
  RelationRow relation_row{};             // (0,0) marks an e.s.a. channel
  std::vector<double> eigenvalues;        // sorted, strictly inside (-m, m)
  std::vector<double> match_defects;      // |W(E)| at the accepted roots
  std::vector<double> energy_error_estimates;
  std::vector<BoundaryData> boundary_checks;
  std::vector<RadialSolution> eigenfunctions;
};

// Normalized matching determinant W(E) of the outward and inward shooting
// solutions at the matching radius. Row empty => recessive start (allowed
// only on essentially self-adjoint channels).
double matching_determinant(const PotentialParams& p, int k,
                            const std::optional<RelationRow>& row, double energy,
                            const SolveOptions& opts = {});

// W(E) on a uniform energy grid over the window. The OpenMP variant and the
// serial reference return identical values.
std::vector<double> scan_matching_determinant(
    const PotentialParams& p, int k, const std::optional<RelationRow>& row,
    double e_lo, double e_hi, int n, const SolveOptions& opts = {});
std::vector<double> scan_matching_determinant_serial(
    const PotentialParams& p, int k, const std::optional<RelationRow>& row,
    double e_lo, double e_hi, int n, const SolveOptions& opts = {});

// Shooting eigenvalue search: bracket sign changes of W on the scan grid,
// refine by secant, assemble normalized eigenfunctions, re-extract boundary
// data on channels that have it.
EigenvalueResult eigenvalues_in_gap(const PotentialParams& p, int k,
                                    const std::optional<RelationRow>& row,
                                    double window_lo, double window_hi,
                                    const SolveOptions& opts = {});

// Integrate one channel at fixed energy from given data at r_lo, sampling
// on a log/linear grid (plus forced extra radii). Used by tests and by the
// eigenfunction assembly.
struct GridSpec {
  int pts_per_decade = 32;    // below max(1, 1/m)
  double dr_large = 0.05;     // above
  std::vector<double> extra;  // forced sample radii
};

std::vector<double> make_radial_grid(double r_lo, double r_hi,
                                     const GridSpec& spec);

RadialSolution integrate_channel(const PotentialParams& p, int k, double energy,
                                 const Spinor2& y_at_r_lo, double r_lo,
                                 double r_hi, const GridSpec& spec,
                                 double abs_tol = 1e-12,
                                 double rel_tol = 1e-10);

// Independent consistency check on a sampled solution: nonuniform central
// finite differences applied to the operator matrix against E f. Returns the
// max relative residual over interior nodes (FD truncation dominates; the
// stored grids keep it around 1e-3).
double max_fd_residual(const RadialSolution& sol, const PotentialParams& p);

void write_radial_csv(std::ostream& os, const RadialSolution& sol);

}  // namespace dirac
