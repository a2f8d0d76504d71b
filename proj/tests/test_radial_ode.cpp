#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dirac/errors.hpp"
#include "dirac/radial_ode.hpp"

using namespace dirac;

namespace {

// Sommerfeld fine-structure formula, the independent spectral oracle:
// E = m / sqrt(1 + (nu/(nr + sqrt(k^2 - nu^2)))^2), attraction strength nu>0
double sommerfeld(double nu, int k, int nr, double m = 1.0) {
  const double g = std::sqrt(double(k) * k - nu * nu);
  const double q = nu / (nr + g);
  return m / std::sqrt(1.0 + q * q);
}

// closed-form hydrogenic ground state for k=-1, params nu = -Z, m=1:
// f = (sqrt(1+E), -sqrt(1-E)) r^gamma e^{-Z r},  E = gamma = sqrt(1-Z^2)
struct Hydrogenic {
  double Z, E, gamma, kappa;
  explicit Hydrogenic(double Z_) : Z(Z_) {
    E = std::sqrt(1.0 - Z * Z);
    gamma = E;
    kappa = Z;
  }
  Spinor2 value(double r) const {
    const double radial = std::pow(r, gamma) * std::exp(-kappa * r);
    return {Cx(std::sqrt(1 + E) * radial), Cx(-std::sqrt(1 - E) * radial)};
  }
  Spinor2 deriv(double r) const {
    const Spinor2 v = value(r);
    const double factor = gamma / r - kappa;
    return {factor * v[0], factor * v[1]};
  }
};

}  // namespace

TEST_CASE("radial rhs spot checks") {
  const PotentialParams free(0, 0, 0, 1.0);
  const Spinor2 d = radial_rhs(free, 1, 1.0, 1.0, {Cx(0), Cx(1)});
  CHECK(d[0] == Cx(2.0));
  CHECK(d[1] == Cx(1.0));

  const Spinor2 z = radial_rhs(PotentialParams(0.3, 0.2, 0.1), -2, 0.5, 2.0,
                               {Cx(0), Cx(0)});
  CHECK(std::abs(z[0]) == 0.0);
  CHECK(std::abs(z[1]) == 0.0);
}

TEST_CASE("radial rhs reproduces the hydrogenic ground-state derivative") {
  const Hydrogenic h(0.5);
  const PotentialParams p(-0.5, 0, 0, 1.0);
  for (double r : {0.05, 0.3, 1.0, 4.0, 9.0}) {
    const Spinor2 got = radial_rhs(p, -1, h.E, r, h.value(r));
    const Spinor2 want = h.deriv(r);
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(got[c] - want[c]) <=
            1e-10 * std::max(1.0, std::abs(want[c])));
    }
  }
}

TEST_CASE("small-r initial data") {
  const PotentialParams sub(0.95, 0, 0, 1.0);

  // (a,b) = (1,0): pure Gamma- data
  const Spinor2 d1 = small_r_initial_data(sub, 1, RelationRow{1.0, 0.0}, 1e-8);
  const Spinor2 ref1 = small_r_model_from_boundary(sub, 1, {Cx(0), Cx(1)}, 1e-8);
  for (int c = 0; c < 2; ++c) CHECK(std::abs(d1[c] - ref1[c]) <= 1e-10 * std::abs(ref1[c]));

  // critical channel with (a,b) = (1,1): coefficients are (1,1) directly
  const PotentialParams crit(1.0, 0, 0, 1.0);
  const Spinor2 d2 =
      small_r_initial_data(crit, -1, RelationRow{1.0, 1.0}, 1e-6);
  const Spinor2 ref2 = asymptotic_model(crit, -1, {1.0, 1.0}, 1e-6);
  for (int c = 0; c < 2; ++c) CHECK(std::abs(d2[c] - ref2[c]) <= 1e-12 * (1 + std::abs(ref2[c])));

  CHECK_THROWS_AS(small_r_initial_data(sub, 1, RelationRow{0.0, 0.0}, 1e-8),
                  DegenerateRelation);
}

TEST_CASE("distinguished row starts on the pure r^gamma branch") {
  const PotentialParams p(-0.95, 0, 0, 1.0);
  const RelationRow row = distinguished_row(p, 1);
  const Spinor2 y0 = small_r_initial_data(p, 1, row, 1e-8);
  // model with A- = 0: proportional to D (r^g, 0)
  const ConnectionMatrix D = connection_matrix(p, 1);
  const Cx cross = y0[0] * D.entries(1, 0) - y0[1] * D.entries(0, 0);
  CHECK(std::abs(cross) <= 1e-12 * std::abs(y0[0]));

  // round trip through the integrator: extract A- back, expect zero
  GridSpec spec;
  for (int i = 0; i < 10; ++i) spec.extra.push_back(1e-5 / std::pow(2.0, i));
  const RadialSolution sol =
      integrate_channel(p, 1, 0.2, y0, 1e-8, 0.5, spec, 1e-14, 1e-12);
  const BoundaryData bd = extract_boundary_data(sol, p, 1);
  const double scale =
      std::max(std::abs(bd.coeffs[0]), std::abs(bd.coeffs[1]));
  CHECK(std::abs(bd.coeffs[1]) <= 1e-8 * scale);
}

TEST_CASE("large-r decaying data") {
  const PotentialParams free(0, 0, 0, 1.0);
  const LargeRData ld = large_r_decaying_data(free, 1, 0.0, 40.0);
  CHECK(ld.kappa == doctest::Approx(1.0));
  CHECK(ld.sigma == doctest::Approx(0.0));
  // ratio matches the constant-coefficient eigenvector (E+m, -kappa)
  const Cx ratio = ld.value[0] / ld.value[1];
  CHECK(std::abs(ratio - Cx(-1.0)) < 1e-8);
  // decay e^{-r}: log scale is -40 up to the direction normalization
  CHECK(ld.log_scale == doctest::Approx(-40.0 + std::log(std::hypot(1.0, 1.0)))
                            .epsilon(1e-12));

  // auto selection grows like 1/kappa toward the gap edge
  const LargeRData near_edge = large_r_decaying_data(free, 1, 0.999);
  const double kappa_edge = std::sqrt(1 - 0.999 * 0.999);
  CHECK(near_edge.r_inf == doctest::Approx(40.0 / kappa_edge));
  // a user-specified r_inf with too few decay e-foldings is rejected
  CHECK_THROWS_AS(large_r_decaying_data(free, 1, 0.999, 30.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(large_r_decaying_data(free, 1, 1.5), EnergyOutsideGap);
}

TEST_CASE("inward integration reproduces the hydrogenic tail ratio") {
  const Hydrogenic h(0.5);
  const PotentialParams p(-0.5, 0, 0, 1.0);
  const LargeRData ld = large_r_decaying_data(p, -1, h.E);
  GridSpec spec;
  const RadialSolution sol = integrate_channel(
      p, -1, h.E, ld.direction, ld.r_inf, 5.0, spec, 1e-14, 1e-12);
  // the ground state is a pure power-times-exponential: its component ratio
  // is constant in r
  const Spinor2 v = sol.value_at(5.0);
  const double expect = -std::sqrt((1 + h.E) / (1 - h.E));
  CHECK(std::abs(v[0] / v[1] - Cx(expect)) < 1e-7 * std::abs(expect));
}

TEST_CASE("Sommerfeld levels for the essentially self-adjoint channel") {
  // |nu| = 0.5 < sqrt(3)/2: k = -1 channel is essentially self-adjoint and
  // the recessive branch selects the states on its own
  const PotentialParams p(-0.5, 0, 0, 1.0);
  SolveOptions opts;
  const EigenvalueResult res =
      eigenvalues_in_gap(p, -1, std::nullopt, 0.5, 0.995, opts);
  REQUIRE(res.eigenvalues.size() >= 2);
  const double e0 = sommerfeld(0.5, -1, 0);
  const double e1 = sommerfeld(0.5, -1, 1);
  CHECK(std::abs(res.eigenvalues[0] - e0) <= 1e-6 * e0);
  CHECK(std::abs(res.eigenvalues[1] - e1) <= 1e-6 * e1);
  CHECK(res.boundary_checks.empty());

  // eigenfunction sanity: normalized, small matching defect, FD residual
  REQUIRE(res.eigenfunctions.size() == res.eigenvalues.size());
  CHECK(res.eigenfunctions[0].norm_sq == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(res.match_defects[0] < 1e-8);
  CHECK(max_fd_residual(res.eigenfunctions[0], p) < 5e-3);

  // orthogonality of distinct levels in the same channel
  const Cx ip = l2_inner(res.eigenfunctions[0], res.eigenfunctions[1]);
  CHECK(std::abs(ip) < 1e-6);
}

TEST_CASE("distinguished extension ground state at nu = -0.95") {
  const PotentialParams p(-0.95, 0, 0, 1.0);
  const RelationRow row = distinguished_row(p, -1);
  SolveOptions opts;
  const EigenvalueResult res =
      eigenvalues_in_gap(p, -1, row, 0.05, 0.9, opts);
  REQUIRE(!res.eigenvalues.empty());
  const double e0 = std::sqrt(1.0 - 0.9025);
  CHECK(std::abs(res.eigenvalues[0] - e0) <= 1e-5 * e0);

  // the eigenfunction satisfies its own relation row
  REQUIRE(!res.boundary_checks.empty());
  const BoundaryData& bd = res.boundary_checks[0];
  const Cx defect = row.a * bd.gamma_plus - row.b * bd.gamma_minus;
  const double scale =
      std::hypot(std::abs(row.a), std::abs(row.b)) *
      std::hypot(std::abs(bd.gamma_plus), std::abs(bd.gamma_minus));
  CHECK(std::abs(defect) <= 1e-8 * scale);
  // and sits on the A- = 0 ray
  CHECK(std::abs(bd.coeffs[1]) <=
        1e-8 * std::max(std::abs(bd.coeffs[0]), std::abs(bd.coeffs[1])));
}

TEST_CASE("extension dependence: distinct theta rows shift the spectrum") {
  const PotentialParams p(-0.95, 0, 0, 1.0);
  SolveOptions opts;
  opts.scan_points = 200;
  const EigenvalueResult a =
      eigenvalues_in_gap(p, 1, theta_row(0.0), -0.95, 0.95, opts);
  const EigenvalueResult b =
      eigenvalues_in_gap(p, 1, theta_row(1.0), -0.95, 0.95, opts);
  REQUIRE(!a.eigenvalues.empty());
  REQUIRE(!b.eigenvalues.empty());
  CHECK(std::abs(a.eigenvalues.front() - b.eigenvalues.front()) > 1e-3);

  // each eigenfunction satisfies its own row
  for (const auto* res : {&a, &b}) {
    const BoundaryData& bd = res->boundary_checks.front();
    const Cx defect = res->relation_row.a * bd.gamma_plus -
                      res->relation_row.b * bd.gamma_minus;
    const double scale =
        std::hypot(std::abs(res->relation_row.a),
                   std::abs(res->relation_row.b)) *
        std::hypot(std::abs(bd.gamma_plus), std::abs(bd.gamma_minus));
    CHECK(std::abs(defect) <= 1e-8 * scale);
  }
}

TEST_CASE("empty window returns an empty result") {
  const PotentialParams p(-0.5, 0, 0, 1.0);
  SolveOptions opts;
  opts.scan_points = 60;
  const EigenvalueResult res =
      eigenvalues_in_gap(p, -1, std::nullopt, 0.0, 0.5, opts);
  CHECK(res.eigenvalues.empty());
}

TEST_CASE("grid refinement stays within the reported error estimate") {
  const PotentialParams p(-0.5, 0, 0, 1.0);
  SolveOptions coarse;
  coarse.scan_points = 120;
  SolveOptions fine = coarse;
  fine.abs_tol = 0.5 * coarse.abs_tol;
  fine.rel_tol = 0.5 * coarse.rel_tol;
  const EigenvalueResult rc =
      eigenvalues_in_gap(p, -1, std::nullopt, 0.8, 0.9, coarse);
  const EigenvalueResult rf =
      eigenvalues_in_gap(p, -1, std::nullopt, 0.8, 0.9, fine);
  REQUIRE(!rc.eigenvalues.empty());
  REQUIRE(rc.eigenvalues.size() == rf.eigenvalues.size());
  for (std::size_t i = 0; i < rc.eigenvalues.size(); ++i) {
    CHECK(std::abs(rc.eigenvalues[i] - rf.eigenvalues[i]) <=
          10.0 * rc.energy_error_estimates[i]);
  }
}

TEST_CASE("matching determinant is real-valued and sign-changes at roots") {
  const PotentialParams p(-0.5, 0, 0, 1.0);
  SolveOptions opts;
  const double e0 = sommerfeld(0.5, -1, 0);
  const double wl = matching_determinant(p, -1, std::nullopt, e0 - 0.01, opts);
  const double wr = matching_determinant(p, -1, std::nullopt, e0 + 0.01, opts);
  CHECK(wl * wr < 0.0);
}
