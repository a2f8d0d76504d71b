#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dirac/channels.hpp"
#include "dirac/radial_solution.hpp"

namespace dirac {

// Seeded test profile: f±(r) = r * sum of Gaussian bumps, so f vanishes at
// the origin; identically zero beyond r_max (the bumps are at ~1e-31 there).
struct GaussianBump {
  Cx amp;
  double center = 1.0;
  double width = 0.5;
};

struct BumpProfile {
  std::vector<GaussianBump> bumps;
  Cx value(double r) const;
  Cx deriv(double r) const;
};

struct TestSpinor {
  int k = 1;
  std::uint64_t seed = 0;
  BumpProfile hp, hm;  // f+ = r hp(r), f- = r hm(r)
  double r_max = 0.0;
  Cx amplitude{1.0, 0.0};  // overall scale, for the homogeneity tests

  Spinor2 value(double r) const;
  Spinor2 deriv(double r) const;
};

TestSpinor make_test_spinor(int k, std::uint64_t seed);

// real scalar profile for the 1D log-Hardy suite
struct ScalarProfile {
  std::vector<GaussianBump> bumps;  // real amplitudes
  double r_max = 0.0;
  double value(double r) const;
  double deriv(double r) const;
};

ScalarProfile make_scalar_profile(std::uint64_t seed);

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
  double err = 0.0;  // quadrature error budget for lhs + rhs
};

// lhs = int r [ |(d_r + k/r) f+|^2 + |(-d_r + k/r) f-|^2 ] dr
// rhs = int (|f+|^2 + |f-|^2)/r dr
//     + 1/4 int |f(r) - f(R)|^2 / (r log^2(r/R)) dr
Sides hardy_sides(const TestSpinor& f, double R);

// lhs = int r |phi'|^2 dr, rhs = 1/4 int |phi(r) - phi(R)|^2/(r log^2(r/R)) dr
Sides log_hardy_sides(const std::function<double(double)>& phi,
                      const std::function<double(double)>& dphi, double r_max,
                      double R);
Sides log_hardy_sides(const ScalarProfile& phi, double R);

// lhs = int (|f+|^2 + |f-|^2)/r dr
// rhs = int r |((m+ie) f+ + (-d_r + k/r) f-,
//              (d_r + k/r) f+ + (-m+ie) f-)|^2 dr
Sides kato_nenciu_sides(const TestSpinor& f, double m, double eps);

struct FormSides {
  double q_value = 0.0;
  double bound = 0.0;
  double err = 0.0;
};

// q_value = int r |h_free f|^2 dr - int |V_ch f|^2 / r dr with the channel
// potential matrix (nu+mu, lambda; lambda, nu-mu)/r; bound is the log-Hardy
// correction term. Requires sup_norm <= 1.
FormSides form_lower_bound_sides(const TestSpinor& f,
                                 const PotentialParams& params, double R);

// lhs/rhs ratios of the near-extremal family |log(r/R)|^{1/2+eps} (Gaussian
// tapered); strictly decreasing toward 1 as eps decreases.
std::vector<double> sharpness_probe_ratios(std::span<const double> eps_steps,
                                           double R);

struct DrawRecord {
  std::string test;  // "hardy", "kato_nenciu_0_0", ...
  int k = 0;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;      // slack in the asserted direction
  double margin_rel = 0.0;  // margin / scale
  double err = 0.0;
  bool ok = false;
};

struct CorpusReport {
  std::uint64_t base_seed = 0;
  int trials = 0;
  std::vector<int> ks;
  double r_ref = 1.0;
  std::vector<DrawRecord> records;
  std::vector<double> sharpness_ratios;
  double min_margin_rel = 0.0;
  bool sharpness_decreasing = false;
  bool all_ok = false;
};

// Evaluates the Hardy / Kato-Nenciu / log-Hardy / form-bound corpus.
// Draws are seeded independently, so the parallel and serial runners return
// identical reports. Throws SupNormExceeded if params violate the
// form-bound precondition, QuadratureFailure when an error budget blows up.
CorpusReport run_inequality_corpus(const PotentialParams& params,
                                   std::span<const int> ks, int trials,
                                   std::uint64_t seed, double r_ref);
CorpusReport run_inequality_corpus_serial(const PotentialParams& params,
                                          std::span<const int> ks, int trials,
                                          std::uint64_t seed, double r_ref);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dirac
