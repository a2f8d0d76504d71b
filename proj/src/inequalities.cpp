#include "dirac/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "dirac/errors.hpp"
#include "dirac/quadrature.hpp"

namespace dirac {

namespace {

constexpr double kRelSlack = 1e-8;

double sq(double x) { return x * x; }

double norm2sq(const Spinor2& v) {
  return std::norm(v[0]) + std::norm(v[1]);
}

std::vector<double> support_breaks(double r_max, double R) {
  std::vector<double> b;
  for (int i = 1; i <= 16; ++i) b.push_back(r_max * sq(i / 16.0));
  b.push_back(R);
  b.push_back(0.5 * R);
  return b;
}

// 1/4 int |f(r) - f(R)|^2 / (r log^2(r/R)) dr over (0, infinity) for a
// profile supported in [0, r_max]. The integrand is smooth through r = R
// (the numerator vanishes quadratically) but suffers cancellation there, so
// a small window is replaced by its series value. The tails where f = 0 or
// f ~ 0 integrate in closed form.
double correction_term(const std::function<Spinor2(double)>& f,
                       const std::function<Spinor2(double)>& df, double r_max,
                       double R, double* err_out) {
  if (!(R > 0.0) || !(R < r_max))
    throw std::invalid_argument("correction term: need 0 < R < r_max");
  const Spinor2 fR = f(R);
  const double fR2 = norm2sq(fR);

  auto w = [&](double r) {
    const Spinor2 v = f(r);
    const double num = std::norm(v[0] - fR[0]) + std::norm(v[1] - fR[1]);
    const double lg = std::log(r / R);
    return num / (r * lg * lg);
  };

  const double eps_r = 1e-12 * std::min(1.0, R);
  const double delta = 1e-5 * R;

  // head (0, eps_r]: f is constant there to within O(eps_r |f'|)
  const Spinor2 f_eps = f(eps_r);
  const double head_num =
      std::norm(f_eps[0] - fR[0]) + std::norm(f_eps[1] - fR[1]);
  const double head = head_num / std::abs(std::log(eps_r / R));
  // patch [R-delta, R+delta]: w ~ |f'(R)|^2 R^2 / r
  const double dfR2 = norm2sq(df(R));
  const double patch = dfR2 * R * R * std::log((R + delta) / (R - delta));
  // tail [r_max, infinity): f = 0, integrand = fR2/(r log^2(r/R))
  const double tail = fR2 / std::log(r_max / R);

  std::vector<double> brk;
  for (double x = eps_r * 10; x < 0.9 * R; x *= 100) brk.push_back(x);
  brk.push_back(0.5 * R);
  const QuadResult left =
      integrate_adaptive(w, eps_r, R - delta, 1e-14, 1e-9, brk);
  const QuadResult right =
      integrate_adaptive(w, R + delta, r_max, 1e-14, 1e-9,
                         support_breaks(r_max, R));

  const double total = head + left.value + patch + right.value + tail;
  if (err_out) {
    // patch series error is O(delta/R) relative to the patch itself
    *err_out = left.error + right.error + patch * (delta / R) +
               head * 1e-10 + tail * 1e-12;
  }
  return 0.25 * total;
}

struct HardyParts {
  double kinetic = 0.0;   // int r |h_free f|^2
  double inv_r = 0.0;     // int |f|^2 / r
  double err = 0.0;
};

HardyParts hardy_parts(const TestSpinor& f, double m, double eps) {
  // kinetic components with mass/epsilon folded in:
  //   g+ = (m + i eps) f+ + (-d_r + k/r) f-
  //   g- = (d_r + k/r) f+ + (-m + i eps) f-
  const double k = static_cast<double>(f.k);
  auto integrand_kin = [&](double r) {
    if (r <= 0.0) return 0.0;
    const Spinor2 v = f.value(r);
    const Spinor2 d = f.deriv(r);
    const Cx me(m, eps);
    const Cx gp = me * v[0] + (-d[1] + (k / r) * v[1]);
    const Cx gm = (d[0] + (k / r) * v[0]) - std::conj(me) * v[1];
    return r * (std::norm(gp) + std::norm(gm));
  };
  auto integrand_invr = [&](double r) {
    if (r <= 0.0) return 0.0;
    return norm2sq(f.value(r)) / r;
  };
  const auto brk = support_breaks(f.r_max, 1.0);
  const QuadResult kin =
      integrate_adaptive(integrand_kin, 0.0, f.r_max, 1e-14, 1e-10, brk);
  const QuadResult invr =
      integrate_adaptive(integrand_invr, 0.0, f.r_max, 1e-14, 1e-10, brk);
  return {kin.value, invr.value, kin.error + invr.error};
}

void guard_budget(double err, double scale, const char* where) {
  if (err > 1e-6 * std::max(scale, 1e-30))
    throw QuadratureFailure(std::string(where) +
                            ": quadrature error estimate exceeds budget");
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Cx BumpProfile::value(double r) const {
  Cx s = 0.0;
  for (const auto& b : bumps) {
    const double z = (r - b.center) / b.width;
    s += b.amp * std::exp(-0.5 * z * z);
  }
  return s;
}

Cx BumpProfile::deriv(double r) const {
  Cx s = 0.0;
  for (const auto& b : bumps) {
    const double z = (r - b.center) / b.width;
    s += b.amp * std::exp(-0.5 * z * z) * (-z / b.width);
  }
  return s;
}

Spinor2 TestSpinor::value(double r) const {
  if (r >= r_max || r <= 0.0) return {Cx(0), Cx(0)};
  return {amplitude * r * hp.value(r), amplitude * r * hm.value(r)};
}

Spinor2 TestSpinor::deriv(double r) const {
  if (r >= r_max || r <= 0.0) return {Cx(0), Cx(0)};
  return {amplitude * (hp.value(r) + r * hp.deriv(r)),
          amplitude * (hm.value(r) + r * hm.deriv(r))};
}

namespace {

// xorshift-free uniform in [lo, hi] from a running splitmix state
double uniform(std::uint64_t& state, double lo, double hi) {
  state = splitmix64(state);
  const double u = (state >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

BumpProfile draw_profile(std::uint64_t& state, bool complex_amp) {
  BumpProfile p;
  state = splitmix64(state);
  const int n = 1 + static_cast<int>(state % 4);
  for (int i = 0; i < n; ++i) {
    GaussianBump b;
    const double re = uniform(state, -1.0, 1.0);
    const double im = complex_amp ? uniform(state, -1.0, 1.0) : 0.0;
    b.amp = Cx(re, im);
    b.center = uniform(state, 0.3, 2.5);
    b.width = uniform(state, 0.15, 0.8);
    p.bumps.push_back(b);
  }
  return p;
}

double profile_scale(const BumpProfile& p) {
  double s = 0.0;
  for (const auto& b : p.bumps) s += std::abs(b.amp) * b.width;
  return s;
}

}  // namespace

TestSpinor make_test_spinor(int k, std::uint64_t seed) {
  TestSpinor f;
  f.k = k;
  f.seed = seed;
  std::uint64_t state = splitmix64(seed ^ 0x5ca1ab1eULL);
  for (int attempt = 0; attempt < 16; ++attempt) {
    f.hp = draw_profile(state, true);
    f.hm = draw_profile(state, true);
    if (profile_scale(f.hp) + profile_scale(f.hm) > 1e-6) break;
    // degenerate draw: regenerate from a perturbed state
    state = splitmix64(state ^ 0xdeadbeefULL);
  }
  double rm = 0.0;
  for (const auto& b : f.hp.bumps) rm = std::max(rm, b.center + 12 * b.width);
  for (const auto& b : f.hm.bumps) rm = std::max(rm, b.center + 12 * b.width);
  f.r_max = std::max(rm, 2.5);
  return f;
}

ScalarProfile make_scalar_profile(std::uint64_t seed) {
  ScalarProfile p;
  std::uint64_t state = splitmix64(seed ^ 0x0ddba11ULL);
  for (int attempt = 0; attempt < 16; ++attempt) {
    BumpProfile bp = draw_profile(state, false);
    p.bumps = bp.bumps;
    if (profile_scale(bp) > 1e-6) break;
    state = splitmix64(state ^ 0xdeadbeefULL);
  }
  double rm = 0.0;
  for (const auto& b : p.bumps) rm = std::max(rm, b.center + 12 * b.width);
  p.r_max = std::max(rm, 2.5);
  return p;
}

double ScalarProfile::value(double r) const {
  if (r >= r_max || r < 0.0) return 0.0;
  double s = 0.0;
  for (const auto& b : bumps) {
    const double z = (r - b.center) / b.width;
    s += b.amp.real() * std::exp(-0.5 * z * z);
  }
  return s;
}

double ScalarProfile::deriv(double r) const {
  if (r >= r_max || r < 0.0) return 0.0;
  double s = 0.0;
  for (const auto& b : bumps) {
    const double z = (r - b.center) / b.width;
    s += b.amp.real() * std::exp(-0.5 * z * z) * (-z / b.width);
  }
  return s;
}

Sides hardy_sides(const TestSpinor& f, double R) {
  if (!(R > 0.0 && R < f.r_max))
    throw std::invalid_argument("hardy_sides: R must lie inside the support");
  const HardyParts parts = hardy_parts(f, 0.0, 0.0);
  double corr_err = 0.0;
  const double corr =
      correction_term([&](double r) { return f.value(r); },
                      [&](double r) { return f.deriv(r); }, f.r_max, R,
                      &corr_err);
  Sides s;
  s.lhs = parts.kinetic;
  s.rhs = parts.inv_r + corr;
  s.err = parts.err + corr_err;
  guard_budget(s.err, std::max(s.lhs, s.rhs), "hardy_sides");
  return s;
}

Sides log_hardy_sides(const std::function<double(double)>& phi,
                      const std::function<double(double)>& dphi, double r_max,
                      double R) {
  if (!(R > 0.0 && R < r_max))
    throw std::invalid_argument("log_hardy_sides: need 0 < R < r_max");
  auto lhs_f = [&](double r) { return r * sq(dphi(r)); };
  const QuadResult lhs = integrate_adaptive(lhs_f, 0.0, r_max, 1e-14, 1e-10,
                                            support_breaks(r_max, R));
  double corr_err = 0.0;
  const double corr = correction_term(
      [&](double r) { return Spinor2{Cx(phi(r)), Cx(0)}; },
      [&](double r) { return Spinor2{Cx(dphi(r)), Cx(0)}; }, r_max, R,
      &corr_err);
  Sides s;
  s.lhs = lhs.value;
  s.rhs = corr;
  s.err = lhs.error + corr_err;
  guard_budget(s.err, std::max(s.lhs, s.rhs), "log_hardy_sides");
  return s;
}

Sides log_hardy_sides(const ScalarProfile& phi, double R) {
  return log_hardy_sides([&](double r) { return phi.value(r); },
                         [&](double r) { return phi.deriv(r); }, phi.r_max, R);
}

Sides kato_nenciu_sides(const TestSpinor& f, double m, double eps) {
  const HardyParts parts = hardy_parts(f, m, eps);
  Sides s;
  s.lhs = parts.inv_r;
  s.rhs = parts.kinetic;
  s.err = parts.err;
  guard_budget(s.err, std::max(s.lhs, s.rhs), "kato_nenciu_sides");
  return s;
}

FormSides form_lower_bound_sides(const TestSpinor& f,
                                 const PotentialParams& params, double R) {
  if (params.sup_norm > 1.0 + 1e-12)
    throw SupNormExceeded("form_lower_bound_sides: sup_x |x||V(x)| = " +
                          std::to_string(params.sup_norm) + " > 1");
  const HardyParts parts = hardy_parts(f, 0.0, 0.0);
  auto pot = [&](double r) {
    if (r <= 0.0) return 0.0;
    const Spinor2 v = f.value(r);
    const Cx w0 = (params.nu + params.mu) * v[0] + params.lambda * v[1];
    const Cx w1 = params.lambda * v[0] + (params.nu - params.mu) * v[1];
    return (std::norm(w0) + std::norm(w1)) / r;
  };
  const QuadResult potq = integrate_adaptive(
      pot, 0.0, f.r_max, 1e-14, 1e-10, support_breaks(f.r_max, R));
  double corr_err = 0.0;
  const double corr =
      correction_term([&](double r) { return f.value(r); },
                      [&](double r) { return f.deriv(r); }, f.r_max, R,
                      &corr_err);
  FormSides s;
  s.q_value = parts.kinetic - potq.value;
  s.bound = corr;
  s.err = parts.err + potq.error + corr_err;
  guard_budget(s.err, std::max(std::abs(s.q_value), s.bound) + 1.0,
               "form_lower_bound_sides");
  return s;
}

std::vector<double> sharpness_probe_ratios(std::span<const double> eps_steps,
                                           double R) {
  (void)R;  // the family is scale-free in u = log(r/R)
  const double U = 8.0;
  std::vector<double> out;
  for (double eps : eps_steps) {
    const double s = 0.5 + eps;
    auto taper = [&](double u) { return std::exp(-(u / U) * (u / U)); };
    auto dphi_u = [&](double u) {
      return (s * std::pow(u, s - 1.0) -
              2.0 * u / (U * U) * std::pow(u, s)) * taper(u);
    };
    auto phi_u = [&](double u) { return std::pow(u, s) * taper(u); };
    const double del = 1e-4;
    // analytic patches over |u| <= del (pure-power part; taper is 1 there)
    const double patch_lhs = 2.0 * s * s * std::pow(del, 2 * s - 1) /
                             (2 * s - 1);
    const double patch_rhs = 2.0 * std::pow(del, 2 * s - 1) / (2 * s - 1);
    auto lhs_f = [&](double u) { return sq(dphi_u(u)); };
    auto rhs_f = [&](double u) { return sq(phi_u(u) / u); };
    const double brks[] = {1e-3, 0.01, 0.1, 1.0, U};
    const QuadResult lq =
        integrate_adaptive(lhs_f, del, 5 * U, 1e-14, 1e-9, brks);
    const QuadResult rq =
        integrate_adaptive(rhs_f, del, 5 * U, 1e-14, 1e-9, brks);
    const double lhs = patch_lhs + 2.0 * lq.value;
    const double rhs = 0.25 * (patch_rhs + 2.0 * rq.value);
    out.push_back(lhs / rhs);
  }
  return out;
}

namespace {

struct Task {
  int k;
  int draw;
  std::uint64_t seed;
};

std::vector<DrawRecord> evaluate_draw(const PotentialParams& params,
                                      const Task& task, double R) {
  std::vector<DrawRecord> recs;
  const TestSpinor f = make_test_spinor(task.k, task.seed);

  auto push = [&](const char* name, double lhs, double rhs, double margin,
                  double err) {
    DrawRecord r;
    r.test = name;
    r.k = task.k;
    r.seed = task.seed;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = margin;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    r.margin_rel = margin / scale;
    r.err = err;
    r.ok = margin >= -(kRelSlack * scale + err);
    recs.push_back(std::move(r));
  };

  const Sides h = hardy_sides(f, R);
  push("hardy", h.lhs, h.rhs, h.lhs - h.rhs, h.err);

  const Sides kn0 = kato_nenciu_sides(f, 0.0, 0.0);
  push("kato_nenciu_0_0", kn0.lhs, kn0.rhs, kn0.rhs - kn0.lhs, kn0.err);

  const Sides kn1 = kato_nenciu_sides(f, 1.0, 0.5);
  push("kato_nenciu_1_0.5", kn1.lhs, kn1.rhs, kn1.rhs - kn1.lhs, kn1.err);

  const ScalarProfile phi = make_scalar_profile(task.seed);
  const Sides lh = log_hardy_sides(phi, R);
  push("log_hardy", lh.lhs, lh.rhs, lh.lhs - lh.rhs, lh.err);

  const FormSides fb = form_lower_bound_sides(f, params, R);
  push("form_bound", fb.q_value, fb.bound, fb.q_value - fb.bound, fb.err);

  return recs;
}

CorpusReport run_corpus_impl(const PotentialParams& params,
                             std::span<const int> ks, int trials,
                             std::uint64_t seed, double r_ref, bool parallel) {
  if (trials < 1)
    throw std::invalid_argument("inequality corpus: trials must be >= 1");
  if (params.sup_norm > 1.0 + 1e-12)
    throw SupNormExceeded("inequality corpus: sup_x |x||V(x)| = " +
                          std::to_string(params.sup_norm) + " > 1");
  CorpusReport rep;
  rep.base_seed = seed;
  rep.trials = trials;
  rep.ks.assign(ks.begin(), ks.end());
  rep.r_ref = r_ref;

  std::vector<Task> tasks;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    for (int i = 0; i < trials; ++i) {
      const std::uint64_t ds =
          splitmix64(seed ^ (static_cast<std::uint64_t>(ki) << 40) ^
                     static_cast<std::uint64_t>(i));
      tasks.push_back(Task{ks[ki], i, ds});
    }
  }

  std::vector<std::vector<DrawRecord>> results(tasks.size());
  std::string failure;
  bool failed = false;

  const long long n_tasks = static_cast<long long>(tasks.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long t = 0; t < n_tasks; ++t) {
      try {
        results[t] = evaluate_draw(params, tasks[t], r_ref);
      } catch (const std::exception& ex) {
#pragma omp critical
        {
          failed = true;
          failure = ex.what();
        }
      }
    }
  } else {
    for (long long t = 0; t < n_tasks; ++t)
      results[t] = evaluate_draw(params, tasks[t], r_ref);
  }
  if (failed) throw QuadratureFailure("inequality corpus: " + failure);

  rep.min_margin_rel = 1e300;
  rep.all_ok = true;
  for (auto& batch : results) {
    for (auto& r : batch) {
      rep.min_margin_rel = std::min(rep.min_margin_rel, r.margin_rel);
      rep.all_ok = rep.all_ok && r.ok;
      rep.records.push_back(std::move(r));
    }
  }

  const double eps_steps[] = {0.8, 0.4, 0.2, 0.1, 0.05};
  rep.sharpness_ratios = sharpness_probe_ratios(eps_steps, r_ref);
  rep.sharpness_decreasing = true;
  for (std::size_t i = 0; i + 1 < rep.sharpness_ratios.size(); ++i) {
    if (!(rep.sharpness_ratios[i] > rep.sharpness_ratios[i + 1]))
      rep.sharpness_decreasing = false;
  }
  rep.all_ok = rep.all_ok && rep.sharpness_decreasing;
  return rep;
}

}  // namespace

CorpusReport run_inequality_corpus(const PotentialParams& params,
                                   std::span<const int> ks, int trials,
                                   std::uint64_t seed, double r_ref) {
  return run_corpus_impl(params, ks, trials, seed, r_ref, true);
}

CorpusReport run_inequality_corpus_serial(const PotentialParams& params,
                                          std::span<const int> ks, int trials,
                                          std::uint64_t seed, double r_ref) {
  return run_corpus_impl(params, ks, trials, seed, r_ref, false);
}

}  // namespace dirac
