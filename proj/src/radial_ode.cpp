#include "dirac/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dirac/errors.hpp"
#include "dirac/rk45.hpp"

namespace dirac {

namespace {

using D2 = std::array<double, 2>;

// d/dt with t = log r; the Fuchsian origin becomes a regular endpoint
template <class State>
struct LogRhs {
  double kl, e_plus_m, e_minus_m, nu_minus_mu, nu_plus_mu;
  void operator()(double t, const State& y, State& dy) const {
    const double r = std::exp(t);
    dy[0] = -kl * y[0] + (e_plus_m * r - nu_minus_mu) * y[1];
    dy[1] = kl * y[1] - (e_minus_m * r - nu_plus_mu) * y[0];
  }
};

template <class State>
LogRhs<State> make_rhs(const PotentialParams& p, int k, double energy) {
  return LogRhs<State>{static_cast<double>(k) + p.lambda, energy + p.mass,
                       energy - p.mass, p.nu - p.mu, p.nu + p.mu};
}

// exp(s N) g in closed form; N^2 = delta I
D2 exp_n_apply(const PotentialParams& p, int k, double s, const D2& g) {
  const double kl = static_cast<double>(k) + p.lambda;
  const double del = delta(p, k);
  double ch, sh;
  if (del > kRegimeTol) {
    const double gam = std::sqrt(del);
    ch = std::cosh(gam * s);
    sh = std::sinh(gam * s) / gam;
  } else if (del < -kRegimeTol) {
    const double gam = std::sqrt(-del);
    ch = std::cos(gam * s);
    sh = std::sin(gam * s) / gam;
  } else {
    ch = 1.0;
    sh = s;
  }
  const double n0 = -kl * g[0] + (p.mu - p.nu) * g[1];
  const double n1 = (p.mu + p.nu) * g[0] + kl * g[1];
  return {ch * g[0] + sh * n0, ch * g[1] + sh * n1};
}

// rotate a self-adjoint scalar row onto the real axis; nullopt when the row
// cannot be made real (Im(a conj b) != 0)
std::optional<D2> canonical_row(const RelationRow& row) {
  const double na = std::abs(row.a), nb = std::abs(row.b);
  if (na + nb == 0.0) return std::nullopt;
  const Cx big = (na >= nb) ? row.a : row.b;
  const Cx phase = std::conj(big) / std::abs(big);
  const Cx a = row.a * phase;
  const Cx b = row.b * phase;
  const double scale = std::max(std::abs(a), std::abs(b));
  if (std::max(std::abs(a.imag()), std::abs(b.imag())) > 1e-10 * scale)
    return std::nullopt;
  return D2{a.real(), b.real()};
}

double matching_radius(const PotentialParams& p) {
  return std::max(1.0, 1.0 / p.mass);
}

void require_gap(const PotentialParams& p, double energy) {
  if (!(p.mass > 0.0))
    throw EnergyOutsideGap("mass gap (-m, m) is empty for m <= 0");
  if (!(std::abs(energy) < p.mass))
    throw EnergyOutsideGap("energy " + std::to_string(energy) +
                           " outside the gap (-" + std::to_string(p.mass) +
                           ", " + std::to_string(p.mass) + ")");
}

// outward start vector at r0 (real path used by the shooting kernel)
D2 outward_start(const PotentialParams& p, int k,
                 const std::optional<RelationRow>& row, double r0) {
  const ChannelClassification cls = classify_channel(p, k);
  if (!row.has_value()) {
    if (cls.regime != Regime::EssentiallySelfAdjoint)
      throw std::invalid_argument(
          "outward start: channel needs a boundary relation row");
    const Spinor2 v = small_r_recessive_data(p, k, r0);
    return {v[0].real(), v[1].real()};
  }
  if (cls.regime == Regime::EssentiallySelfAdjoint)
    throw std::invalid_argument(
        "outward start: essentially self-adjoint channel takes no boundary "
        "condition");
  if (std::abs(row->a) + std::abs(row->b) == 0.0)
    throw DegenerateRelation("relation row (0, 0)");
  const auto canon = canonical_row(*row);
  if (!canon.has_value())
    throw std::invalid_argument(
        "outward start: relation row is not self-adjoint (Im(a conj b) != 0)");
  // solution ray (Gamma+, Gamma-) = (b, a); exp(N log r0) applied to it is
  // the model value and is exactly real
  const D2 gamma{(*canon)[1], (*canon)[0]};
  return exp_n_apply(p, k, std::log(r0), gamma);
}

struct Shot {
  D2 out_v;  // outward solution at r_c
  D2 in_v;   // inward solution at r_c
};

Shot shoot(const PotentialParams& p, int k,
           const std::optional<RelationRow>& row, double energy,
           const SolveOptions& opts) {
  require_gap(p, energy);
  const double r_c = matching_radius(p);
  const double r0 = std::min(opts.r0, 0.5 * r_c);

  Rk45Options rk{opts.abs_tol, opts.rel_tol, 0.0, 2'000'000};
  const auto rhs = make_rhs<D2>(p, k, energy);

  Shot s;
  s.out_v = outward_start(p, k, row, r0);
  rk45_integrate(rhs, std::log(r0), std::log(r_c), s.out_v, rk);

  const LargeRData ld = large_r_decaying_data(p, k, energy, opts.r_inf);
  s.in_v = {ld.direction[0].real(), ld.direction[1].real()};
  rk45_integrate(rhs, std::log(ld.r_inf), std::log(r_c), s.in_v, rk);
  return s;
}

double norm2(const D2& v) { return std::hypot(v[0], v[1]); }

}  // namespace

Spinor2 radial_rhs(const PotentialParams& p, int k, double energy, double r,
                   const Spinor2& state) {
  if (!(r > 0.0)) throw std::invalid_argument("radial_rhs: r must be positive");
  const double kl = static_cast<double>(k) + p.lambda;
  return {-(kl / r) * state[0] +
              (energy + p.mass - (p.nu - p.mu) / r) * state[1],
          (kl / r) * state[1] -
              (energy - p.mass - (p.nu + p.mu) / r) * state[0]};
}

Spinor2 small_r_initial_data(const PotentialParams& p, int k,
                             const RelationRow& row, double r0) {
  if (std::abs(row.a) + std::abs(row.b) == 0.0)
    throw DegenerateRelation("small_r_initial_data: relation row (0, 0)");
  const ChannelClassification cls = classify_channel(p, k);
  if (cls.regime == Regime::EssentiallySelfAdjoint)
    throw std::invalid_argument(
        "small_r_initial_data: essentially self-adjoint channel");
  const Spinor2 gamma{row.b, row.a};
  Spinor2 coeffs;
  if (cls.regime == Regime::Critical) {
    coeffs = gamma;
  } else {
    const ConnectionMatrix cm = connection_matrix(p, k);
    coeffs = cm.entries.inverse().apply(gamma);
  }
  return asymptotic_model(p, k, coeffs, r0);
}

Spinor2 small_r_recessive_data(const PotentialParams& p, int k, double r0) {
  const ChannelClassification cls = classify_channel(p, k);
  if (cls.delta <= kRegimeTol)
    throw std::invalid_argument(
        "small_r_recessive_data: needs delta > 0 (power-type asymptotics)");
  const double kl = static_cast<double>(k) + p.lambda;
  const double g = cls.gamma;
  // +gamma eigenvector of the 1/r coefficient matrix
  double v0 = kl - g, v1 = -(p.nu + p.mu);
  const double scale = std::max({1.0, std::abs(kl), g});
  if (std::hypot(v0, v1) <= kRegimeTol * scale) {
    v0 = p.mu - p.nu;
    v1 = 2.0 * g;
  }
  const double n = std::hypot(v0, v1);
  const double rg = std::pow(r0, g);
  return {Cx(v0 / n * rg, 0.0), Cx(v1 / n * rg, 0.0)};
}

Spinor2 small_r_model_from_boundary(const PotentialParams& p, int k,
                                    const Spinor2& gamma, double r) {
  const D2 gr{gamma[0].real(), gamma[1].real()};
  const D2 gi{gamma[0].imag(), gamma[1].imag()};
  const D2 yr = exp_n_apply(p, k, std::log(r), gr);
  const D2 yi = exp_n_apply(p, k, std::log(r), gi);
  return {Cx(yr[0], yi[0]), Cx(yr[1], yi[1])};
}

LargeRData large_r_decaying_data(const PotentialParams& p, int k, double energy,
                                 double r_inf) {
  (void)k;  // the 1/r matrix does not enter the leading order
  require_gap(p, energy);
  LargeRData out;
  out.kappa = std::sqrt((p.mass - energy) * (p.mass + energy));
  out.sigma = -(p.nu * energy + p.mu * p.mass) / out.kappa;
  const double r_c = matching_radius(p);
  if (r_inf <= 0.0) {
    out.r_inf = std::max(2.0 * r_c, 40.0 / out.kappa);
  } else {
    if (out.kappa * (r_inf - r_c) < 20.0)
      throw std::invalid_argument(
          "large_r_decaying_data: r_inf gives fewer than 20 e-foldings of "
          "decay before the matching radius (grow r_inf like 1/kappa)");
    out.r_inf = r_inf;
  }
  const double vn = std::hypot(energy + p.mass, out.kappa);
  out.direction = {Cx((energy + p.mass) / vn, 0.0), Cx(-out.kappa / vn, 0.0)};
  out.log_scale = out.sigma * std::log(out.r_inf) - out.kappa * out.r_inf +
                  std::log(vn);
  const double pref = std::exp(out.log_scale);
  out.value = {out.direction[0] * pref, out.direction[1] * pref};
  return out;
}

double matching_determinant(const PotentialParams& p, int k,
                            const std::optional<RelationRow>& row,
                            double energy, const SolveOptions& opts) {
  const Shot s = shoot(p, k, row, energy, opts);
  const double den = norm2(s.out_v) * norm2(s.in_v);
  if (!(den > 0.0) || !std::isfinite(den))
    throw MatchingIllConditioned(
        "matching_determinant: degenerate shooting solution at E = " +
        std::to_string(energy));
  return (s.out_v[0] * s.in_v[1] - s.out_v[1] * s.in_v[0]) / den;
}

std::vector<double> scan_matching_determinant_serial(
    const PotentialParams& p, int k, const std::optional<RelationRow>& row,
    double e_lo, double e_hi, int n, const SolveOptions& opts) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double e = e_lo + (e_hi - e_lo) * i / (n - 1);
    out[i] = matching_determinant(p, k, row, e, opts);
  }
  return out;
}

std::vector<double> scan_matching_determinant(
    const PotentialParams& p, int k, const std::optional<RelationRow>& row,
    double e_lo, double e_hi, int n, const SolveOptions& opts) {
  std::vector<double> out(n);
  bool failed = false;
  std::string msg;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      const double e = e_lo + (e_hi - e_lo) * i / (n - 1);
      out[i] = matching_determinant(p, k, row, e, opts);
    } catch (const std::exception& ex) {
#pragma omp critical
      {
        failed = true;
        msg = ex.what();
      }
    }
  }
  if (failed) throw MatchingIllConditioned("scan failed: " + msg);
  return out;
}

std::vector<double> make_radial_grid(double r_lo, double r_hi,
                                     const GridSpec& spec) {
  std::vector<double> pts;
  const double r_break = std::min(1.0, r_hi);
  if (r_lo < r_break) {
    const double t0 = std::log10(r_lo), t1 = std::log10(r_break);
    const int n = std::max(2, static_cast<int>(std::ceil(
                                  (t1 - t0) * spec.pts_per_decade)));
    for (int i = 0; i <= n; ++i)
      pts.push_back(std::pow(10.0, t0 + (t1 - t0) * i / n));
  }
  if (r_hi > r_break) {
    const double dr =
        std::max(spec.dr_large, (r_hi - r_break) / 4000.0);
    const int n = std::max(1, static_cast<int>(std::ceil((r_hi - r_break) / dr)));
    for (int i = (r_lo < r_break ? 1 : 0); i <= n; ++i)
      pts.push_back(r_break + (r_hi - r_break) * i / n);
    if (r_lo >= r_break) pts.insert(pts.begin(), r_lo);
  }
  for (double e : spec.extra)
    if (e >= r_lo && e <= r_hi) pts.push_back(e);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) {
                          return std::abs(a - b) <= 1e-12 * std::max(a, b);
                        }),
            pts.end());
  pts.front() = r_lo;
  pts.back() = r_hi;
  return pts;
}

RadialSolution integrate_channel(const PotentialParams& p, int k, double energy,
                                 const Spinor2& y_at_r_lo, double r_lo,
                                 double r_hi, const GridSpec& spec,
                                 double abs_tol, double rel_tol) {
  const bool forward = r_hi >= r_lo;
  const double lo = std::min(r_lo, r_hi), hi = std::max(r_lo, r_hi);
  std::vector<double> grid = make_radial_grid(lo, hi, spec);

  std::vector<double> t_checks(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    t_checks[i] = std::log(grid[forward ? i : grid.size() - 1 - i]);

  RadialSolution sol;
  sol.k = k;
  sol.energy = energy;
  sol.tolerances = {abs_tol, rel_tol};
  sol.grid = grid;
  sol.values.assign(grid.size(), Spinor2{});
  sol.derivs.assign(grid.size(), Spinor2{});

  using State = std::array<Cx, 2>;
  State y{y_at_r_lo[0], y_at_r_lo[1]};
  const auto rhs = make_rhs<State>(p, k, energy);
  Rk45Options rk{abs_tol, rel_tol, 0.0, 2'000'000};

  std::size_t write = forward ? 0 : grid.size() - 1;
  auto record = [&](double t, const State& v) {
    const double r = std::exp(t);
    sol.values[write] = {v[0], v[1]};
    sol.derivs[write] = radial_rhs(p, k, energy, r, sol.values[write]);
    if (forward) ++write; else --write;
  };
  // record the start point, then let checkpoints drive the rest
  record(t_checks.front(), y);
  rk45_integrate(rhs, t_checks.front(), t_checks.back(), y, rk,
                 std::span<const double>(t_checks).subspan(1), record);
  sol.norm_sq = l2_norm_sq(sol);
  return sol;
}

EigenvalueResult eigenvalues_in_gap(const PotentialParams& p, int k,
                                    const std::optional<RelationRow>& row,
                                    double window_lo, double window_hi,
                                    const SolveOptions& opts) {
  EigenvalueResult res;
  res.k = k;
  if (row) res.relation_row = *row;

  if (!(p.mass > 0.0))
    throw EnergyOutsideGap("mass gap (-m, m) is empty for m <= 0");
  const double m = p.mass;
  const double lo = std::max(window_lo, -m * (1.0 - 1e-9));
  const double hi = std::min(window_hi, m * (1.0 - 1e-9));
  if (!(lo < hi)) return res;  // empty window: empty result, not a failure

  const int n = std::max(8, opts.scan_points);
  const std::vector<double> ws =
      scan_matching_determinant(p, k, row, lo, hi, n, opts);
  auto energy_at = [&](int i) { return lo + (hi - lo) * i / (n - 1); };
  auto w_of = [&](double e) { return matching_determinant(p, k, row, e, opts); };

  const double e_tol = 1e-10 * std::max(1.0, m);

  std::vector<double> roots;
  for (int i = 0; i + 1 < n && static_cast<int>(roots.size()) < opts.max_count;
       ++i) {
    double e1 = energy_at(i), e2 = energy_at(i + 1);
    double w1 = ws[i], w2 = ws[i + 1];
    if (w1 == 0.0) {
      roots.push_back(e1);
      continue;
    }
    if (!(w1 * w2 < 0.0)) continue;
    // secant with bisection fallback inside the bracket
    double a = e1, b = e2, wa = w1, wb = w2;
    double x0 = a, x1 = b, f0 = wa, f1 = wb;
    for (int iter = 0; iter < 80; ++iter) {
      double x2;
      if (f1 != f0) {
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 > a && x2 < b)) x2 = 0.5 * (a + b);
      } else {
        x2 = 0.5 * (a + b);
      }
      const double f2 = w_of(x2);
      if (f2 == 0.0 || std::abs(x2 - x1) <= e_tol || (b - a) <= e_tol) {
        x1 = x2;
        break;
      }
      if (wa * f2 < 0.0) {
        b = x2;
        wb = f2;
      } else {
        a = x2;
        wa = f2;
      }
      x0 = x1;
      f0 = f1;
      x1 = x2;
      f1 = f2;
    }
    roots.push_back(x1);
  }

  // assemble eigenfunctions and re-check their boundary data
  const ChannelClassification cls = classify_channel(p, k);
  const double r_c = matching_radius(p);
  for (double e : roots) {
    const double r0 = std::min(opts.r0, std::min(0.5 * r_c, opts.fit_window.lo));
    GridSpec out_spec;
    // forced samples: epsilon ladder for the boundary window
    for (int i = 0; i < 10; ++i)
      out_spec.extra.push_back(opts.fit_window.hi / std::pow(2.0, i));

    const D2 y0 = outward_start(p, k, row, r0);
    RadialSolution part_out =
        integrate_channel(p, k, e, {Cx(y0[0]), Cx(y0[1])}, r0, r_c, out_spec,
                          opts.abs_tol, opts.rel_tol);

    const LargeRData ld = large_r_decaying_data(p, k, e, opts.r_inf);
    GridSpec in_spec;
    RadialSolution part_in = integrate_channel(
        p, k, e, ld.direction, ld.r_inf, r_c, in_spec, opts.abs_tol,
        opts.rel_tol);

    // align the inward branch with the outward one at r_c
    const Spinor2 vo = part_out.values.back();
    const Spinor2 vi = part_in.values.front();
    const Cx num = std::conj(vi[0]) * vo[0] + std::conj(vi[1]) * vo[1];
    const double den = std::norm(vi[0]) + std::norm(vi[1]);
    if (!(den > 0.0))
      throw MatchingIllConditioned("eigenfunction assembly: zero inward value");
    const Cx s = num / den;

    RadialSolution full;
    full.k = k;
    full.energy = e;
    full.tolerances = {opts.abs_tol, opts.rel_tol};
    full.grid = part_out.grid;
    full.values = part_out.values;
    full.derivs = part_out.derivs;
    for (std::size_t i = 1; i < part_in.grid.size(); ++i) {
      full.grid.push_back(part_in.grid[i]);
      full.values.push_back({s * part_in.values[i][0], s * part_in.values[i][1]});
      full.derivs.push_back({s * part_in.derivs[i][0], s * part_in.derivs[i][1]});
    }
    const double nsq = l2_norm_sq(full);
    const double inv = 1.0 / std::sqrt(nsq);
    for (std::size_t i = 0; i < full.values.size(); ++i) {
      for (int c = 0; c < 2; ++c) {
        full.values[i][c] *= inv;
        full.derivs[i][c] *= inv;
      }
    }
    full.norm_sq = l2_norm_sq(full);

    res.eigenvalues.push_back(e);
    res.match_defects.push_back(std::abs(w_of(e)));
    res.energy_error_estimates.push_back(
        e_tol + 100.0 * opts.rel_tol * std::max(std::abs(e), 0.1 * m));
    if (cls.regime != Regime::EssentiallySelfAdjoint) {
      res.boundary_checks.push_back(
          extract_boundary_data(full, p, k, opts.fit_window));
    }
    res.eigenfunctions.push_back(std::move(full));
  }
  return res;
}

double max_fd_residual(const RadialSolution& sol, const PotentialParams& p) {
  double worst = 0.0;
  const double kl = static_cast<double>(sol.k) + p.lambda;
  for (std::size_t i = 1; i + 1 < sol.grid.size(); ++i) {
    const double hl = sol.grid[i] - sol.grid[i - 1];
    const double hr = sol.grid[i + 1] - sol.grid[i];
    const double r = sol.grid[i];
    Spinor2 fd;
    for (int c = 0; c < 2; ++c) {
      fd[c] = -hr / (hl * (hl + hr)) * sol.values[i - 1][c] +
              (hr - hl) / (hl * hr) * sol.values[i][c] +
              hl / (hr * (hl + hr)) * sol.values[i + 1][c];
    }
    const Spinor2& f = sol.values[i];
    const Cx h0 = (p.mass + (p.nu + p.mu) / r) * f[0] - fd[1] + (kl / r) * f[1];
    const Cx h1 = fd[0] + (kl / r) * f[0] + (-p.mass + (p.nu - p.mu) / r) * f[1];
    const Cx r0 = h0 - sol.energy * f[0];
    const Cx r1 = h1 - sol.energy * f[1];
    const double fmag = std::sqrt(std::norm(f[0]) + std::norm(f[1]));
    const double dmag = std::sqrt(std::norm(fd[0]) + std::norm(fd[1]));
    const double scale = (std::abs(sol.energy) + p.mass +
                          (std::abs(kl) + std::abs(p.nu) + std::abs(p.mu)) / r) *
                             fmag +
                         dmag;
    if (scale > 0.0) {
      const double rel =
          std::sqrt(std::norm(r0) + std::norm(r1)) / scale;
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

void write_radial_csv(std::ostream& os, const RadialSolution& sol) {
  os << "r,re_fp,im_fp,re_fm,im_fm\n";
  char buf[256];
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  sol.grid[i], sol.values[i][0].real(), sol.values[i][0].imag(),
                  sol.values[i][1].real(), sol.values[i][1].imag());
    os << buf;
  }
}

}  // namespace dirac
