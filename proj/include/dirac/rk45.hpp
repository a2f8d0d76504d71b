#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace dirac {

// Dormand-Prince 5(4) embedded pair, adaptive steps. The state is a fixed
// array of doubles or complex doubles; integration direction follows
// sign(t1 - t0). Checkpoints (sorted in the direction of travel) force step
// endpoints, which is how sampled output grids are produced.
struct Rk45Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double h_init = 0.0;       // 0 = automatic
  std::size_t max_steps = 2'000'000;
};

template <class State, class Rhs, class Sink>
void rk45_integrate(Rhs&& rhs, double t0, double t1, State& y,
                    const Rk45Options& opts, std::span<const double> checkpoints,
                    Sink&& sink) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  if (span == 0.0) return;

  auto mag = [](const auto& v) { return std::abs(v); };

  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  rhs(t0, y, k1);

  double t = t0;
  double h = opts.h_init > 0 ? opts.h_init : span / 100.0;
  h = std::min(h, span);

  std::size_t next_cp = 0;
  auto cp_passed = [&](double tc) {
    return dir > 0 ? tc <= t0 : tc >= t0;
  };
  while (next_cp < checkpoints.size() && cp_passed(checkpoints[next_cp]))
    ++next_cp;

  for (std::size_t step = 0; step < opts.max_steps; ++step) {
    if (dir * (t - t1) >= 0.0) return;
    double h_eff = std::min(h, std::abs(t1 - t));
    bool hit_cp = false;
    if (next_cp < checkpoints.size()) {
      const double to_cp = std::abs(checkpoints[next_cp] - t);
      if (to_cp <= h_eff * (1 + 1e-12)) {
        h_eff = to_cp;
        hit_cp = true;
      }
    }
    const double hs = dir * h_eff;

    for (std::size_t i = 0; i < y.size(); ++i)
      ytmp[i] = y[i] + hs * (a21 * k1[i]);
    rhs(t + c2 * hs, ytmp, k2);
    for (std::size_t i = 0; i < y.size(); ++i)
      ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * hs, ytmp, k3);
    for (std::size_t i = 0; i < y.size(); ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hs, ytmp, k4);
    for (std::size_t i = 0; i < y.size(); ++i)
      ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                             a54 * k4[i]);
    rhs(t + c5 * hs, ytmp, k5);
    for (std::size_t i = 0; i < y.size(); ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
    rhs(t + hs, ytmp, k6);
    for (std::size_t i = 0; i < y.size(); ++i)
      ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                             b5 * k5[i] + b6 * k6[i]);
    rhs(t + hs, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                            e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          opts.abs_tol + opts.rel_tol * std::max(mag(y[i]), mag(ynew[i]));
      const double r = mag(ei) / sc;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(y.size()));

    if (err <= 1.0 || h_eff <= 1e-14 * std::max(1.0, std::abs(t))) {
      t += hs;
      y = ynew;
      k1 = k7;  // FSAL
      if (hit_cp) {
        sink(t, y);
        ++next_cp;
      }
      const double fac =
          std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
      h = std::min(h_eff * fac, span);
    } else {
      const double fac =
          std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
      h = h_eff * fac;
    }
  }
  throw std::runtime_error("rk45_integrate: step budget exhausted");
}

// convenience: no checkpoints, no sink
template <class State, class Rhs>
void rk45_integrate(Rhs&& rhs, double t0, double t1, State& y,
                    const Rk45Options& opts = {}) {
  rk45_integrate(rhs, t0, t1, y, opts, {},
                 [](double, const State&) {});
}

}  // namespace dirac
