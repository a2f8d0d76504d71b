#include "dirac/boundary.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "dirac/errors.hpp"

namespace dirac {

Mat2 Mat2::inverse() const {
  const Cx d = det();
  if (std::abs(d) == 0.0)
    throw std::invalid_argument("Mat2::inverse: singular matrix");
  Mat2 out;
  out.m[0][0] = m[1][1] / d;
  out.m[0][1] = -m[0][1] / d;
  out.m[1][0] = -m[1][0] / d;
  out.m[1][1] = m[0][0] / d;
  return out;
}

Spinor2 Mat2::apply(const Spinor2& v) const {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

Mat2 Mat2::operator*(const Mat2& o) const {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
  return out;
}

Mat2 log_model_matrix(const PotentialParams& p, int k) {
  Mat2 M;
  const double kl = static_cast<double>(k) + p.lambda;
  M(0, 0) = -kl;
  M(0, 1) = -p.nu + p.mu;
  M(1, 0) = p.nu + p.mu;
  M(1, 1) = kl;
  return M;
}

ConnectionMatrix connection_matrix(const PotentialParams& p, int k) {
  const ChannelClassification cls = classify_channel(p, k);
  if (cls.regime == Regime::EssentiallySelfAdjoint) {
    throw std::invalid_argument(
        "connection_matrix: essentially self-adjoint channel has no "
        "boundary data");
  }
  ConnectionMatrix out;
  out.k = k;
  out.regime = cls.regime;
  const double kl = static_cast<double>(k) + p.lambda;
  const double g = cls.gamma;

  switch (cls.regime) {
    case Regime::Subcritical: {
      const double c = kl - g;
      const double scale = std::max({1.0, std::abs(kl), g});
      if (std::abs(c) > kRegimeTol * scale) {
        const double q = 1.0 / (2.0 * g * c);
        out.entries(0, 0) = q * c;
        out.entries(0, 1) = q * (p.nu - p.mu);
        out.entries(1, 0) = q * (-(p.nu + p.mu));
        out.entries(1, 1) = q * (-c);
      } else {
        // second branch, lambda + k = gamma; delta = gamma^2 forces
        // mu^2 = nu^2 here
        out.second_branch = true;
        if (std::abs(p.mu * p.mu - p.nu * p.nu) >
            1e-12 * std::max(1.0, p.nu * p.nu + p.mu * p.mu)) {
          throw ValidationFailed(
              "connection_matrix: second branch taken but mu^2 != nu^2");
        }
        const double q = -1.0 / (4.0 * g * g);
        out.entries(0, 0) = q * (p.mu - p.nu);
        out.entries(0, 1) = q * (2.0 * g);
        out.entries(1, 0) = q * (2.0 * g);
        out.entries(1, 1) = q * (-(p.nu + p.mu));
      }
      break;
    }
    case Regime::Critical: {
      // the nilpotent log-model matrix M; boundary values equal the
      // coefficients themselves in this regime, so M is carried as data and
      // never applied as a coefficient map
      out.entries = log_model_matrix(p, k);
      break;
    }
    case Regime::Supercritical: {
      const Cx c(kl, -g);
      const Cx q = 1.0 / (Cx(0.0, 2.0 * g) * c);
      out.entries(0, 0) = q * c;
      out.entries(0, 1) = q * (p.nu - p.mu);
      out.entries(1, 0) = q * (-(p.nu + p.mu));
      out.entries(1, 1) = q * (-c);
      break;
    }
    default:
      break;
  }
  return out;
}

Spinor2 asymptotic_model(const PotentialParams& p, int k, const Spinor2& coeffs,
                         double r) {
  if (!(r > 0.0))
    throw std::invalid_argument("asymptotic_model: r must be positive");
  const ChannelClassification cls = classify_channel(p, k);
  switch (cls.regime) {
    case Regime::Subcritical: {
      const ConnectionMatrix cm = connection_matrix(p, k);
      const double rg = std::pow(r, cls.gamma);
      return cm.entries.apply({coeffs[0] * rg, coeffs[1] / rg});
    }
    case Regime::Critical: {
      const Mat2 M = log_model_matrix(p, k);
      const double lr = std::log(r);
      Mat2 Phi = M;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Phi(i, j) *= lr;
      Phi(0, 0) += 1.0;
      Phi(1, 1) += 1.0;
      return Phi.apply(coeffs);
    }
    case Regime::Supercritical: {
      const ConnectionMatrix cm = connection_matrix(p, k);
      const Cx rig = std::exp(Cx(0.0, cls.gamma * std::log(r)));
      return cm.entries.apply({coeffs[0] * rig, coeffs[1] / rig});
    }
    default:
      throw std::invalid_argument(
          "asymptotic_model: essentially self-adjoint channel");
  }
}

BoundaryData fit_boundary_data(std::span<const double> r,
                               std::span<const Spinor2> f,
                               const PotentialParams& p, int k) {
  const std::size_t n = r.size();
  if (n < 2 || f.size() != n)
    throw std::invalid_argument("fit_boundary_data: need >= 2 samples");

  // design matrix: columns are the models with coefficients (1,0) and (0,1)
  Eigen::MatrixXcd Phi(2 * n, 2);
  Eigen::VectorXcd y(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Spinor2 c0 = asymptotic_model(p, k, {1.0, 0.0}, r[i]);
    const Spinor2 c1 = asymptotic_model(p, k, {0.0, 1.0}, r[i]);
    Phi(2 * i, 0) = c0[0];
    Phi(2 * i + 1, 0) = c0[1];
    Phi(2 * i, 1) = c1[0];
    Phi(2 * i + 1, 1) = c1[1];
    y(2 * i) = f[i][0];
    y(2 * i + 1) = f[i][1];
  }

  // column equilibration, then SVD solve; condition number measured on the
  // equilibrated matrix so pure scale differences do not trip the check
  Eigen::Vector2d colnorm;
  for (int j = 0; j < 2; ++j) colnorm(j) = Phi.col(j).norm();
  if (colnorm.minCoeff() == 0.0)
    throw IllConditionedFit("fit_boundary_data: zero model column");
  Eigen::MatrixXcd Phi_eq = Phi;
  for (int j = 0; j < 2; ++j) Phi_eq.col(j) /= colnorm(j);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      Phi_eq, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond = svd.singularValues()(0) /
                      svd.singularValues()(svd.singularValues().size() - 1);
  if (!(cond < 1e10)) {
    throw IllConditionedFit(
        "fit_boundary_data: design matrix condition number " +
        std::to_string(cond));
  }
  Eigen::Vector2cd a_eq = svd.solve(y);
  Eigen::Vector2cd a;
  for (int j = 0; j < 2; ++j) a(j) = a_eq(j) / colnorm(j);

  const double ynorm = y.norm();
  const double resid = (Phi * a - y).norm();

  BoundaryData out;
  out.k = k;
  out.coeffs = {a(0), a(1)};
  out.fit_residual = ynorm > 0 ? resid / ynorm : resid;

  const ChannelClassification cls = classify_channel(p, k);
  if (cls.regime == Regime::Critical) {
    out.gamma_plus = a(0);
    out.gamma_minus = a(1);
  } else {
    const ConnectionMatrix cm = connection_matrix(p, k);
    const Spinor2 gv = cm.entries.apply(out.coeffs);
    out.gamma_plus = gv[0];
    out.gamma_minus = gv[1];
  }
  return out;
}

BoundaryData extract_boundary_data(const RadialSolution& sol,
                                   const PotentialParams& p, int k,
                                   const FitWindow& window) {
  std::vector<double> rs;
  std::vector<Spinor2> fs;
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    if (sol.grid[i] >= window.lo && sol.grid[i] <= window.hi) {
      rs.push_back(sol.grid[i]);
      fs.push_back(sol.values[i]);
    }
  }
  if (rs.size() < 4) {
    throw std::invalid_argument(
        "extract_boundary_data: fewer than 4 samples inside the fit window");
  }
  return fit_boundary_data(rs, fs, p, k);
}

Cx boundary_form(const BoundaryData& lhs, const BoundaryData& rhs) {
  if (lhs.k != rhs.k)
    throw ChannelMismatch("boundary_form: different channels");
  return lhs.gamma_plus * std::conj(rhs.gamma_minus) -
         lhs.gamma_minus * std::conj(rhs.gamma_plus);
}

Cx richardson_limit(std::span<const Cx> values, double* spread) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("richardson_limit: need >= 2 terms");
  std::vector<Cx> col(values.begin(), values.end());
  Cx last_top = col[0];
  Cx prev_top = col[0];
  // iterated first-order Richardson, ratio 1/2: T[i] <- 2 T[i+1] - T[i]
  for (std::size_t pass = 1; pass < n; ++pass) {
    for (std::size_t i = 0; i + pass < n; ++i)
      col[i] = 2.0 * col[i + 1] - col[i];
    prev_top = last_top;
    last_top = col[0];
  }
  if (spread) {
    const double scale = std::max(std::abs(last_top), 1e-300);
    *spread = std::abs(last_top - prev_top) / scale;
  }
  return last_top;
}

Cx wronskian_limit(const RadialSolution& f, const RadialSolution& g,
                   const WronskianOptions& opts) {
  if (f.k != g.k) throw ChannelMismatch("wronskian_limit: different channels");
  const double lo = std::max(f.r_min(), g.r_min());
  double eps0 = opts.eps0;
  const double eps_last = eps0 / std::pow(2.0, opts.terms - 1);
  if (eps_last < lo) {
    throw std::invalid_argument(
        "wronskian_limit: solutions do not cover the epsilon ladder");
  }
  std::vector<Cx> dets(opts.terms);
  double prod_scale = 0.0;  // ||f(eps)|| ||g(eps)||, for the zero-limit floor
  for (int i = 0; i < opts.terms; ++i) {
    const double eps = eps0 / std::pow(2.0, i);
    const Spinor2 fv = f.value_at(eps);
    const Spinor2 gv = g.value_at(eps);
    dets[i] = fv[0] * std::conj(gv[1]) - fv[1] * std::conj(gv[0]);
    const double fn = std::sqrt(std::norm(fv[0]) + std::norm(fv[1]));
    const double gn = std::sqrt(std::norm(gv[0]) + std::norm(gv[1]));
    prod_scale = std::max(prod_scale, fn * gn);
  }
  double spread = 0.0;
  const Cx limit = richardson_limit(dets, &spread);
  const double diff = spread * std::max(std::abs(limit), 1e-300);
  const bool converged =
      spread <= opts.rel_tol || diff <= 1e-9 * prod_scale;
  if (!converged) {
    throw NonConvergent("wronskian_limit: extrapolants differ by relative " +
                        std::to_string(spread));
  }
  return limit;
}

}  // namespace dirac
