#include "dirac/extensions.hpp"

#include <cmath>

#include "dirac/boundary.hpp"
#include "dirac/errors.hpp"

namespace dirac {

namespace {

double joint_norm_sq(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  return A.squaredNorm() + B.squaredNorm();
}

}  // namespace

SelfAdjointDiagnostics check_self_adjoint(const ExtensionRelation& rel) {
  SelfAdjointDiagnostics diag;
  const Eigen::MatrixXcd& A = rel.a_matrix;
  const Eigen::MatrixXcd& B = rel.b_matrix;
  const Eigen::MatrixXcd cross = A * B.adjoint() - B * A.adjoint();
  const double scale = A.norm() * B.norm() + 1.0;
  diag.hermitian_defect = cross.norm() / scale;
  diag.hermitian_ok = diag.hermitian_defect <= 1e-12;

  const Eigen::MatrixXcd S = A * A.adjoint() + B * B.adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S);
  const double sigma_min = svd.singularValues().minCoeff();
  const double jn = joint_norm_sq(A, B);
  diag.kernel_margin = jn > 0 ? sigma_min / jn : 0.0;
  diag.kernel_ok = sigma_min > 1e-10 * jn;

  diag.ok = diag.hermitian_ok && diag.kernel_ok;
  if (!diag.hermitian_ok)
    diag.reason = "A B* != B A*";
  else if (!diag.kernel_ok)
    diag.reason = "AA* + BB* nearly singular";
  return diag;
}

Eigen::MatrixXcd relation_graph_basis(const Eigen::MatrixXcd& A,
                                      const Eigen::MatrixXcd& B) {
  const int d = static_cast<int>(A.rows());
  Eigen::MatrixXcd AB(d, 2 * d);
  AB.leftCols(d) = A;
  AB.rightCols(d) = -B;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(AB, Eigen::ComputeFullV);
  // null space = right-singular vectors past the rank; for a valid relation
  // the rank is exactly d
  return svd.matrixV().rightCols(d);
}

UnitaryParametrization relation_to_unitary(const ExtensionRelation& rel) {
  const auto diag = check_self_adjoint(rel);
  if (!diag.ok) {
    throw ValidationFailed("relation_to_unitary: relation not self-adjoint (" +
                           diag.reason + ")");
  }
  const int d = rel.d;
  const Eigen::MatrixXcd basis = relation_graph_basis(rel.a_matrix,
                                                      rel.b_matrix);
  const Eigen::MatrixXcd X = basis.topRows(d);
  const Eigen::MatrixXcd Y = basis.bottomRows(d);
  const Cx i_unit(0.0, 1.0);
  const Eigen::MatrixXcd W1 = Y + i_unit * X;
  const Eigen::MatrixXcd W2 = Y - i_unit * X;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(W1);
  if (!lu.isInvertible()) {
    throw ValidationFailed(
        "relation_to_unitary: boundary map y + ix degenerate on the graph");
  }
  UnitaryParametrization up;
  up.d = d;
  up.channel_order = rel.channel_order;
  up.u_matrix = W2 * lu.inverse();

  const double unit_defect =
      (up.u_matrix.adjoint() * up.u_matrix -
       Eigen::MatrixXcd::Identity(d, d)).norm();
  if (unit_defect > 1e-10 * std::sqrt(static_cast<double>(d))) {
    throw ValidationFailed("relation_to_unitary: result not unitary, defect " +
                           std::to_string(unit_defect));
  }

  // decisive sign-convention check: the two graphs must coincide
  const Eigen::MatrixXcd Au = i_unit * (Eigen::MatrixXcd::Identity(d, d) +
                                        up.u_matrix);
  const Eigen::MatrixXcd Bu = Eigen::MatrixXcd::Identity(d, d) - up.u_matrix;
  const Eigen::MatrixXcd basis_u = relation_graph_basis(Au, Bu);
  const double dist = subspace_distance(basis, basis_u);
  if (dist > 1e-10) {
    throw ValidationFailed(
        "relation_to_unitary: subspace validation failed, distance " +
        std::to_string(dist));
  }
  return up;
}

ExtensionRelation unitary_to_relation(const UnitaryParametrization& up) {
  const int d = up.d;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  const double defect = (up.u_matrix.adjoint() * up.u_matrix - I).norm();
  if (defect > 1e-10 * std::sqrt(static_cast<double>(d)))
    throw NotUnitary("unitary_to_relation: U*U - I has norm " +
                     std::to_string(defect));
  ExtensionRelation rel;
  rel.d = d;
  rel.channel_order = up.channel_order;
  rel.a_matrix = Cx(0.0, 1.0) * (I + up.u_matrix);
  rel.b_matrix = I - up.u_matrix;
  return rel;
}

RelationRow distinguished_row(const PotentialParams& p, int k) {
  const ChannelClassification cls = classify_channel(p, k);
  const double kl = static_cast<double>(k) + p.lambda;
  const double g = cls.gamma;
  RelationRow row;
  if (cls.regime == Regime::Critical) {
    // gamma = 0: (k+lambda) G+ = (mu - nu) G-, equivalently
    // (mu + nu) G+ = -(k+lambda) G-. Both rows vanish only for the excluded
    // critical anomalous potential.
    row.a = kl;
    row.b = p.mu - p.nu;
    if (std::abs(row.a) + std::abs(row.b) <= kRegimeTol) {
      row.a = p.mu + p.nu;
      row.b = -kl;
    }
  } else if (cls.regime == Regime::Subcritical) {
    const double scale = std::max({1.0, std::abs(kl), g});
    if (std::abs(kl - g) <= kRegimeTol * scale) {
      // 0 != gamma = k + lambda
      row.a = kl + g;
      row.b = p.mu - p.nu;
    } else {
      // 0 != gamma != k + lambda
      row.a = p.mu + p.nu;
      row.b = -(kl - g);
    }
  } else {
    throw std::invalid_argument(
        "distinguished_row: channel must be subcritical or critical");
  }
  return row;
}

ExtensionRelation distinguished_extension(const PotentialParams& p) {
  if (p.sup_norm > 1.0 + kRegimeTol) {
    throw SupNormExceeded("distinguished_extension: |nu| + sqrt(mu^2 + "
                          "lambda^2) = " + std::to_string(p.sup_norm) + " > 1");
  }
  if (std::abs(p.nu) <= kRegimeTol && std::abs(p.mu) <= kRegimeTol &&
      std::abs(std::abs(p.lambda) - 1.0) <= kRegimeTol) {
    throw CriticalAnomalous(
        "distinguished_extension: critical anomalous potential (0, 0, +-1) "
        "selects no extension");
  }
  IndexSet set = enumerate_index_set(p);
  if (set.d == 0) {
    throw NoDeficiency(
        "distinguished_extension: d = 0, operator essentially self-adjoint");
  }

  ExtensionRelation rel;
  rel.d = set.d;
  rel.channel_order = std::move(set);
  rel.a_matrix = Eigen::MatrixXcd::Zero(rel.d, rel.d);
  rel.b_matrix = Eigen::MatrixXcd::Zero(rel.d, rel.d);

  for (int s = 0; s < rel.d; ++s) {
    const int k = rel.channel_order.entries[s].k;
    const RelationRow row = distinguished_row(p, k);
    rel.a_matrix(s, s) = row.a;
    rel.b_matrix(s, s) = row.b;

    // build-time semantic check: the solution ray (b, a) must realize the
    // A- = 0 ray (subcritical) resp. lie in ker M (critical)
    const ChannelClassification cls = classify_channel(p, k);
    const double rn = std::sqrt(std::norm(row.a) + std::norm(row.b));
    if (cls.regime == Regime::Subcritical) {
      const ConnectionMatrix cm = connection_matrix(p, k);
      const Cx cross = row.b * cm.entries(1, 0) - row.a * cm.entries(0, 0);
      const double cn = std::sqrt(std::norm(cm.entries(0, 0)) +
                                  std::norm(cm.entries(1, 0)));
      if (std::abs(cross) > 1e-12 * rn * cn) {
        throw ValidationFailed(
            "distinguished_extension: row does not match the A- = 0 ray "
            "on channel k = " + std::to_string(k));
      }
    } else {
      const Mat2 M = log_model_matrix(p, k);
      const Spinor2 mv = M.apply({row.b, row.a});
      const double mn = std::sqrt(std::norm(M(0, 0)) + std::norm(M(0, 1)) +
                                  std::norm(M(1, 0)) + std::norm(M(1, 1)));
      const double residual =
          std::sqrt(std::norm(mv[0]) + std::norm(mv[1]));
      if (residual > 1e-12 * mn * rn) {
        throw ValidationFailed(
            "distinguished_extension: row not in ker M on channel k = " +
            std::to_string(k));
      }
    }
  }
  return rel;
}

RelationRow theta_row(double theta) {
  return RelationRow{std::cos(theta), std::sin(theta)};
}

ExtensionRelation theta_family_relation(const PotentialParams& p, double theta,
                                        int channel_index) {
  ExtensionRelation rel = distinguished_extension(p);
  if (channel_index < 0 || channel_index >= rel.d)
    throw std::out_of_range("theta_family_relation: channel index out of "
                            "range");
  const RelationRow row = theta_row(theta);
  rel.a_matrix(channel_index, channel_index) = row.a;
  rel.b_matrix(channel_index, channel_index) = row.b;
  return rel;
}

double subspace_distance(const Eigen::MatrixXcd& basis1,
                         const Eigen::MatrixXcd& basis2) {
  const Eigen::MatrixXcd P1 = basis1 * basis1.adjoint();
  const Eigen::MatrixXcd P2 = basis2 * basis2.adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P1 - P2);
  return svd.singularValues().maxCoeff();
}

}  // namespace dirac
