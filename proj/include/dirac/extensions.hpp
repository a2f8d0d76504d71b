#pragma once
#include <Eigen/Dense>
#include <complex>
#include <string>

#include "dirac/channels.hpp"

namespace dirac {

// Boundary relation A Gamma+ = B Gamma- on C^d. Row s corresponds to
// channel_order.entries[s].
struct ExtensionRelation {
  int d = 0;
  Eigen::MatrixXcd a_matrix;
  Eigen::MatrixXcd b_matrix;
  IndexSet channel_order;
};

struct UnitaryParametrization {
  int d = 0;
  Eigen::MatrixXcd u_matrix;
  IndexSet channel_order;
};

struct SelfAdjointDiagnostics {
  bool ok = false;
  bool hermitian_ok = false;   // A B* = B A* within tolerance
  bool kernel_ok = false;      // smallest singular value of AA* + BB* > tol
  double hermitian_defect = 0; // ||AB* - BA*|| / (||A|| ||B|| + 1)
  double kernel_margin = 0;    // sigma_min(AA* + BB*) / ||(A,B)||^2
  std::string reason;
};

SelfAdjointDiagnostics check_self_adjoint(const ExtensionRelation& rel);

// Orthonormal basis of the graph {(x, y) : A x = B y} as a 2d x d matrix
// with blocks [X; Y].
Eigen::MatrixXcd relation_graph_basis(const Eigen::MatrixXcd& A,
                                      const Eigen::MatrixXcd& B);

// U with  {A x = B y}  ==  {i (I + U) x = (I - U) y}, computed from the
// graph basis (U maps y + ix to y - ix) and validated by subspace
// comparison. Throws ValidationFailed if the subspaces disagree.
UnitaryParametrization relation_to_unitary(const ExtensionRelation& rel);

// (A, B) = (i (I + U), I - U). Throws NotUnitary when U fails the
// unitarity tolerance.
ExtensionRelation unitary_to_relation(const UnitaryParametrization& up);

// The unique self-adjoint extension whose domain lies in the quadratic form
// domain, as a diagonal relation. Preconditions: sup_norm <= 1, the
// potential is not the critical anomalous one (0, 0, +-1), and d > 0.
// Subcritical rows realize the A- = 0 ray; critical rows span ker M.
ExtensionRelation distinguished_extension(const PotentialParams& p);

// Scalar relation row a Gamma+ = b Gamma- for one channel.
struct RelationRow {
  std::complex<double> a{1.0, 0.0};
  std::complex<double> b{0.0, 0.0};
};

// Row of the distinguished relation on the channel with spin-orbit number k.
RelationRow distinguished_row(const PotentialParams& p, int k);

// (cos theta, sin theta) on the selected channel; distinguished rows on the
// others. theta in [0, pi).
ExtensionRelation theta_family_relation(const PotentialParams& p, double theta,
                                        int channel_index);

RelationRow theta_row(double theta);

// ||P1 - P2|| for the orthogonal projectors onto the column spans.
double subspace_distance(const Eigen::MatrixXcd& basis1,
                         const Eigen::MatrixXcd& basis2);

}  // namespace dirac
