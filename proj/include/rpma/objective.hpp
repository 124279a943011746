#pragma once

#include <Eigen/Dense>

#include "rpma/penalty.hpp"
#include "rpma/stiefel.hpp"

namespace rpma {

// One instance of the regularized projection approximation problem
//   min ||A - X||_F^2 + lambda * sum_ij g(X_ij)  over rank-K projectors X.
// A is symmetrized on construction.
struct ProblemInstance {
  Matrix a;
  int k = 1;
  double lambda = 0.0;
  PenaltySpec penalty;
  double ingest_asymmetry = 0.0;  // ||A - A'||_F of the raw input

  ProblemInstance(Matrix affinity, int rank, double lambda_, PenaltySpec penalty_);

  Eigen::Index dim() const { return a.rows(); }
};

// F(U) = ||A - UU'||_F^2 + lambda * sum_ij g((UU')_ij).
double eval_objective(const ProblemInstance& inst, const StiefelPoint& u);

// Same objective evaluated at an explicit symmetric X (the projection-manifold
// and ADMM parameterizations).
double eval_objective_x(const ProblemInstance& inst, const Matrix& x);

// G_ij = g'((UU')_ij).
Matrix g_matrix(const ProblemInstance& inst, const StiefelPoint& u);
Matrix g_matrix_x(const ProblemInstance& inst, const Matrix& x);

// Euclidean gradient -4AU + 2*lambda*G U. The tr((U'U)^2) part of the fit
// term is constant on the manifold and carries no tangential information, so
// it is omitted here; every downstream use (search directions, tangent and
// canonical gradients, KKT residuals, curve derivatives) is invariant to the
// normal-space component this drops.
Matrix euclidean_gradient(const ProblemInstance& inst, const StiefelPoint& u);

// Entrywise gradient of F as a function of X: 2(X - A) + lambda * g'(X).
Matrix euclidean_gradient_x(const ProblemInstance& inst, const Matrix& x);

// Canonical gradient U(U'g - g'U) + (I - UU')g; zero exactly at first-order
// stationary points.
Matrix canonical_gradient(const ProblemInstance& inst, const StiefelPoint& u);

// Residual of the nonlinear eigenvalue system (2A - lambda*G) U = U Lambda_d:
// ||H U - U diag(U'HU)||_F + ||offdiag(U'HU)||_F with H = 2A - lambda*G.
double kkt_residual(const ProblemInstance& inst, const StiefelPoint& u);

// Canonical representative of the subspace spanned by U: rotates the columns
// by the eigenbasis of U'HU (descending, sign-fixed). F and UU' are invariant
// under this rotation, but the nonlinear eigenvalue system holds only in the
// rotated basis, so residuals are measured there.
StiefelPoint align_to_eigenbasis(const ProblemInstance& inst, const StiefelPoint& u);

}  // namespace rpma
