#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rpma/stiefel.hpp"

namespace rpma {

// Top-K eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
// Vectors carry a deterministic sign: the entry of largest magnitude (lowest
// index on ties) is positive.
struct EigenResult {
  Matrix vectors;           // n x K, orthonormal
  Vector values;            // K, descending
  double gap = 0.0;         // value_K - value_{K+1} (+inf when K = n)
  bool degenerate_gap = false;  // gap below 1e-12
};

EigenResult top_k_eigvecs(const Matrix& m, int k);

// Block-constant projector of the label partition: X_ij = 1/n_c when i and j
// share class c, zero otherwise. Labels must cover 1..K with no empty class.
ProjectionMatrix ideal_projector(const std::vector<int>& labels);

ProjectionMatrix projector_from_basis(const StiefelPoint& u);
StiefelPoint basis_from_projector(const ProjectionMatrix& x);

}  // namespace rpma
