#include "rpma/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rpma/errors.hpp"

namespace rpma {

EigenResult top_k_eigvecs(const Matrix& m, int k) {
  if (m.rows() != m.cols() || m.size() == 0) {
    throw std::invalid_argument("eigendecomposition requires a square matrix");
  }
  const Eigen::Index n = m.rows();
  if (k < 1 || k > n) {
    throw std::invalid_argument("top-k eigenvectors require 1 <= k <= n");
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigendecomposition failed to converge");
  }
  // Eigen returns ascending order; take the trailing K columns reversed.
  EigenResult result;
  result.vectors.resize(n, k);
  result.values.resize(k);
  for (int j = 0; j < k; ++j) {
    const Eigen::Index src = n - 1 - j;
    result.values(j) = solver.eigenvalues()(src);
    Vector v = solver.eigenvectors().col(src);
    // Sign convention: largest-magnitude entry (first on ties) positive.
    Eigen::Index imax = 0;
    double best = std::abs(v(0));
    for (Eigen::Index i = 1; i < n; ++i) {
      const double a = std::abs(v(i));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (v(imax) < 0.0) v = -v;
    result.vectors.col(j) = v;
  }
  if (k < n) {
    result.gap = result.values(k - 1) - solver.eigenvalues()(n - 1 - k);
  } else {
    result.gap = std::numeric_limits<double>::infinity();
  }
  result.degenerate_gap = result.gap < 1e-12;
  return result;
}

ProjectionMatrix ideal_projector(const std::vector<int>& labels) {
  if (labels.empty()) throw std::invalid_argument("labels must be non-empty");
  const int k = *std::max_element(labels.begin(), labels.end());
  if (k < 1) throw std::invalid_argument("labels must be positive integers 1..K");
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (int c : labels) {
    if (c < 1 || c > k) {
      throw std::invalid_argument("labels must be positive integers 1..K");
    }
    ++counts[static_cast<std::size_t>(c - 1)];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw std::invalid_argument("labels leave class " + std::to_string(c + 1) +
                                  " empty");
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
  Matrix x = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
        x(i, j) =
            1.0 / static_cast<double>(counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)] - 1)]);
      }
    }
  }
  return ProjectionMatrix(std::move(x));
}

ProjectionMatrix projector_from_basis(const StiefelPoint& u) {
  Matrix x = u.matrix() * u.matrix().transpose();
  x = 0.5 * (x + x.transpose()).eval();
  return ProjectionMatrix(std::move(x));
}

StiefelPoint basis_from_projector(const ProjectionMatrix& x) {
  const EigenResult top = top_k_eigvecs(x.matrix(), x.rank());
  return StiefelPoint(top.vectors);
}

}  // namespace rpma
