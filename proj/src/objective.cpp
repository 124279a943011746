#include "rpma/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace rpma {

ProblemInstance::ProblemInstance(Matrix affinity, int rank, double lambda_,
                                 PenaltySpec penalty_)
    : a(std::move(affinity)), k(rank), lambda(lambda_), penalty(penalty_) {
  if (a.size() == 0 || a.rows() != a.cols()) {
    throw std::invalid_argument("affinity matrix must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("affinity matrix must be finite");
  }
  if (k < 1 || k > a.rows()) {
    throw std::invalid_argument("rank K must satisfy 1 <= K <= n");
  }
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("lambda must be non-negative");
  }
  ingest_asymmetry = (a - a.transpose()).norm();
  a = 0.5 * (a + a.transpose()).eval();
}

namespace {

void check_dims(const ProblemInstance& inst, const StiefelPoint& u) {
  if (u.rows() != inst.dim() || u.cols() != inst.k) {
    throw std::invalid_argument("stiefel point shape does not match the instance");
  }
}

double penalty_sum(const PenaltySpec& p, const Matrix& x) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) s += p.value(x(i, j));
  }
  return s;
}

}  // namespace

double eval_objective(const ProblemInstance& inst, const StiefelPoint& u) {
  check_dims(inst, u);
  const Matrix x = u.matrix() * u.matrix().transpose();
  return eval_objective_x(inst, x);
}

double eval_objective_x(const ProblemInstance& inst, const Matrix& x) {
  if (x.rows() != inst.dim() || x.cols() != inst.dim()) {
    throw std::invalid_argument("matrix shape does not match the instance");
  }
  double fit = (inst.a - x).squaredNorm();
  if (inst.lambda == 0.0) return fit;
  return fit + inst.lambda * penalty_sum(inst.penalty, x);
}

Matrix g_matrix(const ProblemInstance& inst, const StiefelPoint& u) {
  check_dims(inst, u);
  const Matrix x = u.matrix() * u.matrix().transpose();
  return g_matrix_x(inst, x);
}

Matrix g_matrix_x(const ProblemInstance& inst, const Matrix& x) {
  Matrix g(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      g(i, j) = inst.penalty.derivative(x(i, j));
    }
  }
  return g;
}

Matrix euclidean_gradient(const ProblemInstance& inst, const StiefelPoint& u) {
  check_dims(inst, u);
  Matrix grad = -4.0 * (inst.a * u.matrix());
  if (inst.lambda != 0.0) {
    grad += 2.0 * inst.lambda * (g_matrix(inst, u) * u.matrix());
  }
  return grad;
}

Matrix euclidean_gradient_x(const ProblemInstance& inst, const Matrix& x) {
  Matrix grad = 2.0 * (x - inst.a);
  if (inst.lambda != 0.0) grad += inst.lambda * g_matrix_x(inst, x);
  return grad;
}

Matrix canonical_gradient(const ProblemInstance& inst, const StiefelPoint& u) {
  const Matrix grad = euclidean_gradient(inst, u);
  const Matrix& um = u.matrix();
  const Matrix utg = um.transpose() * grad;
  return um * (utg - utg.transpose()) + (grad - um * utg);
}

double kkt_residual(const ProblemInstance& inst, const StiefelPoint& u) {
  check_dims(inst, u);
  Matrix h = 2.0 * inst.a;
  if (inst.lambda != 0.0) h -= inst.lambda * g_matrix(inst, u);
  const Matrix hu = h * u.matrix();
  const Matrix uthu = u.matrix().transpose() * hu;
  const Matrix eig_resid = hu - u.matrix() * uthu.diagonal().asDiagonal().toDenseMatrix();
  Matrix offdiag = uthu;
  offdiag.diagonal().setZero();
  return eig_resid.norm() + offdiag.norm();
}

StiefelPoint align_to_eigenbasis(const ProblemInstance& inst, const StiefelPoint& u) {
  check_dims(inst, u);
  Matrix h = 2.0 * inst.a;
  if (inst.lambda != 0.0) h -= inst.lambda * g_matrix(inst, u);
  Matrix m = u.matrix().transpose() * (h * u.matrix());
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  const Eigen::Index k = u.cols();
  Matrix rotated(u.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) {
    rotated.col(j) = u.matrix() * solver.eigenvectors().col(k - 1 - j);
    Eigen::Index imax = 0;
    double best = std::abs(rotated(0, j));
    for (Eigen::Index i = 1; i < u.rows(); ++i) {
      const double a = std::abs(rotated(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (rotated(imax, j) < 0.0) rotated.col(j) = -rotated.col(j);
  }
  return StiefelPoint(std::move(rotated));
}

}  // namespace rpma
