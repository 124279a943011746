#include "rpma/stiefel.hpp"

#include <cmath>
#include <stdexcept>

namespace rpma {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

StiefelPoint::StiefelPoint(Matrix u) : u_(std::move(u)) {
  require(u_.size() > 0, "stiefel point must be non-empty");
  require(u_.cols() >= 1 && u_.cols() <= u_.rows(),
          "stiefel point requires 1 <= K <= n");
  require(u_.allFinite(), "stiefel point must be finite");
  if (orthogonality_residual() > kOrthTol) {
    throw std::invalid_argument("stiefel point columns are not orthonormal");
  }
}

double StiefelPoint::orthogonality_residual() const {
  const Eigen::Index k = u_.cols();
  return (u_.transpose() * u_ - Matrix::Identity(k, k)).norm();
}

ProjectionMatrix::ProjectionMatrix(Matrix x) : x_(std::move(x)) {
  require(x_.size() > 0 && x_.rows() == x_.cols(),
          "projection matrix must be square");
  require(x_.allFinite(), "projection matrix must be finite");
  if (symmetry_residual() > kSymTol) {
    throw std::invalid_argument("projection matrix is not symmetric");
  }
  if (idempotency_residual() > kIdemTol) {
    throw std::invalid_argument("projection matrix is not idempotent");
  }
  const double tr = x_.trace();
  rank_ = static_cast<int>(std::lround(tr));
  if (rank_ < 1 || rank_ > x_.rows() || std::abs(tr - rank_) > kTraceTol) {
    throw std::invalid_argument("projection matrix trace is not an integer rank");
  }
  if (std::abs(x_.norm() - std::sqrt(static_cast<double>(rank_))) > kTraceTol) {
    throw std::invalid_argument("projection matrix Frobenius norm is not sqrt(K)");
  }
}

double ProjectionMatrix::idempotency_residual() const {
  return (x_ * x_ - x_).norm();
}

double ProjectionMatrix::symmetry_residual() const {
  return (x_ - x_.transpose()).norm();
}

SkewDirection SkewDirection::dense(Matrix w) {
  require(w.rows() == w.cols(), "skew direction must be square");
  if ((w + w.transpose()).norm() > kSkewTol) {
    throw std::invalid_argument("direction matrix is not skew-symmetric");
  }
  SkewDirection d;
  d.factored_ = false;
  d.w_ = std::move(w);
  return d;
}

SkewDirection SkewDirection::factored(Matrix p, Matrix q) {
  require(p.rows() == q.rows() && p.cols() == q.cols(),
          "factored direction requires matching P, Q shapes");
  SkewDirection d;
  d.factored_ = true;
  d.p_ = std::move(p);
  d.q_ = std::move(q);
  return d;
}

Matrix SkewDirection::dense_form() const {
  return factored_ ? Matrix(p_ * q_.transpose()) : w_;
}

Eigen::Index SkewDirection::dim() const {
  return factored_ ? p_.rows() : w_.rows();
}

SkewDirection gradient_direction(const Matrix& grad, const StiefelPoint& u) {
  require(grad.rows() == u.rows() && grad.cols() == u.cols(),
          "gradient shape must match the stiefel point");
  const Eigen::Index n = u.rows(), k = u.cols();
  Matrix p(n, 2 * k), q(n, 2 * k);
  p.leftCols(k) = grad;
  p.rightCols(k) = u.matrix();
  q.leftCols(k) = u.matrix();
  q.rightCols(k) = -grad;
  return SkewDirection::factored(std::move(p), std::move(q));
}

SkewDirection random_direction(const StiefelPoint& u, Rng& rng) {
  const Eigen::Index n = u.rows(), k = u.cols();
  Matrix r(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) r(i, j) = rng.normal();
  }
  Matrix p(n, 2 * k), q(n, 2 * k);
  p.leftCols(k) = r;
  p.rightCols(k) = u.matrix();
  q.leftCols(k) = u.matrix();
  q.rightCols(k) = -r;
  return SkewDirection::factored(std::move(p), std::move(q));
}

SkewDirection random_direction(const StiefelPoint& u, std::uint64_t seed) {
  Rng rng(seed);
  return random_direction(u, rng);
}

StiefelPoint cayley_curve(const StiefelPoint& u0, const SkewDirection& w, double tau) {
  const Matrix wd = w.dense_form();
  require(wd.rows() == u0.rows(), "direction dimension must match the point");
  const Eigen::Index n = u0.rows();
  const Matrix lhs = Matrix::Identity(n, n) + (tau / 2.0) * wd;
  const Matrix rhs = (Matrix::Identity(n, n) - (tau / 2.0) * wd) * u0.matrix();
  return StiefelPoint(lhs.partialPivLu().solve(rhs));
}

Matrix curve_derivative(const StiefelPoint& u0, const SkewDirection& w, double tau) {
  const Matrix wd = w.dense_form();
  require(wd.rows() == u0.rows(), "direction dimension must match the point");
  const Eigen::Index n = u0.rows();
  const Matrix lhs = Matrix::Identity(n, n) + (tau / 2.0) * wd;
  const auto lu = lhs.partialPivLu();
  const Matrix u_tau = lu.solve((Matrix::Identity(n, n) - (tau / 2.0) * wd) * u0.matrix());
  return -0.5 * lu.solve(wd * (u0.matrix() + u_tau));
}

namespace {

// Shared SMW core: factors M = I_{2K} + tau/2 Q'P once and applies
// x -> x - tau/2 P M^{-1} Q'x as needed.
struct SmwSolve {
  bool ok = false;
  Eigen::PartialPivLU<Matrix> lu;
};

SmwSolve smw_factor(const SkewDirection& pq, double tau) {
  SmwSolve s;
  const Eigen::Index m = pq.p().cols();
  const Matrix core = Matrix::Identity(m, m) +
                      (tau / 2.0) * (pq.q().transpose() * pq.p());
  s.lu = core.partialPivLu();
  // Partial-pivoted LU always "succeeds"; detect singularity from the factor.
  const double min_pivot = s.lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  const double scale = core.cwiseAbs().maxCoeff();
  s.ok = std::isfinite(min_pivot) && min_pivot > 1e-14 * std::max(1.0, scale);
  return s;
}

}  // namespace

std::optional<StiefelPoint> cayley_curve_smw(const StiefelPoint& u0,
                                             const SkewDirection& pq, double tau) {
  require(pq.is_factored(), "smw curve requires a factored direction");
  require(pq.dim() == u0.rows(), "direction dimension must match the point");
  const SmwSolve s = smw_factor(pq, tau);
  if (!s.ok) return std::nullopt;
  const Matrix qtu = pq.q().transpose() * u0.matrix();
  Matrix u = u0.matrix() - tau * (pq.p() * s.lu.solve(qtu));
  if (!u.allFinite()) return std::nullopt;
  const Eigen::Index k = u.cols();
  if ((u.transpose() * u - Matrix::Identity(k, k)).norm() > StiefelPoint::kOrthTol) {
    return std::nullopt;
  }
  return StiefelPoint(std::move(u));
}

std::optional<CurveEval> cayley_curve_smw_with_derivative(const StiefelPoint& u0,
                                                          const SkewDirection& pq,
                                                          double tau) {
  require(pq.is_factored(), "smw curve requires a factored direction");
  require(pq.dim() == u0.rows(), "direction dimension must match the point");
  const SmwSolve s = smw_factor(pq, tau);
  if (!s.ok) return std::nullopt;
  const Matrix& p = pq.p();
  const Matrix& q = pq.q();
  const Matrix qtu = q.transpose() * u0.matrix();
  CurveEval eval;
  eval.u = u0.matrix() - tau * (p * s.lu.solve(qtu));
  // U'(tau) = -1/2 (I - tau/2 P M^{-1} Q') P Q' (U0 + U(tau)).
  const Matrix sum = u0.matrix() + eval.u;
  const Matrix w_sum = p * (q.transpose() * sum);
  eval.u_prime = -0.5 * (w_sum - (tau / 2.0) * (p * s.lu.solve(q.transpose() * w_sum)));
  if (!eval.u.allFinite() || !eval.u_prime.allFinite()) return std::nullopt;
  return eval;
}

ProjectionMatrix projector_curve(const ProjectionMatrix& x0, const SkewDirection& w,
                                 double tau) {
  const Matrix wd = w.dense_form();
  require(wd.rows() == x0.dim(), "direction dimension must match the projector");
  const Eigen::Index n = x0.dim();
  const Matrix lhs = Matrix::Identity(n, n) + (tau / 2.0) * wd;
  const Matrix c = lhs.partialPivLu().solve(Matrix::Identity(n, n) - (tau / 2.0) * wd);
  Matrix x = c * x0.matrix() * c.transpose();
  x = 0.5 * (x + x.transpose());
  return ProjectionMatrix(std::move(x));
}

Matrix tangent_project(const StiefelPoint& u, const Matrix& g) {
  require(g.rows() == u.rows() && g.cols() == u.cols(),
          "matrix shape must match the stiefel point");
  const Matrix& um = u.matrix();
  const Matrix utg = um.transpose() * g;
  return um * (0.5 * (utg - utg.transpose())) + (g - um * utg);
}

}  // namespace rpma
