#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "rpma/rng.hpp"

namespace rpma {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// n x K matrix with orthonormal columns. Construction rejects matrices whose
// Gram residual ||U'U - I||_F exceeds kOrthTol.
class StiefelPoint {
 public:
  static constexpr double kOrthTol = 1e-10;

  explicit StiefelPoint(Matrix u);

  const Matrix& matrix() const { return u_; }
  Eigen::Index rows() const { return u_.rows(); }
  Eigen::Index cols() const { return u_.cols(); }

  double orthogonality_residual() const;

 private:
  Matrix u_;
};

// n x n symmetric idempotent matrix of rank K (equivalently U U' for some
// orthonormal U). Construction checks symmetry, idempotency and the trace.
class ProjectionMatrix {
 public:
  static constexpr double kSymTol = 1e-10;
  static constexpr double kIdemTol = 1e-8;
  static constexpr double kTraceTol = 1e-8;

  explicit ProjectionMatrix(Matrix x);

  const Matrix& matrix() const { return x_; }
  Eigen::Index dim() const { return x_.rows(); }
  int rank() const { return rank_; }

  double idempotency_residual() const;
  double symmetry_residual() const;

 private:
  Matrix x_;
  int rank_;
};

// Skew-symmetric direction W, held either dense or in the low-rank factored
// form W = P Q' with P, Q of size n x 2K (the form the Sherman-Morrison-
// Woodbury curve evaluation needs).
class SkewDirection {
 public:
  static constexpr double kSkewTol = 1e-10;

  static SkewDirection dense(Matrix w);
  static SkewDirection factored(Matrix p, Matrix q);

  bool is_factored() const { return factored_; }
  const Matrix& p() const { return p_; }
  const Matrix& q() const { return q_; }
  const Matrix& w() const { return w_; }

  // Expands the factored form (P Q'); returns the stored matrix when dense.
  Matrix dense_form() const;

  Eigen::Index dim() const;

 private:
  SkewDirection() = default;
  bool factored_ = false;
  Matrix w_;       // dense form
  Matrix p_, q_;   // factored form
};

// Gradient-driven direction W = grad U' - U grad', stored factored as
// P = [grad, U], Q = [U, -grad].
SkewDirection gradient_direction(const Matrix& grad, const StiefelPoint& u);

// Random tangent perturbation direction: P = [R, U], Q = [U, -R] with R
// standard normal, drawn from the given stream (or a fresh stream when a
// seed is passed).
SkewDirection random_direction(const StiefelPoint& u, Rng& rng);
SkewDirection random_direction(const StiefelPoint& u, std::uint64_t seed);

// Cayley curve U(tau) = (I + tau/2 W)^{-1} (I - tau/2 W) U0, evaluated with a
// dense n x n solve.
StiefelPoint cayley_curve(const StiefelPoint& u0, const SkewDirection& w, double tau);

// Curve derivative U'(tau) = -1/2 (I + tau/2 W)^{-1} W (U0 + U(tau)).
Matrix curve_derivative(const StiefelPoint& u0, const SkewDirection& w, double tau);

// Sherman-Morrison-Woodbury evaluation of the same curve through the factored
// direction; only a 2K x 2K system is solved. Returns nullopt when that
// system is numerically singular (callers treat this as a failed trial step).
std::optional<StiefelPoint> cayley_curve_smw(const StiefelPoint& u0,
                                             const SkewDirection& pq, double tau);

// Curve point and derivative from one shared 2K x 2K factorization.
struct CurveEval {
  Matrix u;        // U(tau)
  Matrix u_prime;  // U'(tau)
};
std::optional<CurveEval> cayley_curve_smw_with_derivative(const StiefelPoint& u0,
                                                          const SkewDirection& pq,
                                                          double tau);

// Projection-manifold curve X(tau) = C X0 C' with the orthogonal Cayley
// factor C = (I + tau/2 W)^{-1} (I - tau/2 W).
ProjectionMatrix projector_curve(const ProjectionMatrix& x0, const SkewDirection& w,
                                 double tau);

// Orthogonal projection of G onto the tangent space at U:
// U (U'G - G'U)/2 + (I - U U') G.
Matrix tangent_project(const StiefelPoint& u, const Matrix& g);

}  // namespace rpma
