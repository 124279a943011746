#pragma once

#include <limits>

namespace rpma {

enum class PenaltyKind { Bounded, NonNegative, Huber };

// Entrywise penalty g: convex, non-negative, with Lipschitz-continuous
// derivative. Three members:
//   Bounded     g(z) = min{z-alpha,0}^2 + min{beta-z,0}^2   (zero on [alpha,beta])
//   NonNegative g(z) = min{z,0}^2                           (zero on [0,inf))
//   Huber       g(z) = z^2/(2*delta) for |z|<=delta, |z|-delta/2 otherwise
// beta may be +inf, in which case the upper branch never fires and
// Bounded(0, +inf) coincides with NonNegative.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::NonNegative;
  double alpha = 0.0;  // lower bound (Bounded)
  double beta = std::numeric_limits<double>::infinity();  // upper bound (Bounded)
  double delta = 1.0;  // transition threshold (Huber)

  static PenaltySpec bounded(double alpha, double beta);
  static PenaltySpec non_negative();
  static PenaltySpec huber(double delta);

  double value(double z) const;
  double derivative(double z) const;

  // Lipschitz constant of the derivative: 2 for Bounded/NonNegative,
  // 1/delta for Huber.
  double lipschitz() const;
};

struct ProxResult {
  double z = 0.0;  // argmin of (s-z)^2 + tau*g(z)
  double f = 0.0;  // minimum value
};

// Exact minimizer of f(z) = (s-z)^2 + tau*g(z), tau > 0.
// Bounded: (s + tau*clamp(s, alpha, beta)) / (1+tau).
// NonNegative: s/(1+tau) for s <= 0, s otherwise.
// Huber: best of the three branch candidates
//   z1 = clamp(2*delta*s/(2*delta+tau), -delta, delta),
//   z2 = max(delta, s - tau/2), z3 = min(-delta, s + tau/2),
// ties broken toward the candidate of smallest |z|.
ProxResult prox(const PenaltySpec& p, double s, double tau);

}  // namespace rpma
