#include "rpma/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rpma {

PenaltySpec PenaltySpec::bounded(double alpha, double beta) {
  if (!(alpha < beta)) {
    throw std::invalid_argument("bounded penalty requires alpha < beta");
  }
  PenaltySpec p;
  p.kind = PenaltyKind::Bounded;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

PenaltySpec PenaltySpec::non_negative() {
  PenaltySpec p;
  p.kind = PenaltyKind::NonNegative;
  return p;
}

PenaltySpec PenaltySpec::huber(double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("huber penalty requires delta > 0");
  }
  PenaltySpec p;
  p.kind = PenaltyKind::Huber;
  p.delta = delta;
  return p;
}

double PenaltySpec::value(double z) const {
  switch (kind) {
    case PenaltyKind::Bounded: {
      const double lo = std::min(z - alpha, 0.0);
      const double hi = std::isinf(beta) ? 0.0 : std::min(beta - z, 0.0);
      return lo * lo + hi * hi;
    }
    case PenaltyKind::NonNegative: {
      const double lo = std::min(z, 0.0);
      return lo * lo;
    }
    case PenaltyKind::Huber:
      if (std::abs(z) <= delta) return z * z / (2.0 * delta);
      return std::abs(z) - delta / 2.0;
  }
  return 0.0;
}

double PenaltySpec::derivative(double z) const {
  switch (kind) {
    case PenaltyKind::Bounded: {
      const double lo = std::min(z - alpha, 0.0);
      const double hi = std::isinf(beta) ? 0.0 : std::min(beta - z, 0.0);
      return 2.0 * (lo - hi);
    }
    case PenaltyKind::NonNegative:
      return 2.0 * std::min(z, 0.0);
    case PenaltyKind::Huber:
      if (std::abs(z) <= delta) return z / delta;
      return z > 0.0 ? 1.0 : -1.0;
  }
  return 0.0;
}

double PenaltySpec::lipschitz() const {
  return kind == PenaltyKind::Huber ? 1.0 / delta : 2.0;
}

namespace {

double clamp(double s, double lo, double hi) {
  return std::min(std::max(s, lo), hi);
}

}  // namespace

ProxResult prox(const PenaltySpec& p, double s, double tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("prox requires tau > 0");
  }
  auto objective = [&](double z) { return (s - z) * (s - z) + tau * p.value(z); };

  switch (p.kind) {
    case PenaltyKind::Bounded: {
      double z;
      if (std::isinf(p.beta)) {
        z = (s + tau * std::max(s, p.alpha)) / (1.0 + tau);
      } else {
        z = (s + tau * clamp(s, p.alpha, p.beta)) / (1.0 + tau);
      }
      return {z, objective(z)};
    }
    case PenaltyKind::NonNegative: {
      const double z = s <= 0.0 ? s / (1.0 + tau) : s;
      return {z, objective(z)};
    }
    case PenaltyKind::Huber: {
      const double d = p.delta;
      const double z1 = clamp(2.0 * d * s / (2.0 * d + tau), -d, d);
      const double z2 = std::max(d, s - tau / 2.0);
      const double z3 = std::min(-d, s + tau / 2.0);
      ProxResult best{z1, objective(z1)};
      for (double z : {z2, z3}) {
        const double f = objective(z);
        // On ties prefer the candidate of smaller magnitude.
        if (f < best.f || (f == best.f && std::abs(z) < std::abs(best.z))) {
          best = {z, f};
        }
      }
      return best;
    }
  }
  return {s, 0.0};
}

}  // namespace rpma
