#include "stripgap/geometry.hpp"

#include <cmath>
#include <string>

namespace stripgap {

StripGeometry::StripGeometry(double width, double half_period) : d_(width), T_(half_period) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw PreconditionError("strip width d must be positive, got " + std::to_string(width));
  }
  if (!(half_period > 0.0) || !std::isfinite(half_period)) {
    throw PreconditionError("half-period T must be positive, got " + std::to_string(half_period));
  }
  xi_ = T_ / d_;
}

StripGeometry StripGeometry::from_ratio(double xi, double half_period) {
  if (!(xi > 0.0)) throw PreconditionError("xi must be positive, got " + std::to_string(xi));
  return StripGeometry(half_period / xi, half_period);
}

QuasiMomentum::QuasiMomentum(double tau) : tau_(tau) {
  if (!(tau > -0.5 && tau <= 0.5)) {
    throw PreconditionError("quasimomentum must lie in (-1/2, 1/2], got " + std::to_string(tau));
  }
}

QuasiMomentum QuasiMomentum::wrap(double tau) {
  double t = tau - std::round(tau);
  if (t <= -0.5) t += 1.0;
  return QuasiMomentum(t);
}

}  // namespace stripgap
