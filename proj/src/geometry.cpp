#include "bswarm/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bswarm/error.hpp"

namespace bswarm {

BearingMeasurement bearing(const Vec2& p, const Vec2& s, double range_epsilon, int sensor) {
  const Vec2 d = p - s;
  const double range = d.norm();
  if (!(range > range_epsilon)) {
    throw SingularGeometryError(sensor, range,
                                "target coincides with sensor " + std::to_string(sensor) + " (distance " +
                                    std::to_string(range) + ")");
  }
  BearingMeasurement m;
  m.range = range;
  m.phi = d / range;
  m.phi_perp = Vec2(-m.phi.y(), m.phi.x());
  double theta = std::atan2(m.phi.y(), m.phi.x());
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  if (theta >= 2.0 * std::numbers::pi) theta = 0.0;
  m.theta = theta;
  return m;
}

LocalInformation local_information(const BearingMeasurement& m, const Vec2& s) {
  LocalInformation info;
  info.h = m.phi_perp;
  info.z = info.h.dot(s);
  info.P = info.h * info.h.transpose();
  info.q = info.z * info.h;
  info.phi6 = pack_phi(info.P, info.q);
  return info;
}

Phi6 pack_phi(const Mat2& P, const Vec2& q) {
  Phi6 v;
  v << P(0, 0), P(1, 0), P(0, 1), P(1, 1), q(0), q(1);
  return v;
}

UnpackedInformation unpack_phi(const Phi6& v) {
  UnpackedInformation out;
  const double off = 0.5 * (v(1) + v(2));
  out.P << v(0), off, off, v(3);
  out.q << v(4), v(5);
  return out;
}

SignalMatrix stacked_signals(std::span<const Vec2> sensors, const Vec2& p, double range_epsilon) {
  SignalMatrix phi(static_cast<Eigen::Index>(sensors.size()), kSignalDim);
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const auto m = bearing(p, sensors[i], range_epsilon, static_cast<int>(i));
    phi.row(static_cast<Eigen::Index>(i)) = local_information(m, sensors[i]).phi6.transpose();
  }
  return phi;
}

}  // namespace bswarm
