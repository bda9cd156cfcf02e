#pragma once

#include <span>

#include "bswarm/types.hpp"

namespace bswarm {

inline constexpr double kDefaultRangeEpsilon = 1e-9;

/// Noiseless bearing from a sensor toward the target.
struct BearingMeasurement {
  double theta = 0.0;  ///< counterclockwise from +x, in [0, 2*pi)
  Vec2 phi;            ///< unit vector toward the target
  Vec2 phi_perp;       ///< [-sin(theta), cos(theta)]
  double range = 0.0;  ///< diagnostic only, never used by the nodes
};

/// What node i knows locally at one instant.
struct LocalInformation {
  Vec2 h;     ///< bearing normal, equal to phi_perp
  double z;   ///< h^T s
  Mat2 P;     ///< h h^T
  Vec2 q;     ///< z h
  Phi6 phi6;  ///< pack_phi(P, q)
};

struct UnpackedInformation {
  Mat2 P;
  Vec2 q;
};

/// Throws SingularGeometryError when |p - s| <= range_epsilon. `sensor` is
/// only used to label the error.
BearingMeasurement bearing(const Vec2& p, const Vec2& s, double range_epsilon = kDefaultRangeEpsilon,
                           int sensor = -1);

LocalInformation local_information(const BearingMeasurement& m, const Vec2& s);

/// Layout: entries 0..3 hold P column-major (P00, P10, P01, P11), 4..5 hold q.
Phi6 pack_phi(const Mat2& P, const Vec2& q);

/// Inverse of pack_phi. P is returned symmetrized as (P + P^T) / 2, which is
/// a no-op for anything produced by pack_phi from a symmetric P.
UnpackedInformation unpack_phi(const Phi6& v);

/// Packed signals of every sensor for a target at p, one row per sensor.
SignalMatrix stacked_signals(std::span<const Vec2> sensors, const Vec2& p,
                             double range_epsilon = kDefaultRangeEpsilon);

}  // namespace bswarm
