#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "bswarm/types.hpp"

namespace bswarm {

/// Natural cubic spline through timed waypoints (C2, hence C1).
struct WaypointSpline {
  std::vector<double> times;
  std::vector<Vec2> points;
};

/// p(t) = origin + velocity * t + amplitude .* sin(omega .* t + phase).
struct Sinusoid {
  Vec2 origin = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Vec2 amplitude = Vec2::Zero();
  Vec2 omega = Vec2::Zero();
  Vec2 phase = Vec2::Zero();
};

/// Constant velocity legs starting from `start` at t0. velocities[k] holds
/// on [breaks[k-1], breaks[k]), so breaks.size() == velocities.size() - 1.
/// Velocity is right-continuous at breaks.
struct PiecewiseVelocity {
  Vec2 start = Vec2::Zero();
  std::vector<double> breaks;
  std::vector<Vec2> velocities;
};

using TrajectorySpec = std::variant<WaypointSpline, Sinusoid, PiecewiseVelocity>;

std::string_view trajectory_kind(const TrajectorySpec& spec);

struct TargetSample {
  Vec2 p;
  Vec2 v;
};

class TargetTrajectory {
 public:
  /// Throws ParameterError on malformed parameters (unsorted knots, fewer
  /// than two waypoints, waypoints not covering [t0, tf], ...).
  TargetTrajectory(TrajectorySpec spec, double t0, double tf);

  /// Throws TimeRangeError outside [t0, tf].
  TargetSample sample(double t) const;
  Vec2 position(double t) const { return sample(t).p; }

  double t0() const noexcept { return t0_; }
  double tf() const noexcept { return tf_; }
  const TrajectorySpec& spec() const noexcept { return spec_; }
  /// False for piecewise-constant velocity (velocity jumps).
  bool continuously_differentiable() const noexcept;

 private:
  struct CubicPiece {
    Vec2 a, b, c, d;  // p = a + b s + c s^2 + d s^3, s = t - knot
  };

  TargetSample sample_spline(double t) const;
  TargetSample sample_piecewise(double t) const;

  TrajectorySpec spec_;
  double t0_;
  double tf_;
  std::vector<CubicPiece> pieces_;
  std::vector<Vec2> leg_starts_;  // position at the start of each leg
};

}  // namespace bswarm
