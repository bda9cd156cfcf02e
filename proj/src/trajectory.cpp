#include "bswarm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bswarm/error.hpp"

namespace bswarm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Second derivatives of the natural cubic spline through (t_k, y_k).
std::vector<double> natural_spline_moments(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t m = t.size();
  std::vector<double> moments(m, 0.0);
  if (m < 3) return moments;
  const std::size_t inner = m - 2;
  std::vector<double> diag(inner), upper(inner), rhs(inner);
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const double h0 = t[k] - t[k - 1];
    const double h1 = t[k + 1] - t[k];
    diag[k - 1] = 2.0 * (h0 + h1);
    upper[k - 1] = h1;
    rhs[k - 1] = 6.0 * ((y[k + 1] - y[k]) / h1 - (y[k] - y[k - 1]) / h0);
  }
  // Thomas algorithm; the sub-diagonal entry for row r is h_{r} = t[r+1]-t[r].
  for (std::size_t r = 1; r < inner; ++r) {
    const double lower = t[r + 1] - t[r];
    const double f = lower / diag[r - 1];
    diag[r] -= f * upper[r - 1];
    rhs[r] -= f * rhs[r - 1];
  }
  std::vector<double> sol(inner);
  sol[inner - 1] = rhs[inner - 1] / diag[inner - 1];
  for (std::size_t r = inner - 1; r-- > 0;) sol[r] = (rhs[r] - upper[r] * sol[r + 1]) / diag[r];
  for (std::size_t r = 0; r < inner; ++r) moments[r + 1] = sol[r];
  return moments;
}

}  // namespace

std::string_view trajectory_kind(const TrajectorySpec& spec) {
  return std::visit(overloaded{[](const WaypointSpline&) { return std::string_view("waypoint-spline"); },
                               [](const Sinusoid&) { return std::string_view("sinusoid"); },
                               [](const PiecewiseVelocity&) { return std::string_view("piecewise-constant-velocity"); }},
                    spec);
}

TargetTrajectory::TargetTrajectory(TrajectorySpec spec, double t0, double tf)
    : spec_(std::move(spec)), t0_(t0), tf_(tf) {
  if (!(tf > t0)) throw ParameterError("trajectory window needs tf > t0");

  if (const auto* sp = std::get_if<WaypointSpline>(&spec_)) {
    const auto& t = sp->times;
    if (t.size() < 2 || t.size() != sp->points.size())
      throw ParameterError("waypoint-spline needs at least two waypoints with matching times");
    for (std::size_t k = 1; k < t.size(); ++k)
      if (!(t[k] > t[k - 1])) throw ParameterError("waypoint times must be strictly increasing");
    if (t.front() > t0 || t.back() < tf) throw ParameterError("waypoint times must cover [t0, tf]");

    std::vector<double> xs, ys;
    for (const auto& p : sp->points) {
      xs.push_back(p.x());
      ys.push_back(p.y());
    }
    const auto mx = natural_spline_moments(t, xs);
    const auto my = natural_spline_moments(t, ys);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      const double hk = t[k + 1] - t[k];
      CubicPiece piece;
      const Vec2 m0(mx[k], my[k]);
      const Vec2 m1(mx[k + 1], my[k + 1]);
      piece.a = sp->points[k];
      piece.b = (sp->points[k + 1] - sp->points[k]) / hk - hk * (2.0 * m0 + m1) / 6.0;
      piece.c = 0.5 * m0;
      piece.d = (m1 - m0) / (6.0 * hk);
      pieces_.push_back(piece);
    }
  } else if (const auto* pw = std::get_if<PiecewiseVelocity>(&spec_)) {
    if (pw->velocities.empty() || pw->breaks.size() + 1 != pw->velocities.size())
      throw ParameterError("piecewise-constant-velocity needs one more velocity than breaks");
    double prev = t0;
    for (double b : pw->breaks) {
      if (!(b > prev)) throw ParameterError("velocity breaks must be increasing and after t0");
      prev = b;
    }
    leg_starts_.push_back(pw->start);
    double start_t = t0;
    for (std::size_t k = 0; k < pw->breaks.size(); ++k) {
      leg_starts_.push_back(leg_starts_.back() + (pw->breaks[k] - start_t) * pw->velocities[k]);
      start_t = pw->breaks[k];
    }
  }
}

bool TargetTrajectory::continuously_differentiable() const noexcept {
  if (const auto* pw = std::get_if<PiecewiseVelocity>(&spec_)) {
    for (std::size_t k = 1; k < pw->velocities.size(); ++k)
      if (pw->velocities[k] != pw->velocities[k - 1]) return false;
  }
  return true;
}

TargetSample TargetTrajectory::sample(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(t0_), std::abs(tf_)));
  if (!(t >= t0_ - slack && t <= tf_ + slack)) {
    throw TimeRangeError("t = " + std::to_string(t) + " outside trajectory window [" + std::to_string(t0_) + ", " +
                         std::to_string(tf_) + "]");
  }
  t = std::clamp(t, t0_, tf_);

  return std::visit(overloaded{[&](const WaypointSpline&) { return sample_spline(t); },
                               [&](const Sinusoid& s) {
                                 TargetSample out;
                                 for (int k = 0; k < 2; ++k) {
                                   const double arg = s.omega(k) * t + s.phase(k);
                                   out.p(k) = s.origin(k) + s.velocity(k) * t + s.amplitude(k) * std::sin(arg);
                                   out.v(k) = s.velocity(k) + s.amplitude(k) * s.omega(k) * std::cos(arg);
                                 }
                                 return out;
                               },
                               [&](const PiecewiseVelocity&) { return sample_piecewise(t); }},
                    spec_);
}

TargetSample TargetTrajectory::sample_spline(double t) const {
  const auto& times = std::get<WaypointSpline>(spec_).times;
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  k = std::min(k, pieces_.size() - 1);
  const auto& c = pieces_[k];
  const double s = t - times[k];
  return {c.a + s * (c.b + s * (c.c + s * c.d)), c.b + s * (2.0 * c.c + 3.0 * s * c.d)};
}

TargetSample TargetTrajectory::sample_piecewise(double t) const {
  const auto& pw = std::get<PiecewiseVelocity>(spec_);
  const auto k = static_cast<std::size_t>(std::upper_bound(pw.breaks.begin(), pw.breaks.end(), t) - pw.breaks.begin());
  const double leg_t0 = k == 0 ? t0_ : pw.breaks[k - 1];
  return {leg_starts_[k] + (t - leg_t0) * pw.velocities[k], pw.velocities[k]};
}

}  // namespace bswarm
