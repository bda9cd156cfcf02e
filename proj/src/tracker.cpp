#include "bswarm/tracker.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bswarm/error.hpp"
#include "bswarm/geometry.hpp"

namespace bswarm {

StackedObservation stack_observations(std::span<const Vec2> sensors, const Vec2& p) {
  StackedObservation obs;
  const auto n = static_cast<Eigen::Index>(sensors.size());
  obs.H.resize(n, 2);
  obs.z.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = sensors[static_cast<std::size_t>(i)];
    const auto info = local_information(bearing(p, s, kDefaultRangeEpsilon, static_cast<int>(i)), s);
    obs.H.row(i) = info.h.transpose();
    obs.z(i) = info.z;
  }
  return obs;
}

double smallest_singular_value(const Eigen::Matrix<double, Eigen::Dynamic, 2>& H) {
  if (H.rows() < 2) return 0.0;
  Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 2>> svd(H);
  return svd.singularValues().minCoeff();
}

Vec2 centralized_solution(const StackedObservation& obs, double sigma_min_tol) {
  const double sigma = smallest_singular_value(obs.H);
  if (sigma < sigma_min_tol) {
    throw ObservabilityError(sigma, "H is rank deficient (sigma_min = " + std::to_string(sigma) + ")");
  }

  // Route 1: orthogonal factorization of H itself.
  const Vec2 via_qr = obs.H.colPivHouseholderQr().solve(obs.z);

  // Route 2: averaged normal equations Pbar p = qbar, closed-form 2x2 solve.
  const double inv_n = 1.0 / static_cast<double>(obs.H.rows());
  const Mat2 pbar = inv_n * (obs.H.transpose() * obs.H);
  const Vec2 qbar = inv_n * (obs.H.transpose() * obs.z);
  const double det = pbar(0, 0) * pbar(1, 1) - pbar(0, 1) * pbar(1, 0);
  const Vec2 via_avg((pbar(1, 1) * qbar(0) - pbar(0, 1) * qbar(1)) / det,
                     (pbar(0, 0) * qbar(1) - pbar(1, 0) * qbar(0)) / det);

  const double gap = (via_qr - via_avg).norm();
  if (gap > 1e-10 * (1.0 + via_qr.norm())) {
    throw Error("centralized solution cross-check failed: routes differ by " + std::to_string(gap));
  }
  return via_qr;
}

double condition_number(const Mat2& P) {
  const double mean = 0.5 * (P(0, 0) + P(1, 1));
  const double half_diff = 0.5 * (P(0, 0) - P(1, 1));
  const double off = 0.5 * (P(0, 1) + P(1, 0));
  const double radius = std::hypot(half_diff, off);
  const double hi = std::abs(mean) + radius;
  const double lo = std::abs(std::abs(mean) - radius);
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

TrackEstimate local_solution(const Phi6& x, const Vec2& fallback, double det_tol) {
  const auto [P, q] = unpack_phi(x);
  TrackEstimate est;
  const double det = P(0, 0) * P(1, 1) - P(0, 1) * P(1, 0);
  const double scale = P.cwiseAbs().maxCoeff();
  est.condition = condition_number(P);
  if (!std::isfinite(det) || !(std::abs(det) > det_tol * scale * scale)) {
    est.valid = false;
    est.p_hat = fallback;
    return est;
  }
  est.valid = true;
  est.p_hat = Vec2((P(1, 1) * q(0) - P(0, 1) * q(1)) / det, (P(0, 0) * q(1) - P(1, 0) * q(0)) / det);
  return est;
}

double observability_check(std::span<const Vec2> sensors, const Vec2& p) {
  return smallest_singular_value(stack_observations(sensors, p).H);
}

}  // namespace bswarm
