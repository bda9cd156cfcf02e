#pragma once

#include <span>

#include "bswarm/types.hpp"

namespace bswarm {

inline constexpr double kDefaultDetTol = 1e-12;
inline constexpr double kDefaultSigmaMinTol = 1e-8;

/// One node's target estimate from its consensus state.
struct TrackEstimate {
  Vec2 p_hat = Vec2::Zero();
  double condition = 0.0;  ///< condition number of the unpacked P (inf if singular)
  bool valid = false;
};

/// Rows h_i^T and right-hand side z_i of the stacked linear system z = H p.
struct StackedObservation {
  Eigen::Matrix<double, Eigen::Dynamic, 2> H;
  Vector z;
};

StackedObservation stack_observations(std::span<const Vec2> sensors, const Vec2& p);

double smallest_singular_value(const Eigen::Matrix<double, Eigen::Dynamic, 2>& H);

/// Least-squares target position computed two ways (Householder QR on H,
/// and the averaged normal equations) and cross-checked to 1e-10 relative.
/// Throws ObservabilityError when sigma_min(H) < sigma_min_tol.
Vec2 centralized_solution(const StackedObservation& obs, double sigma_min_tol = kDefaultSigmaMinTol);

/// Solves P_x p = q_x from a node's 6-vector with a closed-form 2x2 inverse.
/// Singular systems (|det| <= det_tol * ||P_x||_max^2) return valid = false
/// and p_hat = fallback.
TrackEstimate local_solution(const Phi6& x, const Vec2& fallback, double det_tol = kDefaultDetTol);

/// sigma_min(H) for the true geometry.
double observability_check(std::span<const Vec2> sensors, const Vec2& p);

/// lambda_max / lambda_min of a symmetric 2x2 matrix; inf when singular.
double condition_number(const Mat2& P);

}  // namespace bswarm
