#pragma once

#include <functional>

#include "bswarm/graph.hpp"
#include "bswarm/types.hpp"

namespace bswarm {

/// Margin applied on top of the finite-difference estimate of the signal
/// rate when certifying gamma.
inline constexpr double kGammaInflation = 1.25;

/// Chatter floor multiplier: the discretized protocol settles to
/// O(beta * h), never to zero.
inline constexpr double kChatterFactor = 10.0;

struct ConsensusParams {
  double beta = 1.0;
  double gamma_hat = 0.0;
  int n_hat = 1;
  double lambda2_hat = 1.0;
  /// Set when beta was supplied by hand instead of taken from the gain rule.
  bool manual_override = false;

  /// 1 + gamma_hat * sqrt(n_hat) / lambda2_hat.
  double beta_bound() const;
  bool satisfies_bound() const { return beta >= beta_bound(); }
};

/// Gain rule taken with equality. Throws ParameterError on lambda2_hat <= 0,
/// gamma_hat < 0 or n_hat < 1.
ConsensusParams beta_from_bound(double gamma_hat, int n_hat, double lambda2_hat);

/// Same bounds, but with a user-chosen beta (flags manual_override).
ConsensusParams with_beta(ConsensusParams params, double beta);

struct ConsensusState {
  SignalMatrix w;  ///< internal states
  SignalMatrix x;  ///< estimates of the network average, x = w + phi
  double t = 0.0;

  /// w = 0, x = 0 for n nodes.
  static ConsensusState zero(int n, double t0);
};

/// -beta * sum_{j in N_i} sgn(x_i - x_j), coordinate-wise, with sgn(0) = 0.
SignalMatrix consensus_rhs(const ConsensusState& state, const Graph& g, const ConsensusParams& params);

/// x = w + phi.
void refresh_estimates(ConsensusState& state, const SignalMatrix& phi);

/// Forward Euler: w += h * wdot, t += h.
void euler_step(ConsensusState& state, const SignalMatrix& wdot, double h);

/// x_i - mean_j(phi_j) for every node.
SignalMatrix consensus_error(const ConsensusState& state, const SignalMatrix& phi);

/// Column means of phi.
Phi6 signal_average(const SignalMatrix& phi);

/// max_k |sum_i w_ik|.
double conservation_residual(const ConsensusState& state);

/// The two published finite-time bounds. They coincide only when lambda2 = 1.
struct FiniteTimeBound {
  double t_star_root = 0.0;  ///< t0 + ||x~(t0)|| / sqrt(lambda2)
  double t_star_linear = 0.0;  ///< t0 + ||x~(t0)|| / lambda2
  double certified() const { return t_star_root > t_star_linear ? t_star_root : t_star_linear; }
};

/// Throws ParameterError on lambda2 <= 0.
FiniteTimeBound finite_time_bound(const SignalMatrix& x_tilde0, double lambda2, double t0 = 0.0);

/// sup over the grid t0, t0+dt, ..., tf of max_i ||d phi_i / dt||_inf, with
/// the derivative taken by central differences (one-sided at the ends).
/// The signal is evaluated once per grid point.
double signal_rate_sup(const std::function<SignalMatrix(double)>& signal, double t0, double tf, double dt);

}  // namespace bswarm
