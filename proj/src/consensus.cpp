#include "bswarm/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bswarm/error.hpp"

namespace bswarm {

namespace {

inline double sgn(double v) { return static_cast<double>((0.0 < v) - (v < 0.0)); }

}  // namespace

double ConsensusParams::beta_bound() const {
  return 1.0 + gamma_hat * std::sqrt(static_cast<double>(n_hat)) / lambda2_hat;
}

ConsensusParams beta_from_bound(double gamma_hat, int n_hat, double lambda2_hat) {
  if (!(lambda2_hat > 0.0)) throw ParameterError("lambda2_hat must be > 0, got " + std::to_string(lambda2_hat));
  if (!(gamma_hat >= 0.0)) throw ParameterError("gamma_hat must be >= 0, got " + std::to_string(gamma_hat));
  if (n_hat < 1) throw ParameterError("n_hat must be >= 1, got " + std::to_string(n_hat));
  ConsensusParams p;
  p.gamma_hat = gamma_hat;
  p.n_hat = n_hat;
  p.lambda2_hat = lambda2_hat;
  p.beta = p.beta_bound();
  return p;
}

ConsensusParams with_beta(ConsensusParams params, double beta) {
  if (!(beta >= 0.0)) throw ParameterError("beta must be >= 0, got " + std::to_string(beta));
  params.beta = beta;
  params.manual_override = true;
  return params;
}

ConsensusState ConsensusState::zero(int n, double t0) {
  ConsensusState s;
  s.w = SignalMatrix::Zero(n, kSignalDim);
  s.x = SignalMatrix::Zero(n, kSignalDim);
  s.t = t0;
  return s;
}

SignalMatrix consensus_rhs(const ConsensusState& state, const Graph& g, const ConsensusParams& params) {
  const int n = g.n();
  SignalMatrix wdot = SignalMatrix::Zero(n, kSignalDim);
  const auto& nbrs = g.neighbors();
  for (int i = 0; i < n; ++i) {
    for (int j : nbrs[static_cast<std::size_t>(i)]) {
      for (int k = 0; k < kSignalDim; ++k) wdot(i, k) -= sgn(state.x(i, k) - state.x(j, k));
    }
  }
  wdot *= params.beta;
  return wdot;
}

void refresh_estimates(ConsensusState& state, const SignalMatrix& phi) { state.x = state.w + phi; }

void euler_step(ConsensusState& state, const SignalMatrix& wdot, double h) {
  state.w += h * wdot;
  state.t += h;
}

Phi6 signal_average(const SignalMatrix& phi) { return phi.colwise().mean().transpose(); }

SignalMatrix consensus_error(const ConsensusState& state, const SignalMatrix& phi) {
  const Phi6 mean = signal_average(phi);
  return state.x.rowwise() - mean.transpose();
}

double conservation_residual(const ConsensusState& state) {
  return state.w.colwise().sum().cwiseAbs().maxCoeff();
}

FiniteTimeBound finite_time_bound(const SignalMatrix& x_tilde0, double lambda2, double t0) {
  if (!(lambda2 > 0.0)) throw ParameterError("lambda2 must be > 0, got " + std::to_string(lambda2));
  const double norm = x_tilde0.norm();
  return {t0 + norm / std::sqrt(lambda2), t0 + norm / lambda2};
}

double signal_rate_sup(const std::function<SignalMatrix(double)>& signal, double t0, double tf, double dt) {
  if (!(dt > 0.0) || !(tf >= t0)) throw ParameterError("signal_rate_sup needs dt > 0 and tf >= t0");
  const auto count = static_cast<long long>(std::ceil((tf - t0) / dt - 1e-9));
  auto time_at = [&](long long k) { return k >= count ? tf : t0 + static_cast<double>(k) * dt; };
  if (count == 0) return 0.0;

  // Rolling window of three samples.
  SignalMatrix prev = signal(time_at(0));
  SignalMatrix cur = signal(time_at(1));
  double sup = ((cur - prev) / (time_at(1) - time_at(0))).cwiseAbs().maxCoeff();
  for (long long k = 1; k < count; ++k) {
    SignalMatrix next = signal(time_at(k + 1));
    const double span = time_at(k + 1) - time_at(k - 1);
    sup = std::max(sup, ((next - prev) / span).cwiseAbs().maxCoeff());
    prev = std::move(cur);
    cur = std::move(next);
  }
  sup = std::max(sup, ((cur - prev) / (time_at(count) - time_at(count - 1))).cwiseAbs().maxCoeff());
  return sup;
}

}  // namespace bswarm
