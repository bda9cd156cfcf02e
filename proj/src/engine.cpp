#include "bswarm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "bswarm/error.hpp"
#include "bswarm/geometry.hpp"
#include "bswarm/tracker.hpp"

namespace bswarm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kOracleGapFactor = 100.0;

std::string failed_checks(const ValidationReport& report) {
  std::string out = "scenario failed validation:";
  for (const auto& c : report.checks)
    if (!c.passed && c.fatal) out += " [" + c.id + "] " + c.detail + ";";
  return out;
}

}  // namespace

ValidationFailed::ValidationFailed(ValidationReport report)
    : Error(failed_checks(report)), report_(std::move(report)) {}

std::vector<double> time_grid(double t0, double tf, double h) {
  const long long steps = grid_steps(t0, tf, h);
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (long long k = 0; k < steps; ++k) grid[static_cast<std::size_t>(k)] = t0 + static_cast<double>(k) * h;
  grid.back() = tf;
  return grid;
}

RunResult run(const ScenarioConfig& cfg, const RunOptions& options) {
  RunResult result;
  result.report = validate_scenario(cfg);
  const auto& report = result.report;
  if (!report.ok() && !options.force) throw ValidationFailed(report);
  // Even a forced run needs a usable graph, gain and time grid.
  const auto* graph_check = report.find("graph");
  const auto* time_check = report.find("time");
  const auto* sensor_check = report.find("sensors");
  if (!graph_check || !graph_check->passed || !time_check->passed || !sensor_check->passed || !report.params ||
      !report.t_star) {
    throw ValidationFailed(report);
  }

  const Graph graph = Graph::build(cfg.graph.n, cfg.graph.edges);
  const TargetTrajectory traj(cfg.trajectory, cfg.sim.t0, cfg.sim.tf);
  const ConsensusParams params = *report.params;
  const int n = graph.n();
  const auto& sim = cfg.sim;
  const int decimate = std::max(1, options.decimate.value_or(cfg.output.decimate));

  RunSummary& sum = result.summary;
  sum.n = n;
  sum.h = sim.h;
  sum.t0 = sim.t0;
  sum.tf = sim.tf;
  sum.beta = params.beta;
  sum.gamma = params.gamma_hat;
  sum.lambda2 = graph.lambda2();
  sum.x_tilde0_norm = *report.x_tilde0_norm;
  sum.t_star = *report.t_star;
  sum.chatter_floor = kChatterFactor * params.beta * sim.h;
  sum.consensus_time = kNaN;
  sum.first_below_floor.assign(static_cast<std::size_t>(n), kNaN);
  sum.steady_start = std::max(sum.t_star.certified(), sim.t0 + 0.5 * (sim.tf - sim.t0));
  sum.min_sigma = std::numeric_limits<double>::infinity();

  std::vector<double> rmse_sq_acc(static_cast<std::size_t>(n), 0.0);
  std::vector<double> msce_sq_acc(static_cast<std::size_t>(n), 0.0);

  ConsensusState state = ConsensusState::zero(n, sim.t0);
  if (sim.initial_w) state.w = *sim.initial_w;

  std::vector<Vec2> last_valid(static_cast<std::size_t>(n), fallback_point(cfg));
  const long long steps = grid_steps(sim.t0, sim.tf, sim.h);
  auto time_at = [&](long long k) { return k >= steps ? sim.tf : sim.t0 + static_cast<double>(k) * sim.h; };

  StackedObservation obs;
  obs.H.resize(n, 2);
  obs.z.resize(n);
  SignalMatrix phi(n, kSignalDim);
  RunRecord rec;
  rec.p.resize(static_cast<std::size_t>(n));
  rec.valid.resize(static_cast<std::size_t>(n));
  rec.rmse.resize(static_cast<std::size_t>(n));
  rec.msce.resize(static_cast<std::size_t>(n));

  for (long long k = 0; k <= steps; ++k) {
    const double t = time_at(k);
    const Vec2 ptrue = traj.position(t);

    try {
      for (int i = 0; i < n; ++i) {
        const auto& s = cfg.sensors[static_cast<std::size_t>(i)];
        const auto info = local_information(bearing(ptrue, s, sim.range_epsilon, i), s);
        phi.row(i) = info.phi6.transpose();
        obs.H.row(i) = info.h.transpose();
        obs.z(i) = info.z;
      }
    } catch (const SingularGeometryError& e) {
      sum.aborted = true;
      sum.abort_time = t;
      sum.abort_message = e.what();
      break;
    }

    refresh_estimates(state, phi);
    state.t = t;

    const Phi6 phibar = signal_average(phi);
    const SignalMatrix xtilde = state.x.rowwise() - phibar.transpose();
    const double xt_norm = xtilde.norm();
    const double residual = conservation_residual(state);
    const Mat2 pbar = unpack_phi(phibar).P;
    const double kappa = condition_number(pbar);

    const double sigma = smallest_singular_value(obs.H);
    Vec2 pstar(kNaN, kNaN);
    if (sigma >= kDefaultSigmaMinTol) {
      try {
        pstar = centralized_solution(obs);
      } catch (const Error&) {
        pstar = Vec2(kNaN, kNaN);
      }
    }
    sum.min_sigma = std::min(sum.min_sigma, sigma);
    if (sigma >= sim.sigma_min_threshold && std::isfinite(pstar.x()))
      sum.max_truth_gap = std::max(sum.max_truth_gap, (pstar - ptrue).norm());

    rec.t = t;
    rec.pstar = pstar;
    rec.ptrue = ptrue;
    rec.xtilde_norm = xt_norm;
    rec.conservation_residual = residual;
    rec.kappa = kappa;

    const bool after_tstar = t >= sum.t_star.certified();
    const bool steady = t >= sum.steady_start;
    const double gap_scale = kOracleGapFactor * params.beta * sim.h * kappa;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const Phi6 xi = state.x.row(i).transpose();
      const TrackEstimate est = local_solution(xi, last_valid[ui]);
      if (est.valid) last_valid[ui] = est.p_hat;
      const Vec2 err = pstar - est.p_hat;
      rec.p[ui] = est.p_hat;
      rec.valid[ui] = est.valid ? 1 : 0;
      rec.rmse[ui] = std::sqrt(0.5 * err.squaredNorm());
      rec.msce[ui] = std::sqrt(xtilde.row(i).squaredNorm() / 6.0);

      if (std::isnan(sum.first_below_floor[ui]) && rec.rmse[ui] <= sum.chatter_floor) sum.first_below_floor[ui] = t;
      if (after_tstar && std::isfinite(pstar.x())) {
        const double gap = err.norm();
        sum.max_oracle_gap = std::max(sum.max_oracle_gap, gap);
        const double ratio = gap_scale > 0.0 ? gap / gap_scale : std::numeric_limits<double>::infinity();
        sum.max_oracle_gap_ratio = std::max(sum.max_oracle_gap_ratio, ratio);
      }
      if (steady) {
        rmse_sq_acc[ui] += rec.rmse[ui] * rec.rmse[ui];
        msce_sq_acc[ui] += rec.msce[ui] * rec.msce[ui];
      }
    }
    if (steady) ++sum.steady_samples;
    if (std::isnan(sum.consensus_time) && xt_norm <= sum.chatter_floor) sum.consensus_time = t;
    sum.max_conservation_residual = std::max(sum.max_conservation_residual, residual);

    if (options.keep_records && (k % decimate == 0 || k == steps)) result.records.push_back(rec);

    if (k < steps) {
      euler_step(state, consensus_rhs(state, graph, params), time_at(k + 1) - t);
      ++sum.steps;
    }
  }

  sum.converged = !std::isnan(sum.consensus_time);
  sum.steady_rmse.assign(static_cast<std::size_t>(n), kNaN);
  sum.steady_msce.assign(static_cast<std::size_t>(n), kNaN);
  if (sum.steady_samples > 0) {
    const auto count = static_cast<double>(sum.steady_samples);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      sum.steady_rmse[i] = std::sqrt(rmse_sq_acc[i] / count);
      sum.steady_msce[i] = std::sqrt(msce_sq_acc[i] / count);
    }
  }
  return result;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "beta") return SweepParameter::Beta;
  if (name == "h") return SweepParameter::StepSize;
  if (name == "lambda2_hat") return SweepParameter::Lambda2Hat;
  throw ParameterError("unknown sweep parameter '" + std::string(name) + "' (expected beta, h or lambda2_hat)");
}

std::string_view sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::Beta: return "beta";
    case SweepParameter::StepSize: return "h";
    case SweepParameter::Lambda2Hat: return "lambda2_hat";
  }
  return "?";
}

std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepParameter parameter, std::span<const double> values,
                            bool relative_beta) {
  double beta_bound = 1.0;
  if (parameter == SweepParameter::Beta && relative_beta) {
    const auto report = validate_scenario(base);
    if (!report.params) throw ValidationFailed(report);
    beta_bound = report.params->beta_bound();
  }

  auto one = [&base, parameter, relative_beta, beta_bound](double value) {
    SweepRow row;
    row.value = value;
    ScenarioConfig cfg = base;
    RunOptions opts;
    opts.keep_records = false;
    switch (parameter) {
      case SweepParameter::Beta:
        cfg.bounds.beta = relative_beta ? value * beta_bound : value;
        opts.force = true;
        break;
      case SweepParameter::StepSize: cfg.sim.h = value; break;
      case SweepParameter::Lambda2Hat: cfg.bounds.lambda2_hat = value; break;
    }
    row.h = cfg.sim.h;
    try {
      const auto res = run(cfg, opts);
      const auto& s = res.summary;
      row.beta = s.beta;
      row.consensus_time = s.consensus_time;
      row.steady_rmse = s.steady_rmse.empty() ? kNaN : *std::max_element(s.steady_rmse.begin(), s.steady_rmse.end());
      row.max_conservation_residual = s.max_conservation_residual;
      row.converged = s.converged && !s.aborted;
    } catch (const std::exception& e) {
      row.beta = cfg.bounds.beta.value_or(kNaN);
      row.consensus_time = kNaN;
      row.steady_rmse = kNaN;
      row.error = e.what();
    }
    return row;
  };

  // Independent runs; rows are collected in value order, not completion order.
  std::vector<std::future<SweepRow>> pending;
  pending.reserve(values.size());
  for (double v : values) pending.push_back(std::async(std::launch::async, one, v));
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (auto& f : pending) rows.push_back(f.get());
  return rows;
}

}  // namespace bswarm
