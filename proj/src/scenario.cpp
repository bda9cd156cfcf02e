#include "bswarm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bswarm/error.hpp"
#include "bswarm/geometry.hpp"
#include "bswarm/tracker.hpp"

namespace bswarm {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void add(ValidationReport& r, std::string id, std::string description, bool passed, std::string detail,
         bool fatal = true) {
  r.checks.push_back({std::move(id), std::move(description), passed, fatal, std::move(detail)});
}

}  // namespace

long long grid_steps(double t0, double tf, double h) {
  if (!(h > 0.0) || !(tf > t0)) throw ParameterError("time grid needs h > 0 and tf > t0");
  return std::max(1LL, static_cast<long long>(std::ceil((tf - t0) / h - 1e-9)));
}

Vec2 fallback_point(const ScenarioConfig& cfg) {
  if (cfg.sim.fallback_point) return *cfg.sim.fallback_point;
  Vec2 c = Vec2::Zero();
  for (const auto& s : cfg.sensors) c += s;
  return cfg.sensors.empty() ? c : Vec2(c / static_cast<double>(cfg.sensors.size()));
}

GeometrySurvey survey_geometry(const ScenarioConfig& cfg, double dt) {
  const TargetTrajectory traj(cfg.trajectory, cfg.sim.t0, cfg.sim.tf);
  const long long count = grid_steps(cfg.sim.t0, cfg.sim.tf, dt);
  auto time_at = [&](long long k) { return k >= count ? cfg.sim.tf : cfg.sim.t0 + static_cast<double>(k) * dt; };

  GeometrySurvey out;
  out.dt = dt;
  out.min_clearance = std::numeric_limits<double>::infinity();
  out.min_sigma = std::numeric_limits<double>::infinity();

  const auto n = static_cast<Eigen::Index>(cfg.sensors.size());
  Eigen::Matrix<double, Eigen::Dynamic, 2> H(n, 2);
  SignalMatrix prev, cur, next;
  bool singular = false;

  // Evaluate sample k into `dst`; returns false if the bearing is undefined.
  auto evaluate = [&](long long k, SignalMatrix& dst) {
    const double t = time_at(k);
    const Vec2 p = traj.position(t);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = (p - cfg.sensors[static_cast<std::size_t>(i)]).norm();
      if (d < out.min_clearance) {
        out.min_clearance = d;
        out.min_clearance_time = t;
        out.closest_sensor = static_cast<int>(i);
      }
    }
    if (out.min_clearance <= cfg.sim.range_epsilon) {
      singular = true;
      return false;
    }
    dst.resize(n, kSignalDim);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& s = cfg.sensors[static_cast<std::size_t>(i)];
      const auto info = local_information(bearing(p, s, cfg.sim.range_epsilon, static_cast<int>(i)), s);
      H.row(i) = info.h.transpose();
      dst.row(i) = info.phi6.transpose();
    }
    const double sigma = smallest_singular_value(H);
    if (sigma < out.min_sigma) {
      out.min_sigma = sigma;
      out.min_sigma_time = t;
    }
    return true;
  };

  auto rate = [](const SignalMatrix& a, const SignalMatrix& b, double span) {
    return ((b - a) / span).cwiseAbs().maxCoeff();
  };

  bool have_prev = evaluate(0, prev);
  bool have_cur = evaluate(1, cur);
  if (have_prev && have_cur) out.raw_rate = rate(prev, cur, time_at(1) - time_at(0));
  for (long long k = 1; k < count; ++k) {
    const bool have_next = evaluate(k + 1, next);
    if (have_prev && have_next) out.raw_rate = std::max(out.raw_rate, rate(prev, next, time_at(k + 1) - time_at(k - 1)));
    std::swap(prev, cur);
    std::swap(cur, next);
    have_prev = have_cur;
    have_cur = have_next;
  }
  if (have_prev && have_cur)
    out.raw_rate = std::max(out.raw_rate, rate(prev, cur, time_at(count) - time_at(count - 1)));
  if (singular) {
    out.raw_rate = std::numeric_limits<double>::infinity();
    out.min_sigma = 0.0;
  }
  return out;
}

GammaCertificate certify_gamma(const ScenarioConfig& cfg, const GeometrySurvey& survey) {
  if (!(survey.min_clearance >= cfg.sim.min_clearance)) {
    throw CertificationError("trajectory passes within " + fmt(survey.min_clearance) + " of sensor " +
                             std::to_string(survey.closest_sensor) + " at t = " + fmt(survey.min_clearance_time) +
                             " (minimum clearance " + fmt(cfg.sim.min_clearance) + "); signal rate is unbounded");
  }
  GammaCertificate cert;
  cert.raw = survey.raw_rate;
  cert.certified = kGammaInflation * std::max(survey.raw_rate, kGammaFloor);
  cert.dt = survey.dt;
  return cert;
}

GammaCertificate certify_gamma(const ScenarioConfig& cfg) {
  return certify_gamma(cfg, survey_geometry(cfg, cfg.sim.h / 10.0));
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed || !c.fatal; });
}

const ValidationCheck* ValidationReport::find(std::string_view id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

ValidationReport validate_scenario(const ScenarioConfig& cfg) {
  ValidationReport r;
  const auto& sim = cfg.sim;
  r.n = cfg.graph.n;
  r.n_hat = cfg.bounds.n_hat;
  r.lambda2_hat = cfg.bounds.lambda2_hat;

  const bool time_ok = sim.h > 0.0 && sim.tf > sim.t0 && sim.h <= sim.tf - sim.t0;
  add(r, "time", "0 < h <= tf - t0", time_ok,
      "h = " + fmt(sim.h) + ", t0 = " + fmt(sim.t0) + ", tf = " + fmt(sim.tf));

  const bool sensors_ok = static_cast<int>(cfg.sensors.size()) == cfg.graph.n;
  add(r, "sensors", "one sensor position per node", sensors_ok,
      std::to_string(cfg.sensors.size()) + " sensors for " + std::to_string(cfg.graph.n) + " nodes");

  std::optional<Graph> graph;
  try {
    graph = Graph::build(cfg.graph.n, cfg.graph.edges, Graph::Connectivity::Allow);
    r.lambda2 = graph->lambda2();
    add(r, "graph", "connected undirected graph", graph->connected(),
        graph->connected() ? "connected, lambda2 = " + fmt(r.lambda2) : "graph is not connected");
  } catch (const GraphError& e) {
    add(r, "graph", "connected undirected graph", false, e.what());
  }

  add(r, "n_hat", "n_hat >= n", cfg.bounds.n_hat >= cfg.graph.n,
      cfg.bounds.n_hat >= cfg.graph.n
          ? "n_hat = " + std::to_string(cfg.bounds.n_hat) + ", n = " + std::to_string(cfg.graph.n)
          : "n_hat < n (" + std::to_string(cfg.bounds.n_hat) + " < " + std::to_string(cfg.graph.n) + ")");

  if (graph) {
    const bool ok = cfg.bounds.lambda2_hat > 0.0 && cfg.bounds.lambda2_hat <= r.lambda2 * (1.0 + 1e-12);
    add(r, "lambda2_hat", "0 < lambda2_hat <= lambda2", ok,
        "lambda2_hat = " + fmt(cfg.bounds.lambda2_hat) + ", lambda2 = " + fmt(r.lambda2));
  }

  std::optional<TargetTrajectory> traj;
  if (time_ok) {
    try {
      traj.emplace(cfg.trajectory, sim.t0, sim.tf);
      add(r, "trajectory", "trajectory parameters well formed", true, std::string(trajectory_kind(cfg.trajectory)));
    } catch (const Error& e) {
      add(r, "trajectory", "trajectory parameters well formed", false, e.what());
    }
  }

  if (traj) {
    add(r, "smoothness", "continuously differentiable target motion", traj->continuously_differentiable(),
        traj->continuously_differentiable() ? "C1 trajectory"
                                            : "velocity jumps put this trajectory outside the bounded-rate model",
        /*fatal=*/false);
  }

  if (traj && sensors_ok) {
    r.survey = survey_geometry(cfg, sim.h / 10.0);
    const auto& sv = *r.survey;
    add(r, "clearance", "target keeps min_clearance from every sensor", sv.min_clearance >= sim.min_clearance,
        "closest approach " + fmt(sv.min_clearance) + " to sensor " + std::to_string(sv.closest_sensor) + " at t = " +
            fmt(sv.min_clearance_time));
    const bool observable = sv.min_sigma >= sim.sigma_min_threshold && cfg.graph.n > 2;
    add(r, "observability", "observability: rank(H) = 2 < n", observable,
        cfg.graph.n > 2 ? "min sigma_min(H) = " + fmt(sv.min_sigma) + " at t = " + fmt(sv.min_sigma_time) +
                              " (threshold " + fmt(sim.sigma_min_threshold) + ")"
                        : "observability needs n > 2");

    try {
      r.gamma_certificate = certify_gamma(cfg, sv);
    } catch (const CertificationError& e) {
      if (!cfg.bounds.gamma) add(r, "gamma", "signal rate bound certified", false, e.what());
    }
    if (cfg.bounds.gamma) {
      r.gamma = *cfg.bounds.gamma;
      const bool covers = !r.gamma_certificate || *r.gamma >= r.gamma_certificate->raw;
      add(r, "gamma", "signal rate bound certified", true,
          "override gamma = " + fmt(*r.gamma) +
              (r.gamma_certificate ? " (certified " + fmt(r.gamma_certificate->certified) + ")" : ""));
      if (!covers)
        add(r, "gamma_override", "gamma override covers the measured rate", false,
            "override " + fmt(*r.gamma) + " < measured " + fmt(r.gamma_certificate->raw), /*fatal=*/false);
    } else if (r.gamma_certificate) {
      r.gamma = r.gamma_certificate->certified;
      add(r, "gamma", "signal rate bound certified", true,
          "gamma = " + fmt(r.gamma_certificate->certified) + " (raw " + fmt(r.gamma_certificate->raw) + ", grid " +
              fmt(r.gamma_certificate->dt) + ")");
    }
  }

  if (r.gamma && cfg.bounds.n_hat >= 1 && cfg.bounds.lambda2_hat > 0.0) {
    auto params = beta_from_bound(*r.gamma, cfg.bounds.n_hat, cfg.bounds.lambda2_hat);
    if (cfg.bounds.beta) params = with_beta(params, *cfg.bounds.beta);
    r.params = params;
    add(r, "beta", "beta >= 1 + gamma sqrt(n_hat) / lambda2_hat", params.satisfies_bound(),
        "beta = " + fmt(params.beta) + (params.manual_override ? " (manual), bound " : ", bound ") +
            fmt(params.beta_bound()));
  }

  if (graph && graph->connected() && traj && sensors_ok && time_ok) {
    try {
      const SignalMatrix phi0 = stacked_signals(cfg.sensors, traj->position(sim.t0), sim.range_epsilon);
      ConsensusState st = ConsensusState::zero(cfg.graph.n, sim.t0);
      if (sim.initial_w) st.w = *sim.initial_w;
      refresh_estimates(st, phi0);
      const SignalMatrix xt0 = consensus_error(st, phi0);
      r.x_tilde0_norm = xt0.norm();
      r.t_star = finite_time_bound(xt0, r.lambda2, sim.t0);
    } catch (const Error&) {
      // Singular initial geometry is already reported by the clearance check.
    }
  }
  return r;
}

}  // namespace bswarm
