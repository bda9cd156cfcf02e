#include "bswarm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "bswarm/error.hpp"

namespace bswarm::io {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!keys.count(key)) throw ScenarioError(path.empty() ? key : path + "." + key, "unknown field");
}

const json& require(const json& obj, const char* key, const std::string& path) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!obj.is_object()) throw ScenarioError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError(field, "missing required field");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ScenarioError(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ScenarioError(path, "expected an integer");
  return v.get<int>();
}

Vec2 as_vec2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ScenarioError(path, "expected [x, y]");
  return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ScenarioError(path, "expected an array");
  return v;
}

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

TrajectorySpec parse_trajectory(const json& t) {
  const std::string path = "trajectory";
  if (!t.is_object()) throw ScenarioError(path, "expected an object");
  const json& kind_v = require(t, "kind", path);
  if (!kind_v.is_string()) throw ScenarioError(path + ".kind", "expected a string");
  const auto kind = kind_v.get<std::string>();

  if (kind == "waypoint-spline") {
    reject_unknown(t, path, {"kind", "waypoints"});
    WaypointSpline spec;
    const auto& wps = as_array(require(t, "waypoints", path), path + ".waypoints");
    for (std::size_t i = 0; i < wps.size(); ++i) {
      const auto p = indexed(path + ".waypoints", i);
      if (!wps[i].is_array() || wps[i].size() != 3) throw ScenarioError(p, "expected [t, x, y]");
      spec.times.push_back(as_number(wps[i][0], p + "[0]"));
      spec.points.emplace_back(as_number(wps[i][1], p + "[1]"), as_number(wps[i][2], p + "[2]"));
    }
    return spec;
  }
  if (kind == "sinusoid") {
    reject_unknown(t, path, {"kind", "origin", "velocity", "amplitude", "omega", "phase"});
    Sinusoid spec;
    auto get = [&](const char* key, Vec2& dst) {
      if (const json* v = optional_field(t, key)) dst = as_vec2(*v, path + "." + key);
    };
    get("origin", spec.origin);
    get("velocity", spec.velocity);
    get("amplitude", spec.amplitude);
    get("omega", spec.omega);
    get("phase", spec.phase);
    return spec;
  }
  if (kind == "piecewise-constant-velocity") {
    reject_unknown(t, path, {"kind", "start", "breaks", "velocities"});
    PiecewiseVelocity spec;
    spec.start = as_vec2(require(t, "start", path), path + ".start");
    if (const json* b = optional_field(t, "breaks")) {
      as_array(*b, path + ".breaks");
      for (std::size_t i = 0; i < b->size(); ++i) spec.breaks.push_back(as_number((*b)[i], indexed(path + ".breaks", i)));
    }
    const auto& vs = as_array(require(t, "velocities", path), path + ".velocities");
    for (std::size_t i = 0; i < vs.size(); ++i) spec.velocities.push_back(as_vec2(vs[i], indexed(path + ".velocities", i)));
    return spec;
  }
  throw ScenarioError(path + ".kind",
                      "unknown trajectory kind '" + kind + "' (expected waypoint-spline, sinusoid or "
                      "piecewise-constant-velocity)");
}

json vec2_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

json trajectory_json(const TrajectorySpec& spec) {
  return std::visit(overloaded{[](const WaypointSpline& s) {
                                 json wps = json::array();
                                 for (std::size_t i = 0; i < s.times.size(); ++i)
                                   wps.push_back({s.times[i], s.points[i].x(), s.points[i].y()});
                                 return json{{"kind", "waypoint-spline"}, {"waypoints", wps}};
                               },
                               [](const Sinusoid& s) {
                                 return json{{"kind", "sinusoid"},
                                             {"origin", vec2_json(s.origin)},
                                             {"velocity", vec2_json(s.velocity)},
                                             {"amplitude", vec2_json(s.amplitude)},
                                             {"omega", vec2_json(s.omega)},
                                             {"phase", vec2_json(s.phase)}};
                               },
                               [](const PiecewiseVelocity& s) {
                                 json vs = json::array();
                                 for (const auto& v : s.velocities) vs.push_back(vec2_json(v));
                                 return json{{"kind", "piecewise-constant-velocity"},
                                             {"start", vec2_json(s.start)},
                                             {"breaks", s.breaks},
                                             {"velocities", vs}};
                               }},
                    spec);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// NaN and infinities become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json finite_array(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(finite_or_null(v));
  return out;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioError("", "syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                                e.what());
  }
  if (!doc.is_object()) throw ScenarioError("", "scenario must be a JSON object");
  reject_unknown(doc, "", {"name", "graph", "sensors", "trajectory", "sim", "bounds", "output"});

  ScenarioConfig cfg;
  if (const json* name = optional_field(doc, "name")) {
    if (!name->is_string()) throw ScenarioError("name", "expected a string");
    cfg.name = name->get<std::string>();
  }

  const json& graph = require(doc, "graph", "");
  reject_unknown(graph, "graph", {"n", "edges"});
  cfg.graph.n = as_int(require(graph, "n", "graph"), "graph.n");
  const auto& edges = as_array(require(graph, "edges", "graph"), "graph.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto p = indexed("graph.edges", i);
    if (!edges[i].is_array() || edges[i].size() != 2) throw ScenarioError(p, "expected [i, j]");
    cfg.graph.edges.emplace_back(as_int(edges[i][0], p + "[0]"), as_int(edges[i][1], p + "[1]"));
  }

  const auto& sensors = as_array(require(doc, "sensors", ""), "sensors");
  for (std::size_t i = 0; i < sensors.size(); ++i) cfg.sensors.push_back(as_vec2(sensors[i], indexed("sensors", i)));

  cfg.trajectory = parse_trajectory(require(doc, "trajectory", ""));

  const json& sim = require(doc, "sim", "");
  reject_unknown(sim, "sim",
                 {"h", "t0", "tf", "range_epsilon", "min_clearance", "sigma_min_threshold", "initial_w", "fallback_point"});
  cfg.sim.h = as_number(require(sim, "h", "sim"), "sim.h");
  cfg.sim.t0 = as_number(require(sim, "t0", "sim"), "sim.t0");
  cfg.sim.tf = as_number(require(sim, "tf", "sim"), "sim.tf");
  if (const json* v = optional_field(sim, "range_epsilon")) cfg.sim.range_epsilon = as_number(*v, "sim.range_epsilon");
  if (const json* v = optional_field(sim, "min_clearance")) cfg.sim.min_clearance = as_number(*v, "sim.min_clearance");
  if (const json* v = optional_field(sim, "sigma_min_threshold"))
    cfg.sim.sigma_min_threshold = as_number(*v, "sim.sigma_min_threshold");
  if (const json* v = optional_field(sim, "fallback_point")) cfg.sim.fallback_point = as_vec2(*v, "sim.fallback_point");
  if (const json* v = optional_field(sim, "initial_w")) {
    as_array(*v, "sim.initial_w");
    if (static_cast<int>(v->size()) != cfg.graph.n) throw ScenarioError("sim.initial_w", "expected one row per node");
    SignalMatrix w(cfg.graph.n, kSignalDim);
    for (std::size_t i = 0; i < v->size(); ++i) {
      const auto p = indexed("sim.initial_w", i);
      const json& row = (*v)[i];
      if (!row.is_array() || row.size() != kSignalDim) throw ScenarioError(p, "expected 6 numbers");
      for (std::size_t k = 0; k < kSignalDim; ++k)
        w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = as_number(row[k], indexed(p, k));
    }
    cfg.sim.initial_w = w;
  }

  const json& bounds = require(doc, "bounds", "");
  reject_unknown(bounds, "bounds", {"n_hat", "lambda2_hat", "gamma", "beta"});
  cfg.bounds.n_hat = as_int(require(bounds, "n_hat", "bounds"), "bounds.n_hat");
  cfg.bounds.lambda2_hat = as_number(require(bounds, "lambda2_hat", "bounds"), "bounds.lambda2_hat");
  if (const json* v = optional_field(bounds, "gamma")) cfg.bounds.gamma = as_number(*v, "bounds.gamma");
  if (const json* v = optional_field(bounds, "beta")) cfg.bounds.beta = as_number(*v, "bounds.beta");

  if (const json* out = optional_field(doc, "output")) {
    reject_unknown(*out, "output", {"decimate", "plots"});
    if (const json* v = optional_field(*out, "decimate")) {
      cfg.output.decimate = as_int(*v, "output.decimate");
      if (cfg.output.decimate < 1) throw ScenarioError("output.decimate", "must be >= 1");
    }
    if (const json* v = optional_field(*out, "plots")) {
      if (!v->is_boolean()) throw ScenarioError("output.plots", "expected true or false");
      cfg.output.plots = v->get<bool>();
    }
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json edges = json::array();
  for (const auto& [i, j] : cfg.graph.edges) edges.push_back({i, j});
  json sensors = json::array();
  for (const auto& s : cfg.sensors) sensors.push_back(vec2_json(s));

  json sim{{"h", cfg.sim.h},
           {"t0", cfg.sim.t0},
           {"tf", cfg.sim.tf},
           {"range_epsilon", cfg.sim.range_epsilon},
           {"min_clearance", cfg.sim.min_clearance},
           {"sigma_min_threshold", cfg.sim.sigma_min_threshold},
           {"initial_w", nullptr},
           {"fallback_point", cfg.sim.fallback_point ? vec2_json(*cfg.sim.fallback_point) : json(nullptr)}};
  if (cfg.sim.initial_w) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < cfg.sim.initial_w->rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < kSignalDim; ++k) row.push_back((*cfg.sim.initial_w)(i, k));
      rows.push_back(row);
    }
    sim["initial_w"] = rows;
  }

  return json{{"name", cfg.name},
              {"graph", {{"n", cfg.graph.n}, {"edges", edges}}},
              {"sensors", sensors},
              {"trajectory", trajectory_json(cfg.trajectory)},
              {"sim", sim},
              {"bounds",
               {{"n_hat", cfg.bounds.n_hat},
                {"lambda2_hat", cfg.bounds.lambda2_hat},
                {"gamma", optional_json(cfg.bounds.gamma)},
                {"beta", optional_json(cfg.bounds.beta)}}},
              {"output", {{"decimate", cfg.output.decimate}, {"plots", cfg.output.plots}}}};
}

json report_to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(
        {{"id", c.id}, {"description", c.description}, {"passed", c.passed}, {"fatal", c.fatal}, {"detail", c.detail}});
  json out{{"ok", r.ok()},
           {"checks", checks},
           {"n", r.n},
           {"n_hat", r.n_hat},
           {"lambda2", r.lambda2},
           {"lambda2_hat", r.lambda2_hat}};
  if (r.survey) {
    out["min_sigma"] = finite_or_null(r.survey->min_sigma);
    out["min_clearance"] = finite_or_null(r.survey->min_clearance);
  }
  if (r.gamma_certificate) {
    out["gamma_raw"] = r.gamma_certificate->raw;
    out["gamma_certified"] = r.gamma_certificate->certified;
  }
  out["gamma"] = optional_json(r.gamma);
  if (r.params) {
    out["beta"] = r.params->beta;
    out["beta_bound"] = r.params->beta_bound();
    out["beta_manual"] = r.params->manual_override;
  }
  out["x_tilde0_norm"] = optional_json(r.x_tilde0_norm);
  if (r.t_star) {
    out["t_star_root"] = r.t_star->t_star_root;
    out["t_star_linear"] = r.t_star->t_star_linear;
    out["t_star"] = r.t_star->certified();
  }
  return out;
}

json summary_to_json(const RunSummary& s) {
  return json{{"n", s.n},
              {"h", s.h},
              {"t0", s.t0},
              {"tf", s.tf},
              {"steps", s.steps},
              {"beta", s.beta},
              {"gamma", s.gamma},
              {"lambda2", s.lambda2},
              {"x_tilde0_norm", s.x_tilde0_norm},
              {"t_star_root", s.t_star.t_star_root},
              {"t_star_linear", s.t_star.t_star_linear},
              {"t_star", s.t_star.certified()},
              {"chatter_floor", s.chatter_floor},
              {"consensus_time", finite_or_null(s.consensus_time)},
              {"converged", s.converged},
              {"first_below_floor", finite_array(s.first_below_floor)},
              {"steady_start", s.steady_start},
              {"steady_samples", s.steady_samples},
              {"steady_rmse", finite_array(s.steady_rmse)},
              {"steady_msce", finite_array(s.steady_msce)},
              {"max_conservation_residual", s.max_conservation_residual},
              {"max_oracle_gap", s.max_oracle_gap},
              {"max_oracle_gap_ratio", finite_or_null(s.max_oracle_gap_ratio)},
              {"max_truth_gap", s.max_truth_gap},
              {"min_sigma", finite_or_null(s.min_sigma)},
              {"aborted", s.aborted},
              {"abort_time", s.aborted ? json(s.abort_time) : json(nullptr)},
              {"abort_message", s.abort_message}};
}

void print_report(std::ostream& os, const ValidationReport& r) {
  for (const auto& c : r.checks) {
    const char* tag = c.passed ? "PASS" : (c.fatal ? "FAIL" : "WARN");
    os << "  [" << tag << "] " << c.id << ": " << c.description << " -- " << c.detail << '\n';
  }
  os << "  n = " << r.n << ", n_hat = " << r.n_hat << '\n';
  os << "  lambda2 = " << fmt(r.lambda2) << ", lambda2_hat = " << fmt(r.lambda2_hat) << '\n';
  if (r.survey) {
    os << "  min sigma_min(H) = " << fmt(r.survey->min_sigma) << ", min clearance = " << fmt(r.survey->min_clearance)
       << '\n';
  }
  if (r.gamma) {
    os << "  gamma = " << fmt(*r.gamma);
    if (r.gamma_certificate)
      os << " (certified " << fmt(r.gamma_certificate->certified) << ", raw " << fmt(r.gamma_certificate->raw) << ")";
    os << '\n';
  }
  if (r.params)
    os << "  beta = " << fmt(r.params->beta, 9) << (r.params->manual_override ? " (manual)" : "") << ", bound "
       << fmt(r.params->beta_bound(), 9) << '\n';
  if (r.t_star && r.x_tilde0_norm) {
    os << "  ||x~(t0)|| = " << fmt(*r.x_tilde0_norm) << ", t*_root = " << fmt(r.t_star->t_star_root)
       << ", t*_linear = " << fmt(r.t_star->t_star_linear) << ", certified t* = " << fmt(r.t_star->certified()) << '\n';
  }
  os << (r.ok() ? "result: OK" : "result: FAILED") << '\n';
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header(int n) {
  std::string h = "t";
  for (int i = 0; i < n; ++i) {
    const auto s = std::to_string(i);
    h += ",p_" + s + "_x,p_" + s + "_y,valid_" + s + ",RMSE_" + s + ",MSCE_" + s;
  }
  h += ",pstar_x,pstar_y,ptrue_x,ptrue_y,xtilde_norm,conservation_residual";
  return h;
}

void write_records_csv(std::ostream& os, std::span<const RunRecord> records, int n) {
  os << csv_header(n) << '\n';
  for (const auto& r : records) {
    os << format_double(r.t);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      os << ',' << format_double(r.p[i].x()) << ',' << format_double(r.p[i].y()) << ',' << int(r.valid[i]) << ','
         << format_double(r.rmse[i]) << ',' << format_double(r.msce[i]);
    }
    os << ',' << format_double(r.pstar.x()) << ',' << format_double(r.pstar.y()) << ',' << format_double(r.ptrue.x())
       << ',' << format_double(r.ptrue.y()) << ',' << format_double(r.xtilde_norm) << ','
       << format_double(r.conservation_residual) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, SweepParameter parameter, std::span<const SweepRow> rows) {
  os << "parameter,value,beta,h,consensus_time,steady_rmse,max_conservation_residual,converged,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    for (auto& ch : err)
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    os << sweep_parameter_name(parameter) << ',' << format_double(r.value) << ',' << format_double(r.beta) << ',' << format_double(r.h) << ','
       << format_double(r.consensus_time) << ',' << format_double(r.steady_rmse) << ','
       << format_double(r.max_conservation_residual) << ',' << (r.converged ? 1 : 0) << ',' << err << '\n';
  }
}

}  // namespace bswarm::io
