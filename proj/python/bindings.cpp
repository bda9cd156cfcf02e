#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bswarm/engine.hpp"
#include "bswarm/error.hpp"
#include "bswarm/geometry.hpp"
#include "bswarm/io.hpp"
#include "bswarm/tracker.hpp"

namespace py = pybind11;
using namespace bswarm;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict records_to_dict(const std::vector<RunRecord>& records, int n) {
  const auto k = static_cast<py::ssize_t>(records.size());
  py::array_t<double> t(k), xt(k), resid(k), kappa(k);
  py::array_t<double> p({k, static_cast<py::ssize_t>(n), py::ssize_t{2}});
  py::array_t<double> rmse({k, static_cast<py::ssize_t>(n)}), msce({k, static_cast<py::ssize_t>(n)});
  py::array_t<bool> valid({k, static_cast<py::ssize_t>(n)});
  py::array_t<double> pstar({k, py::ssize_t{2}}), ptrue({k, py::ssize_t{2}});
  auto T = t.mutable_unchecked<1>();
  auto XT = xt.mutable_unchecked<1>();
  auto R = resid.mutable_unchecked<1>();
  auto K = kappa.mutable_unchecked<1>();
  auto P = p.mutable_unchecked<3>();
  auto RM = rmse.mutable_unchecked<2>();
  auto MS = msce.mutable_unchecked<2>();
  auto V = valid.mutable_unchecked<2>();
  auto PS = pstar.mutable_unchecked<2>();
  auto PT = ptrue.mutable_unchecked<2>();
  for (py::ssize_t r = 0; r < k; ++r) {
    const auto& rec = records[static_cast<std::size_t>(r)];
    T(r) = rec.t;
    XT(r) = rec.xtilde_norm;
    R(r) = rec.conservation_residual;
    K(r) = rec.kappa;
    for (int d = 0; d < 2; ++d) {
      PS(r, d) = rec.pstar(d);
      PT(r, d) = rec.ptrue(d);
    }
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      P(r, i, 0) = rec.p[ui].x();
      P(r, i, 1) = rec.p[ui].y();
      RM(r, i) = rec.rmse[ui];
      MS(r, i) = rec.msce[ui];
      V(r, i) = rec.valid[ui] != 0;
    }
  }
  py::dict out;
  out["t"] = t;
  out["p"] = p;
  out["valid"] = valid;
  out["rmse"] = rmse;
  out["msce"] = msce;
  out["pstar"] = pstar;
  out["ptrue"] = ptrue;
  out["xtilde_norm"] = xt;
  out["conservation_residual"] = resid;
  out["kappa"] = kappa;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distributed finite-time bearing-only target tracking (C++ core).";

  static py::exception<Error> base_error(m, "BswarmError", PyExc_RuntimeError);
  py::register_exception<GraphError>(m, "GraphError", base_error.ptr());
  py::register_exception<SingularGeometryError>(m, "SingularGeometryError", base_error.ptr());
  py::register_exception<ObservabilityError>(m, "ObservabilityError", base_error.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base_error.ptr());
  py::register_exception<ScenarioError>(m, "ScenarioError", base_error.ptr());
  py::register_exception<CertificationError>(m, "CertificationError", base_error.ptr());
  py::register_exception<ValidationFailed>(m, "ValidationFailed", base_error.ptr());

  py::class_<Graph>(m, "Graph")
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("edges", &Graph::edges)
      .def_property_readonly("directed_edges", &Graph::directed_edges)
      .def_property_readonly("adjacency", &Graph::adjacency)
      .def_property_readonly("degree", &Graph::degree)
      .def_property_readonly("laplacian", &Graph::laplacian)
      .def_property_readonly("incidence", &Graph::incidence)
      .def_property_readonly("lambda2", &Graph::lambda2)
      .def_property_readonly("connected", &Graph::connected);

  m.def(
      "build_graph",
      [](int n, const std::vector<Edge>& edges, bool allow_disconnected) {
        return Graph::build(n, edges, allow_disconnected ? Graph::Connectivity::Allow : Graph::Connectivity::Require);
      },
      py::arg("n"), py::arg("edges"), py::arg("allow_disconnected") = false);
  m.def("projector_M", py::overload_cast<int>(&projector_M), py::arg("n"));
  m.def("algebraic_connectivity", &algebraic_connectivity);
  m.def(
      "verify_projector_identities",
      [](const Graph& g, double tol) {
        const auto c = verify_projector_identities(g, tol);
        return py::make_tuple(c.ok, c.max_deviation);
      },
      py::arg("graph"), py::arg("tol") = 1e-10);

  py::class_<BearingMeasurement>(m, "BearingMeasurement")
      .def_readonly("theta", &BearingMeasurement::theta)
      .def_readonly("phi", &BearingMeasurement::phi)
      .def_readonly("phi_perp", &BearingMeasurement::phi_perp)
      .def_readonly("range", &BearingMeasurement::range);
  py::class_<LocalInformation>(m, "LocalInformation")
      .def_readonly("h", &LocalInformation::h)
      .def_readonly("z", &LocalInformation::z)
      .def_readonly("P", &LocalInformation::P)
      .def_readonly("q", &LocalInformation::q)
      .def_readonly("phi6", &LocalInformation::phi6);

  m.def("bearing", &bearing, py::arg("p"), py::arg("s"), py::arg("range_epsilon") = kDefaultRangeEpsilon,
        py::arg("sensor") = -1);
  m.def("local_information", &local_information, py::arg("measurement"), py::arg("s"));
  m.def("pack_phi", &pack_phi, py::arg("P"), py::arg("q"));
  m.def("unpack_phi", [](const Phi6& v) {
    const auto u = unpack_phi(v);
    return py::make_tuple(Mat2(u.P), Vec2(u.q));
  });

  m.def("beta_from_bound", [](double gamma_hat, int n_hat, double lambda2_hat) {
    return beta_from_bound(gamma_hat, n_hat, lambda2_hat).beta;
  }, py::arg("gamma_hat"), py::arg("n_hat"), py::arg("lambda2_hat"));
  m.def(
      "finite_time_bound",
      [](const SignalMatrix& x_tilde0, double lambda2, double t0) {
        const auto b = finite_time_bound(x_tilde0, lambda2, t0);
        return py::make_tuple(b.t_star_root, b.t_star_linear);
      },
      py::arg("x_tilde0"), py::arg("lambda2"), py::arg("t0") = 0.0);

  m.def(
      "centralized_solution",
      [](const Eigen::Matrix<double, Eigen::Dynamic, 2>& H, const Vector& z) {
        return centralized_solution(StackedObservation{H, z});
      },
      py::arg("H"), py::arg("z"));
  m.def(
      "local_solution",
      [](const Phi6& x, const Vec2& fallback) {
        const auto e = local_solution(x, fallback);
        return py::make_tuple(Vec2(e.p_hat), e.valid, e.condition);
      },
      py::arg("x"), py::arg("fallback") = Vec2::Zero());
  m.def("observability_check", [](const std::vector<Vec2>& sensors, const Vec2& p) {
    return observability_check(sensors, p);
  });

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readonly("name", &ScenarioConfig::name)
      .def("to_json", [](const ScenarioConfig& c) { return to_python(io::scenario_to_json(c)); });
  m.def("load_scenario", [](const std::string& path) { return io::load_scenario(path); });
  m.def("parse_scenario", [](const std::string& text) { return io::parse_scenario(text); });
  m.def("validate", [](const ScenarioConfig& cfg) { return to_python(io::report_to_json(validate_scenario(cfg))); });

  m.def(
      "run",
      [](const ScenarioConfig& cfg, bool force, std::optional<int> decimate) {
        RunOptions opts;
        opts.force = force;
        opts.decimate = decimate;
        RunResult res;
        {
          py::gil_scoped_release release;
          res = run(cfg, opts);
        }
        py::dict out;
        out["summary"] = to_python(io::summary_to_json(res.summary));
        out["validation"] = to_python(io::report_to_json(res.report));
        out["records"] = records_to_dict(res.records, cfg.graph.n);
        return out;
      },
      py::arg("config"), py::arg("force") = false, py::arg("decimate") = py::none());

  m.def(
      "sweep",
      [](const ScenarioConfig& cfg, const std::string& param, const std::vector<double>& values, bool relative) {
        const auto p = parse_sweep_parameter(param);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sweep(cfg, p, values, relative);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["value"] = r.value;
          d["beta"] = r.beta;
          d["h"] = r.h;
          d["consensus_time"] = r.consensus_time;
          d["steady_rmse"] = r.steady_rmse;
          d["max_conservation_residual"] = r.max_conservation_residual;
          d["converged"] = r.converged;
          d["error"] = r.error;
          out.append(d);
        }
        return out;
      },
      py::arg("config"), py::arg("param"), py::arg("values"), py::arg("relative_beta") = false);
}
