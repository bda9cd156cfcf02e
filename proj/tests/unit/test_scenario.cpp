#include <cmath>
#include <filesystem>
#include <numbers>

#include "bswarm/error.hpp"
#include "bswarm/io.hpp"
#include "bswarm/scenario.hpp"
#include "doctest.h"

using namespace bswarm;

namespace {

std::filesystem::path scenario_dir() { return BSWARM_SCENARIO_DIR; }

// Three sensors around a slowly drifting target.
ScenarioConfig triangle() {
  ScenarioConfig c;
  c.name = "triangle";
  c.graph = {3, {{0, 1}, {1, 2}}};
  c.sensors = {{-2, 0}, {2, 0}, {0, 3}};
  Sinusoid s;
  s.origin = {0, 1};
  s.velocity = {0.1, 0};
  c.trajectory = s;
  c.sim.h = 1e-3;
  c.sim.tf = 2.0;
  c.bounds = {3, 1.0, std::nullopt, std::nullopt};
  return c;
}

bool passed(const ValidationReport& r, std::string_view id) {
  const auto* c = r.find(id);
  REQUIRE(c != nullptr);
  return c->passed;
}

}  // namespace

TEST_CASE("bundled scenarios validate") {
  for (const auto& entry : std::filesystem::directory_iterator(scenario_dir())) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const auto report = validate_scenario(io::load_scenario(entry.path()));
    CHECK(report.ok());
  }
}

TEST_CASE("fig1-like reports the large gain") {
  const auto report = validate_scenario(io::load_scenario(scenario_dir() / "fig1_like.json"));
  REQUIRE(report.params);
  CHECK(report.params->beta == doctest::Approx(560.017).epsilon(1e-6));
  CHECK(report.n == 5);
  CHECK(report.lambda2 >= report.lambda2_hat);
}

TEST_CASE("n_hat below n") {
  auto c = triangle();
  c.bounds.n_hat = 2;
  const auto r = validate_scenario(c);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(passed(r, "n_hat"));
  CHECK(r.find("n_hat")->detail.find("n_hat < n") != std::string::npos);
}

TEST_CASE("disconnected graph") {
  auto c = triangle();
  c.graph.edges = {{0, 1}};
  const auto r = validate_scenario(c);
  CHECK_FALSE(passed(r, "graph"));
  CHECK(r.find("graph")->detail.find("not connected") != std::string::npos);
}

TEST_CASE("lambda2_hat above the true value") {
  auto c = triangle();
  c.bounds.lambda2_hat = 1.5;  // path of three has lambda2 = 1
  CHECK_FALSE(passed(validate_scenario(c), "lambda2_hat"));
}

TEST_CASE("two sensors are never enough") {
  auto c = triangle();
  c.graph = {2, {{0, 1}}};
  c.sensors = {{-2, 0}, {0, 3}};
  c.bounds.n_hat = 2;
  CHECK_FALSE(passed(validate_scenario(c), "observability"));
}

TEST_CASE("collinear geometry fails observability") {
  auto c = triangle();
  c.sensors = {{-3, 1}, {-2, 1}, {3, 1}};
  CHECK_FALSE(passed(validate_scenario(c), "observability"));
}

TEST_CASE("clearance") {
  auto c = triangle();
  c.sensors[2] = Vec2(0.1, 1.0005);  // target passes within 1e-3
  const auto r = validate_scenario(c);
  CHECK_FALSE(passed(r, "clearance"));
  CHECK_THROWS_AS(certify_gamma(c), CertificationError);
}

TEST_CASE("sensor count must match") {
  auto c = triangle();
  c.sensors.pop_back();
  CHECK_FALSE(passed(validate_scenario(c), "sensors"));
}

TEST_CASE("time window") {
  auto c = triangle();
  c.sim.h = 0.0;
  CHECK_FALSE(passed(validate_scenario(c), "time"));
  c.sim.h = 1e-3;
  c.sim.tf = c.sim.t0;
  CHECK_FALSE(validate_scenario(c).ok());
}

TEST_CASE("gamma certificate on a circular orbit") {
  // Every sensor at the origin, target on a circle: theta = w t and
  // |d/dt sin^2(theta)| peaks at w; q = 0 since z = 0.
  ScenarioConfig c = triangle();
  c.sensors = {{0, 0}, {0, 0}, {0, 0}};
  const double w = 0.7;
  Sinusoid s;
  s.amplitude = {2, 2};
  s.omega = {w, w};
  s.phase = {std::numbers::pi / 2, 0};
  c.trajectory = s;
  c.sim.tf = 10.0;
  const auto cert = certify_gamma(c);
  CHECK(cert.dt == doctest::Approx(c.sim.h / 10));
  CHECK(cert.raw <= w * (1 + 1e-9));
  CHECK(cert.raw >= w * (1 - 1e-6));
  CHECK(cert.certified == doctest::Approx(1.25 * cert.raw));
}

TEST_CASE("static target gets the gamma floor") {
  auto c = triangle();
  std::get<Sinusoid>(c.trajectory).velocity = Vec2::Zero();
  const auto cert = certify_gamma(c);
  CHECK(cert.raw == 0.0);
  CHECK(cert.certified == doctest::Approx(1.25 * kGammaFloor));
}

TEST_CASE("gamma override") {
  auto c = triangle();
  c.bounds.gamma = 100.0;
  auto r = validate_scenario(c);
  CHECK(r.ok());
  CHECK(*r.gamma == 100.0);
  CHECK(r.find("gamma_override") == nullptr);

  c.bounds.gamma = 1e-9;  // below the measured rate: warning only
  r = validate_scenario(c);
  CHECK(r.ok());
  REQUIRE(r.find("gamma_override") != nullptr);
  CHECK_FALSE(r.find("gamma_override")->fatal);
}

TEST_CASE("beta override below the bound is fatal") {
  auto c = triangle();
  c.bounds.beta = 0.5;
  const auto r = validate_scenario(c);
  CHECK_FALSE(passed(r, "beta"));
  CHECK_FALSE(r.ok());
  CHECK(r.params->manual_override);
}

TEST_CASE("velocity jumps give a warning") {
  auto c = triangle();
  c.trajectory = PiecewiseVelocity{{0, 1}, {1.0}, {{0.1, 0}, {0, 0.1}}};
  const auto r = validate_scenario(c);
  CHECK_FALSE(passed(r, "smoothness"));
  CHECK_FALSE(r.find("smoothness")->fatal);
  CHECK(r.ok());
}

TEST_CASE("initial error and bound use the true lambda2") {
  auto c = triangle();
  const auto r = validate_scenario(c);
  REQUIRE(r.x_tilde0_norm);
  REQUIRE(r.t_star);
  const double expect = *r.x_tilde0_norm / std::min(std::sqrt(r.lambda2), r.lambda2);
  CHECK(r.t_star->certified() == doctest::Approx(c.sim.t0 + expect));
}

TEST_CASE("fallback point") {
  auto c = triangle();
  CHECK((fallback_point(c) - Vec2(0, 1)).norm() < 1e-15);
  c.sim.fallback_point = Vec2(5, 5);
  CHECK(fallback_point(c) == Vec2(5, 5));
}

TEST_CASE("grid steps") {
  CHECK(grid_steps(0, 1, 0.1) == 10);
  CHECK(grid_steps(0, 1, 0.3) == 4);
  CHECK(grid_steps(0, 10, 1e-4) == 100000);
  CHECK_THROWS_AS(grid_steps(0, 1, 0), ParameterError);
}
