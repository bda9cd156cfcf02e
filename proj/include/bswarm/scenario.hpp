#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bswarm/consensus.hpp"
#include "bswarm/graph.hpp"
#include "bswarm/trajectory.hpp"

namespace bswarm {

inline constexpr double kDefaultMinClearance = 1e-3;
inline constexpr double kDefaultSigmaMinThreshold = 0.05;
/// Lower limit used for gamma when the signals are constant.
inline constexpr double kGammaFloor = 1e-6;

struct GraphSpec {
  int n = 0;
  std::vector<Edge> edges;
};

struct SimSettings {
  double h = 1e-4;
  double t0 = 0.0;
  double tf = 10.0;
  double range_epsilon = 1e-9;
  double min_clearance = kDefaultMinClearance;
  double sigma_min_threshold = kDefaultSigmaMinThreshold;
  /// Replaces w(t0) = 0. Only for experiments that show what breaks.
  std::optional<SignalMatrix> initial_w;
  /// Estimate reported by nodes with a singular P before their first valid
  /// solve; sensor centroid when absent.
  std::optional<Vec2> fallback_point;
};

struct Bounds {
  int n_hat = 0;
  double lambda2_hat = 0.0;
  std::optional<double> gamma;  ///< overrides the certified value
  std::optional<double> beta;   ///< overrides the gain rule
};

struct OutputOptions {
  int decimate = 10;
  bool plots = true;
};

struct ScenarioConfig {
  std::string name;
  GraphSpec graph;
  std::vector<Vec2> sensors;
  TrajectorySpec trajectory;
  SimSettings sim;
  Bounds bounds;
  OutputOptions output;
};

/// Single pass over the dense time grid.
struct GeometrySurvey {
  double dt = 0.0;
  double min_clearance = 0.0;
  double min_clearance_time = 0.0;
  int closest_sensor = -1;
  double min_sigma = 0.0;
  double min_sigma_time = 0.0;
  double raw_rate = 0.0;  ///< sup of the finite-difference ||d phi_i/dt||_inf
};

/// Samples the trajectory every dt over [t0, tf] (last step shortened to land
/// on tf). The rate is infinite if the target ever comes within
/// range_epsilon of a sensor.
GeometrySurvey survey_geometry(const ScenarioConfig& cfg, double dt);

/// Number of steps of size h needed to cover [t0, tf]; the last one may be
/// partial.
long long grid_steps(double t0, double tf, double h);

struct GammaCertificate {
  double raw = 0.0;
  double certified = 0.0;
  double dt = 0.0;
};

/// gamma = 1.25 * max(raw finite-difference rate on a grid of h/10, floor).
/// Throws CertificationError if the trajectory comes within min_clearance
/// of a sensor.
GammaCertificate certify_gamma(const ScenarioConfig& cfg);
GammaCertificate certify_gamma(const ScenarioConfig& cfg, const GeometrySurvey& survey);

struct ValidationCheck {
  std::string id;
  std::string description;
  bool passed = false;
  bool fatal = true;  ///< warnings do not block a run
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  int n = 0;
  int n_hat = 0;
  double lambda2 = 0.0;
  double lambda2_hat = 0.0;
  std::optional<GeometrySurvey> survey;
  std::optional<GammaCertificate> gamma_certificate;
  std::optional<double> gamma;  ///< value handed to the gain rule
  std::optional<ConsensusParams> params;
  std::optional<double> x_tilde0_norm;
  std::optional<FiniteTimeBound> t_star;

  bool ok() const;
  const ValidationCheck* find(std::string_view id) const;
};

ValidationReport validate_scenario(const ScenarioConfig& cfg);

/// Sensor centroid unless overridden in the config.
Vec2 fallback_point(const ScenarioConfig& cfg);

}  // namespace bswarm
