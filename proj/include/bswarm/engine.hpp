#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bswarm/error.hpp"
#include "bswarm/scenario.hpp"

namespace bswarm {

/// One recorded instant.
struct RunRecord {
  double t = 0.0;
  std::vector<Vec2> p;           ///< per-node estimates
  std::vector<std::uint8_t> valid;
  std::vector<double> rmse;      ///< sqrt(0.5 |p* - p_i|^2)
  std::vector<double> msce;      ///< sqrt(|phibar - x_i|^2 / 6)
  Vec2 pstar = Vec2::Zero();     ///< centralized least squares (NaN if unobservable)
  Vec2 ptrue = Vec2::Zero();
  double xtilde_norm = 0.0;      ///< stacked ||x~||_2
  double conservation_residual = 0.0;
  double kappa = 0.0;            ///< condition number of the averaged P
};

struct RunSummary {
  int n = 0;
  double h = 0.0;
  double t0 = 0.0;
  double tf = 0.0;
  long long steps = 0;  ///< number of Euler steps taken
  double beta = 0.0;
  double gamma = 0.0;
  double lambda2 = 0.0;
  double x_tilde0_norm = 0.0;
  FiniteTimeBound t_star;
  double chatter_floor = 0.0;  ///< 10 * beta * h

  /// First t with ||x~|| <= chatter_floor (NaN if never).
  double consensus_time = 0.0;
  bool converged = false;
  /// Per node: first t with RMSE_i <= chatter_floor (NaN if never).
  std::vector<double> first_below_floor;

  /// Steady-state window [max(t*, midpoint), tf].
  double steady_start = 0.0;
  long long steady_samples = 0;
  /// Per node time-RMS of RMSE_i / MSCE_i over the window (NaN if empty).
  std::vector<double> steady_rmse;
  std::vector<double> steady_msce;

  double max_conservation_residual = 0.0;
  /// max over t >= t*, i of ||p_i - p*|| / (100 beta h kappa(Pbar)).
  double max_oracle_gap_ratio = 0.0;
  double max_oracle_gap = 0.0;
  /// max ||p* - p_true|| over instants with sigma_min(H) >= threshold.
  double max_truth_gap = 0.0;
  double min_sigma = 0.0;

  bool aborted = false;
  double abort_time = 0.0;
  std::string abort_message;
};

struct RunOptions {
  bool force = false;
  std::optional<int> decimate;  ///< overrides cfg.output.decimate
  bool keep_records = true;
};

struct RunResult {
  ValidationReport report;
  std::vector<RunRecord> records;
  RunSummary summary;
};

/// Thrown by run() when validation fails and force is not set.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Time grid t_k = t0 + k h, with the last step shortened to land on tf.
std::vector<double> time_grid(double t0, double tf, double h);

/// Closed loop: sample target, build local signals, refresh x, record,
/// integrate w with forward Euler. Records every `decimate` steps plus the
/// final instant; summary statistics use every step.
RunResult run(const ScenarioConfig& cfg, const RunOptions& options = {});

enum class SweepParameter { Beta, StepSize, Lambda2Hat };

/// Throws ParameterError for unknown names. Accepts "beta", "h",
/// "lambda2_hat".
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view sweep_parameter_name(SweepParameter p);

struct SweepRow {
  double value = 0.0;
  double beta = 0.0;
  double h = 0.0;
  double consensus_time = 0.0;
  /// Largest per-node steady-state RMSE.
  double steady_rmse = 0.0;
  double max_conservation_residual = 0.0;
  bool converged = false;
  std::string error;
};

/// Runs one independent scenario per value, concurrently, rows in value
/// order. With `relative_beta` the beta values multiply the gain-rule bound.
/// Beta values are always force-run so below-bound gains can be studied.
std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepParameter parameter,
                            std::span<const double> values, bool relative_beta = false);

}  // namespace bswarm
