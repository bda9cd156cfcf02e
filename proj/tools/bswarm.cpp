// Command-line front end: validate, run and sweep scenario files.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bswarm/engine.hpp"
#include "bswarm/error.hpp"
#include "bswarm/io.hpp"
#include "bswarm/svg.hpp"

namespace fs = std::filesystem;
using namespace bswarm;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

int cmd_validate(const std::string& path) {
  const ScenarioConfig cfg = io::load_scenario(path);
  const ValidationReport report = validate_scenario(cfg);
  std::cout << "scenario: " << (cfg.name.empty() ? path : cfg.name) << '\n';
  io::print_report(std::cout, report);
  return report.ok() ? 0 : 1;
}

int cmd_run(const std::string& path, const fs::path& out_dir, int decimate, bool force) {
  const ScenarioConfig cfg = io::load_scenario(path);
  RunOptions opts;
  opts.force = force;
  if (decimate > 0) opts.decimate = decimate;

  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  try {
    result = run(cfg, opts);
  } catch (const ValidationFailed& e) {
    std::cerr << "scenario failed validation (use --force to run anyway)\n";
    io::print_report(std::cerr, e.report());
    return 1;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  fs::create_directories(out_dir);
  {
    std::ofstream csv(out_dir / "records.csv", std::ios::binary);
    if (!csv) throw Error("cannot write " + (out_dir / "records.csv").string());
    io::write_records_csv(csv, result.records, cfg.graph.n);
  }
  nlohmann::json summary = {{"config", io::scenario_to_json(cfg)},
                            {"validation", io::report_to_json(result.report)},
                            {"summary", io::summary_to_json(result.summary)},
                            {"forced", force}};
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  if (cfg.output.plots) {
    write_file(out_dir / "trajectory.svg", io::trajectory_svg(cfg, result.records));
    write_file(out_dir / "rmse.svg", io::metric_svg(result.records, cfg.graph.n, io::Metric::Rmse));
    write_file(out_dir / "msce.svg", io::metric_svg(result.records, cfg.graph.n, io::Metric::Msce));
  }

  const auto& s = result.summary;
  std::cout << "steps " << s.steps << ", records " << result.records.size() << ", " << seconds << " s\n";
  std::cout << "beta " << s.beta << ", certified t* " << s.t_star.certified() << ", consensus at "
            << s.consensus_time << '\n';
  std::cout << "steady-state RMSE:";
  for (double v : s.steady_rmse) std::cout << ' ' << v;
  std::cout << "\nmax conservation residual " << s.max_conservation_residual << '\n';
  if (s.aborted) {
    std::cerr << "run aborted at t = " << s.abort_time << ": " << s.abort_message << '\n';
    return 1;
  }
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::vector<double>& values,
              const fs::path& out_dir, bool relative) {
  const ScenarioConfig cfg = io::load_scenario(path);
  const SweepParameter p = parse_sweep_parameter(param);
  const auto rows = sweep(cfg, p, values, relative);

  io::write_sweep_csv(std::cout, p, rows);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream csv(out_dir / "sweep.csv", std::ios::binary);
    io::write_sweep_csv(csv, p, rows);
  }
  for (const auto& r : rows)
    if (!r.converged) std::cout << "# " << param << " = " << r.value << ": non-convergent\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed bearing-only target tracking simulator"};
  app.require_subcommand(1);

  std::string scenario;
  auto* validate = app.add_subcommand("validate", "check a scenario against the protocol requirements");
  validate->add_option("scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);

  std::string out_dir = "out";
  int decimate = 0;
  bool force = false;
  auto* run_cmd = app.add_subcommand("run", "simulate a scenario and write records, summary and plots");
  run_cmd->add_option("scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--decimate", decimate, "record every k-th step (default from scenario)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--force", force, "run even if validation fails");

  std::string param;
  std::vector<double> values;
  std::string sweep_out;
  bool relative = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "run one scenario per parameter value");
  sweep_cmd->add_option("scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--param", param, "beta, h or lambda2_hat")
      ->required()
      ->check(CLI::IsMember({"beta", "h", "lambda2_hat"}));
  sweep_cmd->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "directory for sweep.csv");
  sweep_cmd->add_flag("--relative", relative, "beta values are multiples of the gain-rule bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(scenario);
    if (*run_cmd) return cmd_run(scenario, out_dir, decimate, force);
    if (*sweep_cmd) return cmd_sweep(scenario, param, values, sweep_out, relative);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
