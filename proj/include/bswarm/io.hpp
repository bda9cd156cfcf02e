#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>

#include <nlohmann/json.hpp>

#include "bswarm/engine.hpp"

namespace bswarm::io {

/// Throws ScenarioError naming the field (or line/column for syntax errors).
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Fully resolved config, every default materialized. parse_scenario of the
/// dump reproduces the config exactly.
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

nlohmann::json report_to_json(const ValidationReport& report);
nlohmann::json summary_to_json(const RunSummary& summary);

/// Human-readable validation report.
void print_report(std::ostream& os, const ValidationReport& report);

std::string csv_header(int n);
void write_records_csv(std::ostream& os, std::span<const RunRecord> records, int n);

void write_sweep_csv(std::ostream& os, SweepParameter parameter, std::span<const SweepRow> rows);

/// "%.17g" rendering (round-trip exact for binary64), used for every float
/// written to CSV.
std::string format_double(double v);

}  // namespace bswarm::io
