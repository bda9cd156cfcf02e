#pragma once

#include <span>
#include <string>

#include "bswarm/engine.hpp"

namespace bswarm::io {

/// Sensors, links, true path and per-node estimates.
std::string trajectory_svg(const ScenarioConfig& cfg, std::span<const RunRecord> records);

enum class Metric { Rmse, Msce };

/// One curve per node on a log-scale y axis.
std::string metric_svg(std::span<const RunRecord> records, int n, Metric metric);

}  // namespace bswarm::io
