#pragma once

// Report serialization. JSON layout:
//   { tool_version, config_echo, check_name, started_unix_seconds,
//     results: [...], violations: [{dim, trial, margin, artifact}],
//     summary: {trials, min_margin, verdict} }
// CSV emits the result rows only. The timestamp is a caller argument so that
// identical runs serialize to identical bytes when it is held fixed.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "warpineq/audit.hpp"
#include "warpineq/geometry.hpp"

namespace warpineq {

inline constexpr const char* kToolVersion = "warpineq 0.1.0";

// Ordered key/value echo of the run configuration, serialized verbatim.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

std::string report_to_json(const audit::AuditReport& report, const ConfigEcho& config_echo,
                           std::int64_t started_unix_seconds);
std::string report_to_csv(const audit::AuditReport& report);

// Geometry runs reuse the same top-level layout; results rows are per-point.
struct GeometryRun {
    std::string model;
    geom::TheoremVerdict theorem;
    geom::CrResiduals cr;
    double dt_minimality = 0.0;
    double h_xi_xi = 0.0;
};

std::string geometry_report_to_json(const GeometryRun& run, const ConfigEcho& config_echo,
                                    std::int64_t started_unix_seconds);
std::string geometry_report_to_csv(const GeometryRun& run);

} // namespace warpineq
