#pragma once

// Seeded audit runner. A check is a named per-trial evaluation over generated
// inputs; the runner walks a dimension range, derives one independent stream
// per (dim, trial) from the master seed, records margins, and persists any
// violating instance in the matrix text format so it can be reloaded and
// replayed.
//
// Margin conventions (also recorded in the report flags):
//   inequality checks:  margin = smallest slack (rhs - lhs style), so a
//                       violation is margin < -tolerance;
//   residual checks:    margin = -residual against the property's own
//                       tolerance, same violation rule.
//
// Reports are value objects; serialization lives in report.hpp. Two runs with
// the same inputs produce identical reports byte for byte once serialized
// (timestamps are supplied by the caller, not sampled here).

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "warpineq/checks.hpp"

namespace warpineq::audit {

struct Violation {
    std::size_t dim = 0;
    std::size_t trial = 0;
    double margin = 0.0;
    std::string artifact; // file name(s) under the artifact dir, empty if not persisted
};

struct DimResult {
    std::size_t dim = 0;
    std::size_t trials = 0;
    double min_margin = 0.0;
    std::size_t violations = 0;
    std::map<std::string, double> extra; // check-specific scalars (sorted keys)
};

struct AuditReport {
    std::string check_name;
    std::size_t dim_lo = 0;
    std::size_t dim_hi = 0;
    std::size_t trials_per_dim = 0;
    std::uint64_t master_seed = 0;
    double tolerance = 0.0;
    std::vector<DimResult> results;
    std::vector<Violation> violations;
    std::optional<double> min_margin; // empty when no trials ran
    std::vector<std::string> flags;   // interpretation notes, ensembles, margin convention
};

struct AuditOptions {
    T0Interpretation interpretation = T0Interpretation::floor_t1;
    std::string artifact_dir; // empty: violations are reported but not persisted
};

// Trial-based checks plus the exhaustive sweeps (which interpret the dim
// range as the v range and ignore `trials`).
std::vector<std::string> registered_checks();
bool is_sweep_check(const std::string& check_name);

// Throws std::invalid_argument listing the registry for unknown names.
AuditReport run_audit(const std::string& check_name, std::size_t dim_lo, std::size_t dim_hi,
                      std::size_t trials, std::uint64_t master_seed, double tolerance,
                      const AuditOptions& options = {});

} // namespace warpineq::audit
