#include "warpineq/report.hpp"

#include <cstdio>
#include <set>

#include "json.hpp"

namespace warpineq {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

ordered_json echo_object(const ConfigEcho& config_echo) {
    ordered_json obj = ordered_json::object();
    for (const auto& [key, value] : config_echo) obj[key] = value;
    return obj;
}

ordered_json results_array(const audit::AuditReport& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& dr : report.results) {
        ordered_json row;
        row["dim"] = dr.dim;
        row["trials"] = dr.trials;
        row["min_margin"] = dr.min_margin;
        row["violations"] = dr.violations;
        if (!dr.extra.empty()) {
            ordered_json extra = ordered_json::object();
            for (const auto& [key, value] : dr.extra) extra[key] = value;
            row["extra"] = extra;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace

std::string report_to_json(const audit::AuditReport& report, const ConfigEcho& config_echo,
                           std::int64_t started_unix_seconds) {
    ordered_json doc;
    doc["tool_version"] = kToolVersion;
    doc["config_echo"] = echo_object(config_echo);
    doc["check_name"] = report.check_name;
    doc["started_unix_seconds"] = started_unix_seconds;
    doc["dim_lo"] = report.dim_lo;
    doc["dim_hi"] = report.dim_hi;
    doc["trials_per_dim"] = report.trials_per_dim;
    doc["master_seed"] = report.master_seed;
    doc["tolerance"] = report.tolerance;
    doc["flags"] = report.flags;
    doc["results"] = results_array(report);

    ordered_json violations = ordered_json::array();
    for (const auto& v : report.violations) {
        ordered_json row;
        row["dim"] = v.dim;
        row["trial"] = v.trial;
        row["margin"] = v.margin;
        row["artifact"] = v.artifact;
        violations.push_back(row);
    }
    doc["violations"] = violations;

    std::size_t total_trials = 0;
    for (const auto& dr : report.results) total_trials += dr.trials;
    ordered_json summary;
    summary["trials"] = total_trials;
    if (report.min_margin.has_value()) {
        summary["min_margin"] = *report.min_margin;
    } else {
        summary["min_margin"] = nullptr;
    }
    summary["verdict"] = report.violations.empty() ? "pass" : "violations";
    doc["summary"] = summary;
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const audit::AuditReport& report) {
    std::set<std::string> extra_keys;
    for (const auto& dr : report.results)
        for (const auto& [key, value] : dr.extra) extra_keys.insert(key);

    std::string out = "check,dim,trials,min_margin,violations";
    for (const auto& key : extra_keys) out += "," + key;
    out += "\n";
    for (const auto& dr : report.results) {
        out += report.check_name + "," + std::to_string(dr.dim) + "," +
               std::to_string(dr.trials) + "," + csv_double(dr.min_margin) + "," +
               std::to_string(dr.violations);
        for (const auto& key : extra_keys) {
            auto it = dr.extra.find(key);
            out += ",";
            if (it != dr.extra.end()) out += csv_double(it->second);
        }
        out += "\n";
    }
    return out;
}

std::string geometry_report_to_json(const GeometryRun& run, const ConfigEcho& config_echo,
                                    std::int64_t started_unix_seconds) {
    ordered_json doc;
    doc["tool_version"] = kToolVersion;
    doc["config_echo"] = echo_object(config_echo);
    doc["check_name"] = "geometry:" + run.model;
    doc["started_unix_seconds"] = started_unix_seconds;

    ordered_json rows = ordered_json::array();
    for (const auto& pr : run.theorem.points) {
        ordered_json row;
        row["point"] = pr.point;
        row["h_sq"] = pr.h_sq;
        row["grad_lnf_sq"] = pr.grad_lnf_sq;
        row["lap_lnf"] = pr.lap_lnf;
        row["rhs"] = pr.rhs;
        row["margin"] = pr.margin;
        rows.push_back(row);
    }
    doc["results"] = rows;

    ordered_json cr;
    cr["dt_invariance"] = run.cr.dt_invariance;
    cr["dperp_antiinvariance"] = run.cr.dperp_antiinvariance;
    cr["metric_block"] = run.cr.metric_block;
    cr["warp_factor"] = run.cr.warp_factor;
    doc["cr_residuals"] = cr;
    doc["dt_minimality"] = run.dt_minimality;
    doc["h_xi_xi"] = run.h_xi_xi;

    if (run.theorem.diagnostics.populated) {
        ordered_json diag;
        diag["tg_residual"] = run.theorem.diagnostics.tg_residual;
        diag["umbilic_residual"] = run.theorem.diagnostics.umbilic_residual;
        diag["mean_curvature_norm"] = run.theorem.diagnostics.mean_curvature_norm;
        doc["equality_diagnostics"] = diag;
    }

    // The audit schema's violations array, kept for uniform downstream parsing.
    ordered_json violations = ordered_json::array();
    for (std::size_t i = 0; i < run.theorem.points.size(); ++i) {
        const auto& pr = run.theorem.points[i];
        if (!run.theorem.holds && pr.margin == run.theorem.min_margin) {
            ordered_json row;
            row["dim"] = 0;
            row["trial"] = i;
            row["margin"] = pr.margin;
            row["artifact"] = "";
            violations.push_back(row);
        }
    }
    doc["violations"] = violations;

    ordered_json summary;
    summary["trials"] = run.theorem.points.size();
    summary["min_margin"] = run.theorem.min_margin;
    summary["verdict"] = run.theorem.verdict;
    doc["summary"] = summary;
    return doc.dump(2) + "\n";
}

std::string geometry_report_to_csv(const GeometryRun& run) {
    std::string out = "model,point_index,h_sq,grad_lnf_sq,lap_lnf,rhs,margin\n";
    for (std::size_t i = 0; i < run.theorem.points.size(); ++i) {
        const auto& pr = run.theorem.points[i];
        out += run.model + "," + std::to_string(i) + "," + csv_double(pr.h_sq) + "," +
               csv_double(pr.grad_lnf_sq) + "," + csv_double(pr.lap_lnf) + "," +
               csv_double(pr.rhs) + "," + csv_double(pr.margin) + "\n";
    }
    return out;
}

} // namespace warpineq
