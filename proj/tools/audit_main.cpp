#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "warpineq/audit.hpp"
#include "warpineq/checks.hpp"
#include "warpineq/errors.hpp"
#include "warpineq/geometry.hpp"
#include "warpineq/matrix.hpp"
#include "warpineq/report.hpp"

namespace {

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

Range parse_range(const std::string& text) {
    auto fail = [&]() -> Range {
        throw std::invalid_argument("expected 'LO..HI' or a single integer, got '" + text + "'");
    };
    try {
        auto pos = text.find("..");
        if (pos == std::string::npos) {
            std::size_t v = std::stoull(text);
            return {v, v};
        }
        Range r{std::stoull(text.substr(0, pos)), std::stoull(text.substr(pos + 2))};
        if (r.lo > r.hi) return fail();
        return r;
    } catch (const std::invalid_argument&) {
        return fail();
    } catch (const std::out_of_range&) {
        return fail();
    }
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) {
        throw std::runtime_error("cannot open output file '" + out_path + "'");
    }
    f << text;
    if (!f) {
        throw std::runtime_error("failed writing output file '" + out_path + "'");
    }
}

std::int64_t effective_timestamp(std::int64_t requested) {
    return requested >= 0 ? requested : static_cast<std::int64_t>(std::time(nullptr));
}

} // namespace

int main(int argc, char** argv) {
    using namespace warpineq;

    CLI::App app{"Numerical audits of warped-product curvature inequalities and the "
                 "singular-value / harmonic-series bounds behind them"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    // ---- matrix-audit ----
    std::string ma_check;
    std::string ma_dims = "2..8";
    std::size_t ma_trials = 1000;
    std::uint64_t ma_seed = 42;
    double ma_tol = 1e-9;
    std::string ma_interp = "floor_t1";
    std::string ma_out;
    std::string ma_artifacts;
    std::string ma_format = "json";
    std::int64_t ma_timestamp = -1;
    bool ma_list = false;
    auto* ma = app.add_subcommand("matrix-audit",
                                  "Seeded random-matrix audit of one registered check");
    ma->add_option("--check", ma_check, "check name (see --list)");
    ma->add_flag("--list", ma_list, "print the registered checks and exit");
    ma->add_option("--dims", ma_dims, "dimension range LO..HI")->capture_default_str();
    ma->add_option("--trials", ma_trials, "trials per dimension")->capture_default_str();
    ma->add_option("--seed", ma_seed, "master seed")->capture_default_str();
    ma->add_option("--tol", ma_tol, "violation tolerance (margin < -tol)")->capture_default_str();
    ma->add_option("--interpretation", ma_interp, "index reading for the t0 check")
        ->capture_default_str()
        ->check(CLI::IsMember({"floor_t1", "floor_tv", "dim"}));
    ma->add_option("--out", ma_out, "write the report here instead of stdout");
    ma->add_option("--artifacts", ma_artifacts,
                   "directory for violating operands (default: next to --out)");
    ma->add_option("--format", ma_format, "report format")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
    ma->add_option("--timestamp", ma_timestamp,
                   "fixed started_unix_seconds for reproducible bytes (default: now)");

    // ---- geometry ----
    std::string g_model;
    std::size_t g_grid = 5;
    std::string g_sign = "divgrad";
    double g_geo_tol = 1e-6;
    std::string g_out;
    std::string g_format = "json";
    std::int64_t g_timestamp = -1;
    auto* ge = app.add_subcommand("geometry",
                                  "Audit the curvature inequality on a catalog immersion");
    ge->add_option("--model", g_model, "flat-product | chen-cone | circle-fiber")->required();
    ge->add_option("--grid", g_grid, "sample points per chart axis")->capture_default_str();
    ge->add_option("--laplacian-sign", g_sign,
                   "'divgrad' keeps div grad, 'negative' negates the reported Laplacian")
        ->capture_default_str()
        ->check(CLI::IsMember({"divgrad", "negative"}));
    ge->add_option("--geo-tol", g_geo_tol, "margin tolerance for the verdict")->capture_default_str();
    ge->add_option("--out", g_out, "write the report here instead of stdout");
    ge->add_option("--format", g_format, "report format")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
    ge->add_option("--timestamp", g_timestamp,
                   "fixed started_unix_seconds for reproducible bytes (default: now)");

    // ---- sweep ----
    std::string s_check;
    std::string s_range = "2..100000";
    std::string s_out;
    std::string s_format = "json";
    std::int64_t s_timestamp = -1;
    auto* sw = app.add_subcommand("sweep", "Exhaustive harmonic-bound sweeps over a v range");
    sw->add_option("--check", s_check, "inv-sqrt-bounds | sqrt-sum-chain")
        ->required()
        ->check(CLI::IsMember({"inv-sqrt-bounds", "sqrt-sum-chain"}));
    sw->add_option("--dims", s_range, "v range LO..HI")->capture_default_str();
    sw->add_option("--out", s_out, "write the report here instead of stdout");
    sw->add_option("--format", s_format, "report format")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
    sw->add_option("--timestamp", s_timestamp,
                   "fixed started_unix_seconds for reproducible bytes (default: now)");

    // ---- verify-file ----
    std::string v_check;
    std::string v_in;
    std::string v_x;
    double v_tol = 1e-9;
    std::string v_interp = "floor_t1";
    auto* vf = app.add_subcommand("verify-file",
                                  "Re-run one check on matrices saved in the text format");
    vf->add_option("--check", v_check, "t010 | c1 | t0")
        ->required()
        ->check(CLI::IsMember({"t010", "c1", "t0"}));
    vf->add_option("file", v_in, "primary operand (matrix text file)")->required();
    vf->add_option("--x", v_x, "second operand for t0");
    vf->add_option("--tol", v_tol, "violation tolerance (margin < -tol)")->capture_default_str();
    vf->add_option("--interpretation", v_interp, "index reading for the t0 check")
        ->capture_default_str()
        ->check(CLI::IsMember({"floor_t1", "floor_tv", "dim"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ma->parsed()) {
            if (ma_list) {
                for (const auto& name : audit::registered_checks()) std::cout << name << "\n";
                return 0;
            }
            if (ma_check.empty()) {
                std::cerr << "matrix-audit: --check is required (or use --list)\n";
                return 1;
            }
            Range dims = parse_range(ma_dims);
            audit::AuditOptions opts;
            opts.interpretation = audit::parse_interpretation(ma_interp);
            if (!ma_artifacts.empty()) {
                opts.artifact_dir = ma_artifacts;
            } else if (!ma_out.empty()) {
                auto parent = std::filesystem::path(ma_out).parent_path().string();
                opts.artifact_dir = parent.empty() ? "." : parent;
            }
            audit::AuditReport report =
                audit::run_audit(ma_check, dims.lo, dims.hi, ma_trials, ma_seed, ma_tol, opts);
            ConfigEcho echo = {
                {"command", "matrix-audit"},   {"check", ma_check},
                {"dims", ma_dims},             {"trials", std::to_string(ma_trials)},
                {"seed", std::to_string(ma_seed)}, {"tol", fmt_double(ma_tol)},
                {"interpretation", ma_interp}, {"format", ma_format},
            };
            std::string text = ma_format == "json"
                                   ? report_to_json(report, echo, effective_timestamp(ma_timestamp))
                                   : report_to_csv(report);
            emit(text, ma_out);
            return report.violations.empty() ? 0 : 2;
        }

        if (ge->parsed()) {
            const auto& model = geom::builtin_model(g_model);
            geom::GeoOptions gopts;
            gopts.geo_tol = g_geo_tol;
            gopts.laplacian_negative = g_sign == "negative";
            auto points = geom::sample_grid(model, g_grid);
            GeometryRun run;
            run.model = model.name;
            run.theorem = geom::check_theorem_4_2(model, points, gopts);
            run.cr = geom::check_cr_structure(model, points, gopts);
            run.dt_minimality = geom::check_dt_minimality(model, points, gopts);
            run.h_xi_xi = geom::check_xi_relations(model, points, gopts);
            ConfigEcho echo = {
                {"command", "geometry"},       {"model", g_model},
                {"grid", std::to_string(g_grid)}, {"laplacian_sign", g_sign},
                {"geo_tol", fmt_double(g_geo_tol)}, {"format", g_format},
            };
            std::string text = g_format == "json"
                                   ? geometry_report_to_json(run, echo, effective_timestamp(g_timestamp))
                                   : geometry_report_to_csv(run);
            emit(text, g_out);
            return run.theorem.holds ? 0 : 2;
        }

        if (sw->parsed()) {
            Range range = parse_range(s_range);
            audit::AuditReport report = audit::run_audit(s_check, range.lo, range.hi, 0, 0, 0.0);
            ConfigEcho echo = {
                {"command", "sweep"},
                {"check", s_check},
                {"dims", s_range},
                {"format", s_format},
            };
            std::string text = s_format == "json"
                                   ? report_to_json(report, echo, effective_timestamp(s_timestamp))
                                   : report_to_csv(report);
            emit(text, s_out);
            return report.violations.empty() ? 0 : 2;
        }

        if (vf->parsed()) {
            Matrix a = load_matrix_text(v_in);
            nlohmann::ordered_json doc;
            doc["tool_version"] = kToolVersion;
            doc["check_name"] = v_check;
            double margin = 0.0;
            if (v_check == "t0") {
                if (v_x.empty()) {
                    std::cerr << "verify-file: t0 needs --x with the second operand\n";
                    return 1;
                }
                Matrix x = load_matrix_text(v_x);
                audit::T0Sides sides = audit::t0_sides(x, a, audit::parse_interpretation(v_interp));
                doc["interpretation"] = v_interp;
                doc["m"] = sides.m;
                doc["lower"] = sides.lower;
                doc["middle"] = sides.middle;
                doc["upper"] = sides.upper;
                margin = std::min(sides.middle - sides.lower, sides.upper - sides.middle);
            } else {
                audit::TwoSides sides = v_check == "t010" ? audit::t010_sides(a) : audit::c1_sides(a);
                doc["lhs"] = sides.lhs;
                doc["rhs"] = sides.rhs;
                margin = sides.rhs - sides.lhs;
            }
            doc["margin"] = margin;
            bool violated = margin < -v_tol;
            doc["verdict"] = violated ? "violation" : "pass";
            std::cout << doc.dump(2) << "\n";
            return violated ? 2 : 0;
        }
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
