#include "fkpp_tools/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "fkpp/errors.hpp"
#include "fkpp/test_problem.hpp"

#ifndef FKPP_VERSION
#define FKPP_VERSION "unknown"
#endif

namespace fkpp::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream open_output(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_output(path);
    out << text;
    if (!out) throw Error("failed writing " + path);
}

std::string join(const std::string& dir, const char* name) { return (std::filesystem::path(dir) / name).string(); }

json base_manifest(const RunConfig& c, const char* command) {
    return {{"command", command},
            {"version", FKPP_VERSION},
            {"config", c.resolved},
            {"model", describe_model(c.model)},
            {"sampler", describe(c.scheme.sampler)},
            {"seed", c.seed}};
}

void print_report(const StepSizeReport& r, std::ostream& out) {
    out << "h = " << format_number(r.h_used) << ", h_max = " << format_number(r.h_max) << '\n';
    out << "k = " << format_number(r.k_used) << ", k_max = " << format_number(r.k_max) << '\n';
    out << "bounds: d1 = " << format_number(r.bounds.d1) << ", d2 = " << format_number(r.bounds.d2)
        << ", b1 = " << format_number(r.bounds.b1) << ", a1 = " << format_number(r.bounds.a1)
        << ", a2 = " << format_number(r.bounds.a2) << '\n';
    out << (r.admissible ? "admissible" : "inadmissible") << '\n';
    for (const auto& n : r.notes) out << "note: " << n << '\n';
}

/// Runs `body`, mapping library exceptions onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const InadmissibleStepError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainFailure;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDomainFailure;
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_mean_csv(const std::string& path, const Grid1D& grid, const TimeMesh& mesh, const EnsembleStats& stats) {
    std::string text = stats.mc_standard_error ? "x,t,mean,mc_standard_error\n" : "x,t,mean\n";
    for (int n = 0; n < mesh.levels(); ++n) {
        for (int i = 0; i < grid.size(); ++i) {
            text += format_number(grid.node(i)) + ',' + format_number(mesh.level(n)) + ',' +
                    format_number(stats.mean(i, n));
            if (stats.mc_standard_error) text += ',' + format_number((*stats.mc_standard_error)(i, n));
            text += '\n';
        }
    }
    write_text(path, text);
}

void write_std_csv(const std::string& path, const Grid1D& grid, const TimeMesh& mesh, const EnsembleStats& stats) {
    std::string text = "x,t,std\n";
    for (int n = 0; n < mesh.levels(); ++n) {
        for (int i = 0; i < grid.size(); ++i) {
            text += format_number(grid.node(i)) + ',' + format_number(mesh.level(n)) + ',' +
                    format_number(stats.std(i, n)) + '\n';
        }
    }
    write_text(path, text);
}

void write_refinement_csv(const std::string& path, const std::vector<RefinementRow>& rows) {
    std::string text = "h,k,max_err_mean,observed_order\n";
    for (const auto& r : rows) {
        text += format_number(r.h) + ',' + format_number(r.k) + ',' + format_number(r.max_error) + ',';
        if (r.observed_order) text += format_number(*r.observed_order);
        text += '\n';
    }
    write_text(path, text);
}

std::string describe_model(const Model& m) {
    std::string s = m.name + ": D = " + m.diffusion.shape().name + " * " + m.diffusion.amplitude().describe();
    s += ", B = " + m.advection.shape().name + " * " + m.advection.amplitude().describe();
    s += ", A = " + m.reaction.shape().name + " * " + m.reaction.amplitude().describe();
    s += ", initial = " + m.initial.name;
    if (m.initial_amplitude.is_random() || m.initial_amplitude.mean() != 1.0) {
        s += " * " + m.initial_amplitude.describe();
    }
    s += ", boundary = " + m.boundary.name;
    return s;
}

json report_json(const StepSizeReport& r) {
    return {{"h", r.h_used},
            {"k", r.k_used},
            {"h_max", std::isinf(r.h_max) ? json(nullptr) : json(r.h_max)},
            {"k_max", r.k_max},
            {"admissible", r.admissible},
            {"bounds", {{"d1", r.bounds.d1}, {"d2", r.bounds.d2}, {"b1", r.bounds.b1}, {"a1", r.bounds.a1},
                        {"a2", r.bounds.a2}}},
            {"notes", r.notes}};
}

int cmd_check(const RunConfig& c, std::ostream& out, std::ostream&) {
    const StepSizeReport r = stepsize_gate(c.model, c.scheme.grid, c.scheme.mesh);
    print_report(r, out);
    return r.admissible ? kSuccess : kDomainFailure;
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto t0 = Clock::now();
    const StepSizeReport report = stepsize_gate(c.model, c.scheme.grid, c.scheme.mesh);
    for (const auto& n : report.notes) err << "note: " << n << '\n';
    EnsembleOptions options;
    options.warn = [&err](const std::string& msg) { err << "warning: " << msg << '\n'; };
    const double t_setup = seconds_since(t0);

    const auto t1 = Clock::now();
    const EnsembleStats stats = run_ensemble(c.model, c.scheme, options);
    const double t_solve = seconds_since(t1);

    const auto t2 = Clock::now();
    write_mean_csv(join(c.out_dir, "mean.csv"), c.scheme.grid, c.scheme.mesh, stats);
    write_std_csv(join(c.out_dir, "std.csv"), c.scheme.grid, c.scheme.mesh, stats);
    json manifest = base_manifest(c, "solve");
    manifest["stepsize_report"] = report_json(report);
    manifest["realizations"] = stats.count;
    manifest["files"] = {"mean.csv", "std.csv"};
    manifest["timings_seconds"] = {{"setup", t_setup}, {"solve", t_solve}, {"write", seconds_since(t2)}};
    write_text(join(c.out_dir, "manifest.json"), manifest.dump(2) + '\n');

    out << "solved " << stats.count << " realizations (" << stats.method << "), output in " << c.out_dir << '\n';
    return kSuccess;
}

int cmd_validate(const RunConfig& c, double tolerance, std::ostream& out, std::ostream& err) {
    if (!c.builtin_law) throw ConfigError("validate needs the built-in model \"" + std::string(kTestProblemName) + "\"");
    const auto t0 = Clock::now();
    const StepSizeReport report = stepsize_gate(c.model, c.scheme.grid, c.scheme.mesh);
    for (const auto& n : report.notes) err << "note: " << n << '\n';
    if (!report.admissible && !c.scheme.allow_inadmissible) {
        print_report(report, err);
        return kDomainFailure;
    }
    const EnsembleStats stats = run_ensemble(c.model, c.scheme);
    const double t_solve = seconds_since(t0);

    const auto t1 = Clock::now();
    const ErrorReport er = error_report(stats, c.scheme.grid, c.scheme.mesh, *c.builtin_law);
    const double t_exact = seconds_since(t1);

    std::string text = "x,mean_abs_error,std_abs_error\n";
    for (Eigen::Index i = 0; i < er.x.size(); ++i) {
        text += format_number(er.x(i)) + ',' + format_number(er.mean_error(i)) + ',' +
                format_number(er.std_error(i)) + '\n';
    }
    write_text(join(c.out_dir, "errors.csv"), text);
    const bool pass = er.max_mean_error <= tolerance && er.max_std_error <= tolerance;
    json manifest = base_manifest(c, "validate");
    manifest["stepsize_report"] = report_json(report);
    manifest["realizations"] = stats.count;
    manifest["tolerance"] = tolerance;
    manifest["max_mean_error"] = er.max_mean_error;
    manifest["max_std_error"] = er.max_std_error;
    manifest["passed"] = pass;
    manifest["files"] = {"errors.csv"};
    manifest["timings_seconds"] = {{"solve", t_solve}, {"exact", t_exact}};
    write_text(join(c.out_dir, "manifest.json"), manifest.dump(2) + '\n');

    out << "max |mean error| = " << format_number(er.max_mean_error) << '\n';
    out << "max |std error|  = " << format_number(er.max_std_error) << '\n';
    out << (pass ? "PASS" : "FAIL") << " (tolerance " << format_number(tolerance) << ")\n";
    return pass ? kSuccess : kDomainFailure;
}

int cmd_converge(const RunConfig& c, int levels, const std::string& kind, std::ostream& out, std::ostream&) {
    if (!c.builtin_law) throw ConfigError("converge needs the built-in model \"" + std::string(kTestProblemName) + "\"");
    if (kind != "spatial" && kind != "temporal" && kind != "both") {
        throw ConfigError("converge: --kind must be spatial, temporal or both");
    }
    ConvergenceSetup setup;
    const auto& law = c.builtin_law->kind();
    setup.a = std::holds_alternative<TruncatedNormal>(law) ? std::get<TruncatedNormal>(law).mu
                                                           : std::get<Deterministic>(law).value;
    setup.length = c.scheme.grid.length();
    setup.h = c.scheme.grid.spacing();
    setup.k = c.scheme.mesh.step();
    setup.horizon = c.scheme.mesh.horizon();
    setup.levels = levels;
    setup.allow_inadmissible = c.scheme.allow_inadmissible;

    json manifest = base_manifest(c, "converge");
    manifest["levels"] = levels;
    manifest["a"] = setup.a;
    json files = json::array();
    auto study = [&](Refinement r, const char* label, const char* file) {
        const auto t0 = Clock::now();
        const auto rows = convergence_study(r, setup);
        write_refinement_csv(join(c.out_dir, file), rows);
        files.push_back(file);
        manifest["timings_seconds"][label] = seconds_since(t0);
        out << label << ":\n";
        for (const auto& row : rows) {
            out << "  h = " << format_number(row.h) << ", k = " << format_number(row.k)
                << ", max error = " << format_number(row.max_error);
            if (row.observed_order) out << ", order = " << format_number(*row.observed_order);
            out << '\n';
        }
    };
    if (kind != "temporal") study(Refinement::spatial, "spatial", "convergence_spatial.csv");
    if (kind != "spatial") study(Refinement::temporal, "temporal", "convergence_temporal.csv");
    manifest["files"] = files;
    write_text(join(c.out_dir, "manifest.json"), manifest.dump(2) + '\n');
    return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random Fisher-KPP solver: exponential time differencing with ensemble statistics", "fkpp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", FKPP_VERSION);

    std::string config_path;
    Overrides o;
    double tolerance = 2e-3;
    int levels = 3;
    std::string kind = "both";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "JSON configuration file")->required();
        sub->add_option("--seed", o.seed, "Master seed (overrides the config)");
        sub->add_option("--samples", o.samples,
                        "Monte Carlo sample count, or collocation nodes per random amplitude");
        sub->add_option("--threads", o.threads, "Worker threads, 0 for all cores");
        sub->add_flag("--allow-inadmissible", o.allow_inadmissible,
                      "Run even when the step sizes fail the positivity gate");
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("-o,--out-dir", o.out_dir, "Output directory (default: config, then $FKPP_OUT_DIR)");
    };

    CLI::App* check = app.add_subcommand("check", "Report the step-size gate for a configuration");
    add_common(check);
    CLI::App* solve = app.add_subcommand("solve", "Compute mean and std surfaces");
    add_common(solve);
    add_out(solve);
    CLI::App* validate = app.add_subcommand("validate", "Compare against the exact statistics of the test problem");
    add_common(validate);
    add_out(validate);
    validate->add_option("--tolerance", tolerance, "Threshold on max mean and std errors")
        ->check(CLI::PositiveNumber);
    CLI::App* converge = app.add_subcommand("converge", "Refinement study on the deterministic test problem");
    add_common(converge);
    add_out(converge);
    converge->add_option("--levels", levels, "Number of refinement levels")->check(CLI::Range(1, 12));
    converge->add_option("--kind", kind, "spatial, temporal or both")
        ->check(CLI::IsMember({"spatial", "temporal", "both"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    std::optional<RunConfig> loaded;
    try {
        loaded.emplace(load_config(config_path, o));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    const RunConfig& config = *loaded;
    return guarded(err, [&] {
        if (*check) return cmd_check(config, out, err);
        if (*solve) return cmd_solve(config, out, err);
        if (*validate) return cmd_validate(config, tolerance, out, err);
        return cmd_converge(config, levels, kind, out, err);
    });
}

}  // namespace fkpp::cli
