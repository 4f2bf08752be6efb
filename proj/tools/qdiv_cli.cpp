// Command-line front end: single-shot divergence/entropy/measurement
// evaluations on matrix files, and the randomized property suites.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdiv/divergence.hpp"
#include "qdiv/matrix_io.hpp"
#include "qdiv/pinching.hpp"
#include "qdiv/propcheck.hpp"
#include "qdiv/report.hpp"

using namespace qdiv;

namespace {

struct GlobalOptions {
    bool json = false;
    std::string out_path;
    double tol_scale = 1.0;
    std::uint64_t seed = 42;
    std::uint64_t trials = 100;
    std::vector<int> dims;
    std::vector<double> q_values;
};

std::string echo_command(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

InputDigest digest_of(const std::string& path) {
    return {path, fnv1a64(read_file_bytes(path))};
}

DensityMatrixXcd load_state(const std::string& path, RunReport& report,
                            const Tolerances<double>& tol) {
    report.inputs.push_back(digest_of(path));
    return validate_density(read_matrix_file(path), tol);
}

double require_single_q(const GlobalOptions& g) {
    if (g.q_values.size() != 1)
        throw Error(ErrorCode::BadArgument, "this command needs exactly one --q value");
    return g.q_values.front();
}

void cmd_divergence(const std::string& rho_path, const std::string& sigma_path,
                    const GlobalOptions& g, RunReport& report, const Tolerances<double>& tol) {
    EntropicIndex<double> q(require_single_q(g));
    auto rho = load_state(rho_path, report, tol);
    auto sigma = load_state(sigma_path, report, tol);
    double power_trace = q_divergence(rho, sigma, q).value;
    double qlog_route = q_divergence_qlog(rho, sigma, q).value;
    report.scalars.push_back({"q_divergence", power_trace});
    report.scalars.push_back({"q_divergence_qlog", qlog_route});
    report.scalars.push_back({"route_difference", std::abs(power_trace - qlog_route)});
}

void cmd_entropy(const std::string& rho_path, const GlobalOptions& g, RunReport& report,
                 const Tolerances<double>& tol) {
    EntropicIndex<double> q(require_single_q(g));
    auto rho = load_state(rho_path, report, tol);
    report.scalars.push_back({"tsallis_entropy", tsallis_entropy(rho, q)});
}

void cmd_measure(const std::string& rho_path, const std::string& family_path,
                 RunReport& report, const Tolerances<double>& tol) {
    auto rho = load_state(rho_path, report, tol);
    report.inputs.push_back(digest_of(family_path));
    Eigen::Index dim = 0;
    auto raw = read_projector_file(family_path, dim);
    ProjectorFamilyXcd family(dim, std::move(raw), tol);

    for (const auto& out : measure(rho, family, tol))
        report.scalars.push_back({"measure.p[" + std::to_string(out.index) + "]",
                                  out.probability});
    auto pinched = pinch(rho, family, tol);
    report.matrices.push_back({"pinch", pinched.matrix()});
    report.scalars.push_back(
        {"pinch.trace_residual", std::abs(pinched.matrix().trace().real() - 1.0)});
}

void cmd_check(const std::string& suite_arg, const GlobalOptions& g, RunReport& report,
               const Tolerances<double>& tol) {
    std::vector<SuiteKind> kinds;
    if (suite_arg == "all") {
        kinds = {SuiteKind::Nonnegativity,   SuiteKind::Pseudoadditivity,
                 SuiteKind::JointConvexity,  SuiteKind::LiebConcavity,
                 SuiteKind::Monotonicity,    SuiteKind::ExploreNoncommuting,
                 SuiteKind::PinchedTraceOracle, SuiteKind::QLimit};
    } else if (auto kind = suite_from_name(suite_arg)) {
        kinds = {*kind};
    } else {
        throw Error(ErrorCode::BadTrialConfig, "unknown suite \"" + suite_arg + "\"");
    }

    for (SuiteKind kind : kinds) {
        TrialConfig cfg;
        cfg.suite = kind;
        cfg.dims = g.dims;
        cfg.q_values = g.q_values;
        cfg.trials = g.trials;
        cfg.seed = g.seed;
        report.suites.push_back(run_suite(cfg, tol));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tsallis-entropy and q-divergence toolkit"};
    app.fallthrough(true);
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_flag("--json", g.json, "emit the machine-readable report on stdout");
    app.add_option("--out", g.out_path, "also write the JSON report to this path");
    app.add_option("--tol-scale", g.tol_scale,
                   "multiply every tolerance by this factor (diagnostic use only)");
    app.add_option("--seed", g.seed, "base seed for randomized suites");
    app.add_option("--trials", g.trials, "trials per (dim, q) cell");
    app.add_option("--dims", g.dims, "dimensions to sample (default 2..8)")->delimiter(',');
    app.add_option("--q", g.q_values, "entropic index value(s)")->delimiter(',');

    std::string rho_path, sigma_path, family_path, suite_arg;

    auto* divergence = app.add_subcommand("divergence", "q-divergence of two states, both routes");
    divergence->add_option("rho", rho_path, "state file")->required();
    divergence->add_option("sigma", sigma_path, "reference state file")->required();

    auto* entropy = app.add_subcommand("entropy", "Tsallis entropy of a state");
    entropy->add_option("rho", rho_path, "state file")->required();

    auto* measure_cmd = app.add_subcommand("measure", "projective measurement of a state");
    measure_cmd->add_option("rho", rho_path, "state file")->required();
    measure_cmd->add_option("projectors", family_path, "projector family file")->required();

    auto* check = app.add_subcommand("check", "run a property suite");
    check->add_option("--suite", suite_arg,
                      "one of nonneg, pseudoadd, convexity, lieb, monotonicity, "
                      "explore-noncommuting, oracle-eq13, qlimit, all")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    RunReport report;
    report.command = echo_command(argc, argv);
    report.tol_scale = g.tol_scale;
    report.tolerances = Tolerances<double>::scaled(g.tol_scale);

    auto start = std::chrono::steady_clock::now();
    try {
        if (divergence->parsed()) cmd_divergence(rho_path, sigma_path, g, report, report.tolerances);
        if (entropy->parsed()) cmd_entropy(rho_path, g, report, report.tolerances);
        if (measure_cmd->parsed()) cmd_measure(rho_path, family_path, report, report.tolerances);
        if (check->parsed()) cmd_check(suite_arg, g, report, report.tolerances);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for_error(e);
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (g.json)
        std::cout << to_json(report).dump(2) << "\n";
    else
        std::cout << render_human(report);

    if (!g.out_path.empty()) {
        std::ofstream out(g.out_path);
        if (!out) {
            std::cerr << "error: cannot write " << g.out_path << "\n";
            return exit_usage;
        }
        out << to_json(report).dump(2) << "\n";
    }
    return exit_code(report);
}
