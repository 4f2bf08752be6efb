#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

#include "qdiv/matrix_io.hpp"
#include "qdiv/random.hpp"
#include "qdiv/report.hpp"
#include "test_helpers.hpp"

using namespace qdiv;
using qdiv_test::error_code_of;

#ifndef QDIV_CLI_PATH
#error "QDIV_CLI_PATH must point at the built command-line binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(QDIV_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) text.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text};
}

fs::path scratch_dir() {
    auto dir = fs::temp_directory_path() / "qdiv_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string write_state(const std::string& name, const MatrixX<cxd>& m) {
    auto path = scratch_dir() / name;
    write_matrix_file(path.string(), m);
    return path.string();
}

MatrixX<cxd> diag2(double a, double b) {
    MatrixX<cxd> m = MatrixX<cxd>::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("matrix files round-trip bit-exactly") {
    for (std::uint64_t t = 0; t < 25; ++t) {
        auto eng = trial_engine(101, 3, 4, 0, t);
        MatrixX<cxd> m = ginibre<cxd>(4, 4, eng);  // arbitrary complex entries
        auto path = (scratch_dir() / ("roundtrip_" + std::to_string(t) + ".json")).string();
        write_matrix_file(path, m);
        MatrixX<cxd> back = read_matrix_file(path);
        REQUIRE(back.rows() == 4);
        REQUIRE(back == m);  // every bit preserved
    }
}

TEST_CASE("projector files round-trip bit-exactly") {
    auto eng = trial_engine(103, 3, 3, 0, 0);
    auto family = random_projector_family<cxd>(3, {1, 2}, eng);
    auto path = (scratch_dir() / "family_roundtrip.json").string();
    write_projector_file(path, family.projectors());

    Eigen::Index dim = 0;
    auto back = read_projector_file(path, dim);
    REQUIRE(dim == 3);
    REQUIRE(back.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) REQUIRE(back[k] == family[k]);
}

TEST_CASE("malformed matrix files raise parse errors") {
    auto bad = scratch_dir() / "bad.json";
    std::ofstream(bad) << "{\"dim\": 2, \"re\": [[1, 0]], \"im\": [[0, 0], [0, 0]]}";
    CHECK(error_code_of([&] { read_matrix_file(bad.string()); }) == ErrorCode::ParseError);

    std::ofstream(bad) << "not json at all";
    CHECK(error_code_of([&] { read_matrix_file(bad.string()); }) == ErrorCode::ParseError);

    CHECK(error_code_of([&] { read_matrix_file("/nonexistent/file.json"); }) ==
          ErrorCode::ParseError);
}

TEST_CASE("content digests are stable and content-sensitive") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("abc") == fnv1a64("abc"));
    CHECK(fnv1a64("abc") != fnv1a64("abd"));
}

TEST_CASE("report exit codes follow the documented contract") {
    RunReport report;
    CHECK(exit_code(report) == exit_ok);

    PropertyReport clean;
    clean.asserting = true;
    clean.violations = 0;
    report.suites.push_back(clean);
    CHECK(exit_code(report) == exit_ok);

    PropertyReport exploratory;
    exploratory.asserting = false;
    exploratory.violations = 3;
    report.suites.push_back(exploratory);
    CHECK(exit_code(report) == exit_ok);  // exploratory findings never fail a run

    PropertyReport violated;
    violated.asserting = true;
    violated.violations = 1;
    report.suites.push_back(violated);
    CHECK(exit_code(report) == exit_violation);

    CHECK(exit_code_for_error(Error(ErrorCode::DimensionMismatch, "")) == exit_dimension);
    CHECK(exit_code_for_error(Error(ErrorCode::InvalidProjectorFamily, "")) == exit_bad_family);
    CHECK(exit_code_for_error(Error(ErrorCode::ParseError, "")) == exit_usage);
    CHECK(exit_code_for_error(Error(ErrorCode::TraceNotOne, "")) == exit_usage);
    CHECK(exit_code_for_error(Error(ErrorCode::InvalidEntropicIndex, "")) == exit_usage);
}

TEST_CASE("report JSON carries the documented schema") {
    RunReport report;
    report.command = "qdiv entropy x.json --q 0.5";
    report.inputs.push_back({"x.json", 0xdeadbeefull});
    report.scalars.push_back({"tsallis_entropy", 0.25});
    report.matrices.push_back({"pinch", MatrixX<cxd>::Identity(2, 2)});
    PropertyReport suite;
    suite.suite = "monotonicity";
    suite.first_violation = TrialRecord{4, 0.5, 17, -2e-9};
    report.suites.push_back(suite);

    auto j = to_json(report);
    for (const char* key : {"command", "inputs", "tolerances", "outputs", "suites",
                            "wall_time_seconds"})
        REQUIRE(j.contains(key));
    CHECK(j["inputs"][0]["fnv1a64"] == "0x00000000deadbeef");
    CHECK(j["outputs"][0]["op"] == "tsallis_entropy");
    CHECK(j["outputs"][1]["matrix"]["dim"] == 2);
    CHECK(j["tolerances"]["div"] == 1e-9);
    CHECK(j["suites"][0]["first_violation"]["trial"] == 17);

    // full-precision floats survive a JSON round trip
    double awkward = 0.1 + 0.2;
    report.scalars[0].value = awkward;
    auto reparsed = nlohmann::json::parse(to_json(report).dump());
    CHECK(reparsed["outputs"][0]["value"].get<double>() == awkward);
}

TEST_CASE("cli: divergence reproduces the worked example") {
    auto rho = write_state("cli_rho.json", diag2(0.5, 0.5));
    auto sigma = write_state("cli_sigma.json", diag2(0.25, 0.75));
    auto res = run_cli("--json divergence " + rho + " " + sigma + " --q 0.5");
    REQUIRE(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.stdout_text);
    CHECK(std::abs(j["outputs"][0]["value"].get<double>() - 0.06814834742186315) < 1e-6);
    CHECK(j["outputs"][2]["value"].get<double>() <= 1e-9);
}

TEST_CASE("cli: equal inputs give zero divergence") {
    auto rho = write_state("cli_same.json", diag2(0.5, 0.5));
    auto res = run_cli("--json divergence " + rho + " " + rho + " --q 0.3");
    REQUIRE(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.stdout_text);
    CHECK(std::abs(j["outputs"][0]["value"].get<double>()) <= 1e-9);
}

TEST_CASE("cli: entropy command matches the frozen anchor") {
    auto rho = write_state("cli_mixed.json", MatrixX<cxd>(MatrixX<cxd>::Identity(2, 2) / 2.0));
    auto res = run_cli("--json entropy " + rho + " --q 0.5");
    REQUIRE(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.stdout_text);
    CHECK(std::abs(j["outputs"][0]["value"].get<double>() - 0.8284271247461903) < 1e-6);
}

TEST_CASE("cli: endpoint q is a usage error") {
    auto rho = write_state("cli_q1.json", diag2(0.5, 0.5));
    CHECK(run_cli("divergence " + rho + " " + rho + " --q 1.0").exit_code == exit_usage);
    CHECK(run_cli("entropy " + rho + " --q 0").exit_code == exit_usage);
}

TEST_CASE("cli: parse and validation failures exit 2") {
    auto bad = scratch_dir() / "cli_bad.json";
    std::ofstream(bad) << "{\"dim\": 2}";
    CHECK(run_cli("entropy " + bad.string() + " --q 0.5").exit_code == exit_usage);

    auto not_state = write_state("cli_trace.json", diag2(0.6, 0.6));
    CHECK(run_cli("entropy " + not_state + " --q 0.5").exit_code == exit_usage);

    CHECK(run_cli("check --suite nonneg --trials 0").exit_code == exit_usage);
    CHECK(run_cli("check --suite bogus").exit_code == exit_usage);
    CHECK(run_cli("nonsense-command").exit_code == exit_usage);
}

TEST_CASE("cli: dimension mismatch exits 3") {
    auto rho = write_state("cli_d2.json", diag2(0.5, 0.5));
    auto sigma = write_state("cli_d3.json", MatrixX<cxd>(MatrixX<cxd>::Identity(3, 3) / 3.0));
    CHECK(run_cli("divergence " + rho + " " + sigma + " --q 0.5").exit_code == exit_dimension);
}

TEST_CASE("cli: broken projector family exits 4 naming the failure") {
    auto rho = write_state("cli_meas_rho.json", diag2(0.5, 0.5));
    std::vector<MatrixX<cxd>> overlapping{diag2(1.0, 0.0),
                                          MatrixX<cxd>::Constant(2, 2, cxd(0.5, 0.0))};
    auto path = (scratch_dir() / "cli_bad_family.json").string();
    write_projector_file(path, overlapping);
    CHECK(run_cli("measure " + rho + " " + path).exit_code == exit_bad_family);
}

TEST_CASE("cli: measurement of the plus state") {
    MatrixX<cxd> plus = MatrixX<cxd>::Constant(2, 2, cxd(0.5, 0.0));
    auto rho = write_state("cli_plus.json", plus);
    auto family = computational_basis_family<cxd>(2);
    auto path = (scratch_dir() / "cli_cb2.json").string();
    write_projector_file(path, family.projectors());

    auto res = run_cli("--json measure " + rho + " " + path);
    REQUIRE(res.exit_code == 0);
    auto j = nlohmann::json::parse(res.stdout_text);
    CHECK(std::abs(j["outputs"][0]["value"].get<double>() - 0.5) < 1e-12);
    CHECK(std::abs(j["outputs"][1]["value"].get<double>() - 0.5) < 1e-12);
    // the pinched matrix is I/2
    auto m = j["outputs"][3]["matrix"];
    CHECK(std::abs(m["re"][0][0].get<double>() - 0.5) < 1e-12);
    CHECK(std::abs(m["re"][0][1].get<double>()) < 1e-12);
}

TEST_CASE("cli: check runs clean and is deterministic") {
    std::string args = "--json check --suite monotonicity --dims 2,3 --trials 10 --seed 321";
    auto r1 = run_cli(args);
    auto r2 = run_cli(args);
    REQUIRE(r1.exit_code == 0);
    auto j1 = nlohmann::json::parse(r1.stdout_text);
    auto j2 = nlohmann::json::parse(r2.stdout_text);
    CHECK(j1["suites"][0]["violations"] == j2["suites"][0]["violations"]);
    CHECK(j1["suites"][0]["worst_margin"] == j2["suites"][0]["worst_margin"]);
    CHECK(j1["suites"][0]["trials_run"].get<std::uint64_t>() == 10u * 2u * 5u);
}

TEST_CASE("cli: --out writes the same JSON report") {
    auto rho = write_state("cli_out.json", diag2(0.5, 0.5));
    auto out_path = (scratch_dir() / "cli_report.json").string();
    auto res = run_cli("--json --out " + out_path + " entropy " + rho + " --q 0.5");
    REQUIRE(res.exit_code == 0);
    auto from_stdout = nlohmann::json::parse(res.stdout_text);
    auto from_file = nlohmann::json::parse(read_file_bytes(out_path));
    CHECK(from_stdout["outputs"] == from_file["outputs"]);
}
