#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdiv/matrix_io.hpp"
#include "qdiv/propcheck.hpp"

namespace qdiv {

// Exit codes of the command-line surface.  The contract is exhaustive:
//   0 success, 1 property violation, 2 usage/parse, 3 dimension mismatch,
//   4 invalid projector family.
inline constexpr int exit_ok = 0;
inline constexpr int exit_violation = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_dimension = 3;
inline constexpr int exit_bad_family = 4;

inline int exit_code_for_error(const Error& e) {
    switch (e.code()) {
        case ErrorCode::DimensionMismatch: return exit_dimension;
        case ErrorCode::InvalidProjectorFamily: return exit_bad_family;
        default: return exit_usage;
    }
}

struct InputDigest {
    std::string path;
    std::uint64_t digest = 0;
};

struct ScalarOutput {
    std::string op;
    double value = 0;
};

struct MatrixOutput {
    std::string op;
    MatrixX<cxd> value;
};

/// Everything one command run produced: the echoed command line, content
/// digests of the input files, the tolerances in effect, every numeric output
/// tagged with the operation that computed it, and any suite reports.
struct RunReport {
    std::string command;
    std::vector<InputDigest> inputs;
    Tolerances<double> tolerances;
    double tol_scale = 1.0;
    std::vector<ScalarOutput> scalars;
    std::vector<MatrixOutput> matrices;
    std::vector<PropertyReport> suites;
    double wall_time_seconds = 0;
};

/// 1 when any asserting suite saw a violation, 0 otherwise.
inline int exit_code(const RunReport& report) {
    for (const auto& s : report.suites)
        if (s.asserting && s.violations > 0) return exit_violation;
    return exit_ok;
}

namespace detail {

inline nlohmann::json matrix_to_json(const MatrixX<cxd>& m) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json re_row = nlohmann::json::array();
        nlohmann::json im_row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            re_row.push_back(m(i, j).real());
            im_row.push_back(m(i, j).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline nlohmann::json trial_to_json(const TrialRecord& r) {
    return {{"dim", r.dim}, {"q", r.q}, {"trial", r.trial}, {"margin", r.margin}};
}

inline nlohmann::json suite_to_json(const PropertyReport& s) {
    nlohmann::json j{{"suite", s.suite},
                     {"asserting", s.asserting},
                     {"trials_run", s.trials_run},
                     {"violations", s.violations},
                     {"worst_margin", s.worst_margin},
                     {"seed", s.seed},
                     {"elapsed_seconds", s.elapsed_seconds},
                     {"sampler_rejections", s.sampler_rejections}};
    j["first_violation"] =
        s.first_violation ? trial_to_json(*s.first_violation) : nlohmann::json(nullptr);
    return j;
}

}  // namespace detail

inline nlohmann::json to_json(const RunReport& r) {
    nlohmann::json j;
    j["command"] = r.command;
    j["inputs"] = nlohmann::json::array();
    for (const auto& in : r.inputs) {
        char hex[19];
        std::snprintf(hex, sizeof(hex), "0x%016llx", static_cast<unsigned long long>(in.digest));
        j["inputs"].push_back({{"path", in.path}, {"fnv1a64", hex}});
    }
    j["tolerances"] = {{"herm", r.tolerances.herm},     {"trace", r.tolerances.trace},
                       {"proj", r.tolerances.proj},     {"psd", r.tolerances.psd},
                       {"recon", r.tolerances.recon},   {"support", r.tolerances.support},
                       {"div", r.tolerances.div},       {"comm", r.tolerances.comm},
                       {"prob", r.tolerances.prob},     {"scale", r.tol_scale}};
    j["outputs"] = nlohmann::json::array();
    for (const auto& s : r.scalars) j["outputs"].push_back({{"op", s.op}, {"value", s.value}});
    for (const auto& m : r.matrices)
        j["outputs"].push_back({{"op", m.op}, {"matrix", detail::matrix_to_json(m.value)}});
    j["suites"] = nlohmann::json::array();
    for (const auto& s : r.suites) j["suites"].push_back(detail::suite_to_json(s));
    j["wall_time_seconds"] = r.wall_time_seconds;
    return j;
}

inline std::string render_human(const RunReport& r) {
    std::ostringstream out;
    out << "command: " << r.command << "\n";
    for (const auto& in : r.inputs) {
        char hex[19];
        std::snprintf(hex, sizeof(hex), "0x%016llx", static_cast<unsigned long long>(in.digest));
        out << "input:   " << in.path << "  (fnv1a64 " << hex << ")\n";
    }
    for (const auto& s : r.scalars) out << "  " << s.op << " = " << format_full(s.value) << "\n";
    for (const auto& m : r.matrices) {
        out << "  " << m.op << " =\n";
        for (Eigen::Index i = 0; i < m.value.rows(); ++i) {
            out << "    ";
            for (Eigen::Index j = 0; j < m.value.cols(); ++j) {
                cxd z = m.value(i, j);
                out << "(" << format_full(z.real()) << (z.imag() < 0 ? " - " : " + ")
                    << format_full(std::abs(z.imag())) << "i)" << (j + 1 < m.value.cols() ? "  " : "");
            }
            out << "\n";
        }
    }
    for (const auto& s : r.suites) {
        out << "  suite " << s.suite << ": trials=" << s.trials_run
            << " violations=" << s.violations << " worst_margin=" << format_full(s.worst_margin)
            << " seed=" << s.seed << " rejections=" << s.sampler_rejections
            << " elapsed=" << format_full(s.elapsed_seconds) << "s"
            << (s.asserting ? "" : "  [exploratory, never fails the run]") << "\n";
        if (s.first_violation) {
            const auto& v = *s.first_violation;
            out << "    first violation: dim=" << v.dim << " q=" << format_full(v.q)
                << " trial=" << v.trial << " margin=" << format_full(v.margin)
                << "  (reproduce with seed=" << s.seed << ", trial index " << v.trial << ")\n";
        }
    }
    out << "tolerance scale: " << format_full(r.tol_scale) << "\n";
    out << "wall time: " << format_full(r.wall_time_seconds) << "s\n";
    return out.str();
}

}  // namespace qdiv
