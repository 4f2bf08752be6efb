#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdiv/errors.hpp"
#include "qdiv/types.hpp"

namespace qdiv {

/// Formats a double with 17 significant digits, enough for an exact
/// read-back of the same bits.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// FNV-1a over raw bytes; used as the content digest of input files.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline std::vector<std::vector<double>> parse_grid(const nlohmann::json& j, Eigen::Index dim,
                                                   const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw Error(ErrorCode::ParseError, std::string("missing array \"") + key + "\"");
    std::vector<std::vector<double>> grid;
    for (const auto& row : j[key]) {
        if (!row.is_array())
            throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" rows must be arrays");
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number())
                throw Error(ErrorCode::ParseError, std::string("non-numeric entry in \"") + key + "\"");
            r.push_back(v.get<double>());
        }
        grid.push_back(std::move(r));
    }
    if (static_cast<Eigen::Index>(grid.size()) != dim)
        throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must have dim rows");
    for (const auto& r : grid)
        if (static_cast<Eigen::Index>(r.size()) != dim)
            throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" rows must have dim entries");
    return grid;
}

inline MatrixX<cxd> matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "matrix entry must be an object");
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw Error(ErrorCode::ParseError, "missing integer \"dim\"");
    Eigen::Index dim = j["dim"].get<Eigen::Index>();
    if (dim < 1) throw Error(ErrorCode::ParseError, "dim must be at least 1");
    auto re = parse_grid(j, dim, "re");
    auto im = parse_grid(j, dim, "im");
    MatrixX<cxd> m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index k = 0; k < dim; ++k)
            m(i, k) = cxd(re[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                          im[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    return m;
}

inline void matrix_body_to_stream(std::ostream& out, const MatrixX<cxd>& m, const char* indent) {
    auto grid = [&](auto entry) {
        std::ostringstream ss;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            ss << indent << "  [";
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                ss << format_full(entry(i, j)) << (j + 1 < m.cols() ? ", " : "");
            ss << "]" << (i + 1 < m.rows() ? ",\n" : "\n");
        }
        return ss.str();
    };
    out << indent << "\"dim\": " << m.rows() << ",\n";
    out << indent << "\"re\": [\n"
        << grid([&](Eigen::Index i, Eigen::Index j) { return m(i, j).real(); }) << indent << "],\n";
    out << indent << "\"im\": [\n"
        << grid([&](Eigen::Index i, Eigen::Index j) { return m(i, j).imag(); }) << indent << "]\n";
}

}  // namespace detail

/// Reads the single-matrix text format: an object with keys dim, re, im.
inline MatrixX<cxd> read_matrix_file(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file_bytes(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    return detail::matrix_from_json(j);
}

/// Writes a matrix in the same format, with every entry carrying 17
/// significant digits so write-then-read reproduces the matrix bit-exactly.
inline void write_matrix_file(const std::string& path, const MatrixX<cxd>& m) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << "{\n";
    detail::matrix_body_to_stream(out, m, "  ");
    out << "}\n";
}

/// Reads a projector-family file: {"dim": d, "projectors": [matrix, ...]}.
inline std::vector<MatrixX<cxd>> read_projector_file(const std::string& path, Eigen::Index& dim_out) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file_bytes(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
        throw Error(ErrorCode::ParseError, path + ": missing integer \"dim\"");
    if (!j.contains("projectors") || !j["projectors"].is_array() || j["projectors"].empty())
        throw Error(ErrorCode::ParseError, path + ": missing nonempty array \"projectors\"");
    dim_out = j["dim"].get<Eigen::Index>();
    std::vector<MatrixX<cxd>> ps;
    for (const auto& entry : j["projectors"]) {
        MatrixX<cxd> p = detail::matrix_from_json(entry);
        if (p.rows() != dim_out)
            throw Error(ErrorCode::ParseError, path + ": projector dimension differs from ambient dim");
        ps.push_back(std::move(p));
    }
    return ps;
}

inline void write_projector_file(const std::string& path, const std::vector<MatrixX<cxd>>& ps) {
    if (ps.empty()) throw Error(ErrorCode::BadArgument, "empty projector list");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << "{\n  \"dim\": " << ps.front().rows() << ",\n  \"projectors\": [\n";
    for (std::size_t k = 0; k < ps.size(); ++k) {
        out << "    {\n";
        detail::matrix_body_to_stream(out, ps[k], "      ");
        out << "    }" << (k + 1 < ps.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
}

}  // namespace qdiv
