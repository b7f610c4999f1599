#pragma once

// File formats: polynomial documents (JSON), node files (CSV-like text) and
// solver result documents.

#include "pip/error.hpp"
#include "pip/monomials.hpp"
#include "pip/nodeset.hpp"
#include "pip/pipsolver.hpp"
#include "pip/polynomial.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace pip {

inline constexpr const char* kOrderingName = "graded-lex-eqC";

/// Shortest decimal that round-trips the double (at most 17 significant digits).
inline std::string format_real(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Fixed 17 significant digits, for CSV columns.
inline std::string format_real17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline nlohmann::ordered_json polynomial_to_json(const MultiPoly& q) {
    nlohmann::ordered_json j;
    j["m"] = q.dimension();
    j["n"] = q.degree_bound();
    j["ordering"] = kOrderingName;
    j["coefficients"] = std::vector<double>(q.coefficients().begin(), q.coefficients().end());
    return j;
}

inline MultiPoly polynomial_from_json(const nlohmann::json& j) {
    auto field = [&](const char* name) -> const nlohmann::json& {
        if (!j.is_object() || !j.contains(name)) throw FormatError(std::string("polynomial file: missing field '") + name + "'");
        return j.at(name);
    };
    const auto& jm = field("m");
    const auto& jn = field("n");
    if (!jm.is_number_integer() || jm.get<int>() < 1) throw FormatError("polynomial file: field 'm' must be an integer >= 1");
    if (!jn.is_number_integer() || jn.get<int>() < 0) throw FormatError("polynomial file: field 'n' must be an integer >= 0");
    const auto& jo = field("ordering");
    if (!jo.is_string() || jo.get<std::string>() != kOrderingName)
        throw FormatError(std::string("polynomial file: field 'ordering' must be \"") + kOrderingName + "\"");
    const auto& jc = field("coefficients");
    const int m = jm.get<int>(), n = jn.get<int>();
    const std::size_t N = count_total(m, n);
    if (!jc.is_array() || jc.size() != N)
        throw FormatError("polynomial file: field 'coefficients' must hold " + std::to_string(N) + " numbers");
    std::vector<double> c(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (!jc[i].is_number()) throw FormatError("polynomial file: coefficients[" + std::to_string(i) + "] is not a number");
        c[i] = jc[i].get<double>();
    }
    return MultiPoly(m, n, c);
}

inline void write_polynomial(std::ostream& os, const MultiPoly& q) { os << polynomial_to_json(q).dump(2) << '\n'; }

inline MultiPoly read_polynomial(std::istream& is) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("polynomial file: ") + e.what());
    }
    return polynomial_from_json(j);
}

/// Header "m,n,count", then one row per node: coordinates and the leaf bit
/// string ("-" when the node has no tree provenance).
inline void write_nodes(std::ostream& os, const NodeSet& nodes, int n) {
    os << nodes.dimension() << ',' << n << ',' << nodes.size() << '\n';
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (double x : nodes[i]) os << format_real17(x) << ',';
        const auto& eps = nodes.provenance(i);
        os << (eps.empty() ? "-" : eps) << '\n';
    }
}

struct NodeFile {
    int m = 0;
    int n = 0;
    NodeSet nodes;
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
T parse_field(const std::string& text, std::size_t line, std::size_t field, const char* what) {
    T v{};
    const char* b = text.data();
    const char* e = b + text.size();
    while (b < e && *b == ' ') ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\r')) --e;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e)
        throw FormatError("node file line " + std::to_string(line) + ", field " + std::to_string(field) + ": expected " + what +
                          ", got '" + text + "'");
    return v;
}

} // namespace detail

inline NodeFile read_nodes(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("node file line 1: missing header 'm,n,count'");
    const auto head = detail::split_csv(line);
    if (head.size() != 3) throw FormatError("node file line 1: header must be 'm,n,count'");
    NodeFile f;
    f.m = detail::parse_field<int>(head[0], 1, 1, "integer m");
    f.n = detail::parse_field<int>(head[1], 1, 2, "integer n");
    const auto count = detail::parse_field<std::size_t>(head[2], 1, 3, "integer count");
    if (f.m < 1 || f.n < 0) throw FormatError("node file line 1: need m >= 1 and n >= 0");
    f.nodes = NodeSet(f.m);
    f.nodes.reserve(count);
    std::vector<double> p(static_cast<std::size_t>(f.m));
    std::size_t lineno = 1;
    while (f.nodes.size() < count && std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_csv(line);
        if (cells.size() != p.size() + 1)
            throw FormatError("node file line " + std::to_string(lineno) + ": expected " + std::to_string(p.size() + 1) +
                              " fields, got " + std::to_string(cells.size()));
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = detail::parse_field<double>(cells[k], lineno, k + 1, "a real number");
        std::string eps = cells.back();
        while (!eps.empty() && (eps.back() == '\r' || eps.back() == ' ')) eps.pop_back();
        if (eps == "-") eps.clear();
        if (eps.find_first_not_of("01") != std::string::npos)
            throw FormatError("node file line " + std::to_string(lineno) + ", field " + std::to_string(cells.size()) +
                              ": provenance must be a bit string or '-'");
        f.nodes.push_back(p, eps);
    }
    if (f.nodes.size() != count)
        throw FormatError("node file: header announces " + std::to_string(count) + " nodes, found " + std::to_string(f.nodes.size()));
    return f;
}

inline nlohmann::ordered_json report_to_json(const SolveReport& r) {
    nlohmann::ordered_json j;
    j["multiply_adds"] = r.multiply_adds;
    j["peak_reals_stored"] = r.peak_reals_stored;
    j["dense_matrices"] = r.dense_matrices;
    j["function_evaluations"] = r.function_evaluations;
    j["nodes"] = r.nodes;
    j["seconds"] = r.seconds;
    if (std::isnan(r.max_residual)) j["max_residual"] = nullptr;
    else j["max_residual"] = r.max_residual;
    j["max_abs_value"] = r.max_abs_value;
    return j;
}

/// Polynomial document plus the run report and an optional node file reference.
inline void write_result(std::ostream& os, const SolveResult& res, const std::string& node_file = {}) {
    auto j = polynomial_to_json(res.poly);
    j["report"] = report_to_json(res.report);
    if (node_file.empty()) j["node_file"] = nullptr;
    else j["node_file"] = node_file;
    os << j.dump(2) << '\n';
}

} // namespace pip
