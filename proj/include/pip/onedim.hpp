#pragma once

// Degree-n interpolation along one line of R^m.

#include "pip/error.hpp"
#include "pip/geometry.hpp"
#include "pip/instrument.hpp"
#include "pip/nodeset.hpp"
#include "pip/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pip {

/// Line {b + t * xi} with node spread kappa.
struct LineSpec {
    Vector direction;
    Vector base;
    double kappa = 1.0;

    void validate() const {
        if (direction.empty() || direction.size() != base.size())
            throw DimensionError("LineSpec: direction and base must share a nonzero dimension");
        if (std::abs(norm2(direction) - 1.0) > 1e-12) throw DegenerateInputError("LineSpec: direction is not a unit vector");
        if (!(kappa > 0.0)) throw DegenerateInputError("LineSpec: kappa must be positive");
    }
    int dimension() const { return static_cast<int>(direction.size()); }
};

/// Line parameter of the k-th of `count` Chebyshev nodes, k = 1..count.
inline double chebyshev_parameter(int k, int count, double kappa) {
    return kappa * std::cos((2.0 * k - 1.0) / (2.0 * count) * std::numbers::pi);
}

/// kappa * cos((2k-1) pi / (2 count)) * xi + b for k = 1..count.
inline NodeSet chebyshev_nodes(int count, const LineSpec& line, const std::string& tag = {}) {
    if (count < 1) throw DimensionError("chebyshev_nodes: count must be >= 1");
    line.validate();
    NodeSet out(line.dimension());
    out.reserve(static_cast<std::size_t>(count));
    Vector p(line.base.size());
    for (int k = 1; k <= count; ++k) {
        const double t = chebyshev_parameter(k, count, line.kappa);
        for (std::size_t j = 0; j < p.size(); ++j) p[j] = line.base[j] + t * line.direction[j];
        out.push_back(p, tag);
    }
    return out;
}

/// Monomial coefficients of the degree <= k interpolant through (nodes[j], values[j]).
/// Newton divided differences, then conversion to the monomial basis; O(k^2).
inline std::vector<double> solve_univariate(std::span<const double> nodes, std::span<const double> values) {
    if (nodes.empty() || nodes.size() != values.size())
        throw DimensionError("solve_univariate: need matching, non-empty node and value lists");
    const std::size_t cnt = nodes.size();
    {
        std::vector<double> sorted(nodes.begin(), nodes.end());
        std::sort(sorted.begin(), sorted.end());
        const double span = sorted.back() - sorted.front();
        for (std::size_t i = 1; i < cnt; ++i)
            if (!(sorted[i] - sorted[i - 1] > 1e-14 * span))
                throw DegenerateInputError("solve_univariate: duplicate nodes near " + std::to_string(sorted[i]));
    }
    std::vector<double> d(values.begin(), values.end());
    for (std::size_t level = 1; level < cnt; ++level)
        for (std::size_t i = cnt - 1; i >= level; --i) d[i] = (d[i] - d[i - 1]) / (nodes[i] - nodes[i - level]);
    // Nested multiplication: c <- c * (t - t_i) + d_i, from the innermost term out.
    std::vector<double> c(cnt, 0.0);
    c[0] = d[cnt - 1];
    for (std::size_t i = cnt - 1; i-- > 0;) {
        const std::size_t len = cnt - 1 - i;  // current degree + 1 of c is len
        for (std::size_t j = len; j > 0; --j) c[j] = c[j - 1] - nodes[i] * c[j];
        c[0] = -nodes[i] * c[0] + d[i];
    }
    detail::count_madds(static_cast<std::int64_t>(cnt * cnt));
    return c;
}

/// Interpolate f on n+1 Chebyshev nodes of the line and lift the result to m variables.
template <class F>
std::pair<NodeSet, MultiPoly> solve_on_line(F&& f, int n, const LineSpec& line, const std::string& tag = {}) {
    if (n < 0) throw DimensionError("solve_on_line: degree must be >= 0");
    NodeSet nodes = chebyshev_nodes(n + 1, line, tag);
    std::vector<double> t(static_cast<std::size_t>(n) + 1), v(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        t[static_cast<std::size_t>(k)] = chebyshev_parameter(k + 1, n + 1, line.kappa);
        v[static_cast<std::size_t>(k)] = f(nodes[static_cast<std::size_t>(k)]);
    }
    const auto coeffs = solve_univariate(t, v);
    return {std::move(nodes), embed_univariate(coeffs, line.direction, line.base)};
}

} // namespace pip
