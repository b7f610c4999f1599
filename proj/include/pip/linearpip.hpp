#pragma once

// Degree-1 interpolation on a flat b + span{xi_a : a in active}.

#include "pip/error.hpp"
#include "pip/geometry.hpp"
#include "pip/instrument.hpp"
#include "pip/nodeset.hpp"
#include "pip/polynomial.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pip {

struct FlatSpec {
    Frame frame;
    /// 0-based frame axes spanning the flat.
    std::vector<int> active;
    Vector base;
    /// Step along each active axis for the generic nodes; empty means all 1.
    Vector offsets;

    int dimension() const { return static_cast<int>(active.size()); }

    double offset(std::size_t a) const { return offsets.empty() ? 1.0 : offsets[a]; }

    void validate() const {
        const int m = frame.dimension();
        if (m < 1 || static_cast<int>(base.size()) != m) throw DimensionError("FlatSpec: base/frame dimension mismatch");
        if (active.empty() || static_cast<int>(active.size()) > m) throw DimensionError("FlatSpec: need 1 <= k <= m active axes");
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        for (int a : active) {
            if (a < 0 || a >= m || seen[static_cast<std::size_t>(a)]) throw DimensionError("FlatSpec: invalid active axis");
            seen[static_cast<std::size_t>(a)] = true;
        }
        if (!offsets.empty() && offsets.size() != active.size()) throw DimensionError("FlatSpec: one offset per active axis");
        for (std::size_t a = 0; a < active.size(); ++a)
            if (!(offset(a) != 0.0)) throw DegenerateInputError("FlatSpec: zero offset");
    }
};

/// b, then b + h_a * xi_a for each active axis a.
inline NodeSet linear_generic_nodes(const FlatSpec& flat, const std::string& tag = {}) {
    flat.validate();
    const int m = flat.frame.dimension();
    NodeSet out(m);
    out.reserve(flat.active.size() + 1);
    out.push_back(flat.base, tag);
    Vector p(static_cast<std::size_t>(m));
    for (std::size_t a = 0; a < flat.active.size(); ++a) {
        auto xi = flat.frame.axis(flat.active[a]);
        const double h = flat.offset(a);
        for (int j = 0; j < m; ++j) p[static_cast<std::size_t>(j)] = flat.base[static_cast<std::size_t>(j)] + h * xi[static_cast<std::size_t>(j)];
        out.push_back(p, tag);
    }
    return out;
}

/// Unique degree-1 interpolant of f on the flat's generic nodes:
/// Q(x) = c0 + sum_a (c_a / h_a) <xi_a, x - b>, c0 = f(b), c_a = f(b + h_a xi_a) - f(b).
template <class F>
std::pair<NodeSet, MultiPoly> solve_linear(F&& f, const FlatSpec& flat, const std::string& tag = {}) {
    NodeSet nodes = linear_generic_nodes(flat, tag);
    const int m = flat.frame.dimension();
    const double c0 = f(nodes[0]);
    Vector grad(static_cast<std::size_t>(m), 0.0);
    for (std::size_t a = 0; a < flat.active.size(); ++a) {
        const double slope = (f(nodes[a + 1]) - c0) / flat.offset(a);
        auto xi = flat.frame.axis(flat.active[a]);
        for (int j = 0; j < m; ++j) grad[static_cast<std::size_t>(j)] += slope * xi[static_cast<std::size_t>(j)];
    }
    detail::count_madds(static_cast<std::int64_t>(m) * static_cast<std::int64_t>(flat.active.size() + 1));
    return {std::move(nodes), MultiPoly::linear(c0 - dot(grad, flat.base), grad)};
}

} // namespace pip
