#pragma once

// Generic node sets assembled from the leaves of the decomposition tree.

#include "pip/decomposition.hpp"
#include "pip/error.hpp"
#include "pip/geometry.hpp"
#include "pip/linearpip.hpp"
#include "pip/nodeset.hpp"
#include "pip/onedim.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pip {

struct NodeGenConfig {
    /// Orthonormal frame; the standard basis when unset.
    std::optional<Frame> frame;
    Rational lambda = 2;
    /// Spread of the Chebyshev nodes on 1-dimensional leaves.
    double kappa = 1.0;
    /// Step used by linear leaves along each active axis.
    Rational linear_offset = 1;
    /// Global translation of the finished node set; zero when empty.
    Vector mu;
    /// Map the node set's bounding box (in frame coordinates) onto [-1, 1]^m.
    bool rescale = false;
    /// Run the O(N^2) pairwise-distance check during assembly.
    bool check_distinct = true;
};

/// Frame-coordinate affine placement: x = sum_j (scale_j c_j + shift_j) xi_j + mu.
struct Layout {
    Frame frame;
    Vector scale;
    Vector shift;
    Vector mu;

    static Layout identity(Frame f) {
        const auto m = static_cast<std::size_t>(f.dimension());
        return {std::move(f), Vector(m, 1.0), Vector(m, 0.0), Vector(m, 0.0)};
    }

    Vector to_ambient(std::span<const double> c) const {
        Vector mapped(c.size());
        for (std::size_t j = 0; j < c.size(); ++j) mapped[j] = scale[j] * c[j] + shift[j];
        Vector x = frame.to_ambient(mapped);
        for (std::size_t j = 0; j < x.size(); ++j) x[j] += mu[j];
        return x;
    }
};

/// Geometry of one leaf sub-problem.
struct LeafSpec {
    /// Tree vertex, or -1 for the base cases solved without a tree.
    int vertex = -1;
    std::string eps;
    int dim = 0;
    int degree = 0;
    /// Frame coordinates of the leaf base before layout.
    Vector base_coords;
    bool on_line() const { return dim == 1 || degree == 0; }
    LineSpec line;
    FlatSpec flat;
};

struct Assembly {
    int m = 0;
    int n = 0;
    NodeSet nodes;
    /// Present when m >= 2 and n >= 2.
    std::optional<DecompTree> tree;
    /// Bit-1 hyperplanes, placed by `layout`.
    HyperplaneMap planes;
    Layout layout;
    /// Leaves in visiting order; leaf i owns nodes [leaf_begin[i], leaf_begin[i+1]).
    std::vector<LeafSpec> leaves;
    std::vector<std::size_t> leaf_begin;
};

/// Nodes of one leaf: sigma_1 = 1 gives sigma_2 + 1 Chebyshev nodes along
/// xi_1, sigma_2 = 1 gives b and b + h xi_a for the sigma_1 active axes.
inline NodeSet leaf_nodes(const LeafSpec& leaf) {
    if (leaf.degree == 0) {
        NodeSet one(static_cast<int>(leaf.line.base.size()));
        one.push_back(leaf.line.base, leaf.eps);
        return one;
    }
    if (leaf.dim == 1) return chebyshev_nodes(leaf.degree + 1, leaf.line, leaf.eps);
    if (leaf.degree == 1) return linear_generic_nodes(leaf.flat, leaf.eps);
    throw DimensionError("leaf_nodes: vertex (" + std::to_string(leaf.dim) + "," + std::to_string(leaf.degree) +
                         ") is not a leaf");
}

namespace detail {

inline void place_leaf(LeafSpec& leaf, const Layout& layout, double kappa, double h) {
    const int m = layout.frame.dimension();
    const Vector base = layout.to_ambient(leaf.base_coords);
    auto xi1 = layout.frame.axis(0);
    leaf.line = LineSpec{Vector(xi1.begin(), xi1.end()), base, kappa * layout.scale[0]};
    if (leaf.degree == 1 && leaf.dim >= 1) {
        leaf.flat.frame = layout.frame;
        leaf.flat.base = base;
        leaf.flat.active.clear();
        leaf.flat.offsets.clear();
        for (int a = 0; a < leaf.dim && a < m; ++a) {
            leaf.flat.active.push_back(a);
            leaf.flat.offsets.push_back(h * layout.scale[static_cast<std::size_t>(a)]);
        }
    }
}

/// Frame coordinates of the leaf's nodes before layout, for the bounding box.
inline void design_extent(const LeafSpec& leaf, double kappa, double h, Vector& lo, Vector& hi) {
    auto widen = [&](std::size_t j, double v) {
        lo[j] = std::min(lo[j], v);
        hi[j] = std::max(hi[j], v);
    };
    for (std::size_t j = 0; j < leaf.base_coords.size(); ++j) widen(j, leaf.base_coords[j]);
    if (leaf.degree == 0) return;
    if (leaf.dim == 1) {
        const double t = chebyshev_parameter(1, leaf.degree + 1, kappa);
        widen(0, leaf.base_coords[0] + t);
        widen(0, leaf.base_coords[0] - t);
    } else {
        for (int a = 0; a < leaf.dim; ++a) widen(static_cast<std::size_t>(a), leaf.base_coords[static_cast<std::size_t>(a)] + h);
    }
}

} // namespace detail

/// Verifies the branch separation of every node: nodes below a bit-1 edge lie
/// on that edge's hyperplane, nodes below the sibling bit-0 edge stay off it.
inline void check_separation(const Assembly& a, double tol = 1e-9) {
    if (!a.tree) return;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const auto p = a.nodes[i];
        const std::string& eps = a.nodes.provenance(i);
        for (std::size_t d = 0; d < eps.size(); ++d) {
            const auto& plane = a.planes.at(eps.substr(0, d) + '1');
            const double q = plane.value(p);
            double scale = 1.0;
            for (std::size_t j = 0; j < p.size(); ++j) scale = std::max(scale, std::abs(p[j] - plane.base[j]));
            if (eps[d] == '1' && std::abs(q) > tol * scale)
                throw ConfigurationError("node " + std::to_string(i) + " of leaf '" + eps + "' is off its hyperplane '" +
                                         plane.eps + "'");
            if (eps[d] == '0' && !(std::abs(q) > tol))
                throw ConfigurationError("node " + std::to_string(i) + " of leaf '" + eps + "' lies on hyperplane '" +
                                         plane.eps + "' (lambda/kappa collision)");
        }
    }
}

/// Generic node set for (m, n) together with the geometry that produced it.
inline Assembly assemble_generic(int m, int n, const NodeGenConfig& cfg = {}) {
    if (m < 1 || n < 0) throw DimensionError("assemble_generic requires m >= 1 and n >= 0");
    const std::size_t total = count_total(m, n);
    Frame frame = cfg.frame ? *cfg.frame : Frame::standard(m);
    if (frame.dimension() != m) throw DimensionError("assemble_generic: frame dimension mismatch");
    if (!cfg.mu.empty() && static_cast<int>(cfg.mu.size()) != m) throw DimensionError("assemble_generic: mu has the wrong dimension");
    if (!(cfg.kappa > 0.0)) throw ConfigurationError("assemble_generic: kappa must be positive");
    const double h = static_cast<double>(cfg.linear_offset);
    if (!(h > 0.0)) throw ConfigurationError("assemble_generic: linear offset must be positive");

    Assembly a;
    a.m = m;
    a.n = n;
    std::vector<std::vector<Rational>> bases;
    if (n == 0 || m == 1 || n == 1) {
        LeafSpec leaf;
        leaf.dim = m;
        leaf.degree = n;
        leaf.base_coords.assign(static_cast<std::size_t>(m), 0.0);
        a.leaves.push_back(std::move(leaf));
    } else {
        a.tree = DecompTree::build(m, n);
        bases = vertex_base_coords(*a.tree, cfg.lambda);
        if (cfg.lambda <= 1) throw ConfigurationError("assemble_generic: lambda must exceed 1");
        validate_hyperplanes(*a.tree, bases, cfg.lambda, cfg.linear_offset);
        for (int v : a.tree->leaves()) {
            const auto& tv = (*a.tree)[v];
            LeafSpec leaf;
            leaf.vertex = v;
            leaf.eps = tv.eps;
            leaf.dim = tv.dim;
            leaf.degree = tv.degree;
            for (const auto& r : bases[static_cast<std::size_t>(v)]) leaf.base_coords.push_back(static_cast<double>(r));
            a.leaves.push_back(std::move(leaf));
        }
    }

    a.layout = Layout::identity(frame);
    if (!cfg.mu.empty()) a.layout.mu = cfg.mu;
    if (cfg.rescale) {
        Vector lo(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
        Vector hi(static_cast<std::size_t>(m), -std::numeric_limits<double>::infinity());
        for (const auto& leaf : a.leaves) detail::design_extent(leaf, cfg.kappa, h, lo, hi);
        for (std::size_t j = 0; j < lo.size(); ++j) {
            const double width = hi[j] - lo[j];
            if (width > 0.0) {
                a.layout.scale[j] = 2.0 / width;
                a.layout.shift[j] = -(hi[j] + lo[j]) / width;
            }
        }
    }

    if (a.tree) {
        for (std::size_t v = 1; v < a.tree->size(); ++v) {
            const auto& tv = (*a.tree)[static_cast<int>(v)];
            if (!tv.last_bit_is_one()) continue;
            HyperplaneSpec plane;
            plane.eps = tv.eps;
            plane.axis = tv.dim;
            auto xi = frame.axis(tv.dim);
            plane.normal.assign(xi.begin(), xi.end());
            for (const auto& r : bases[v]) plane.base_coords.push_back(static_cast<double>(r));
            plane.base = a.layout.to_ambient(plane.base_coords);
            plane.alpha_value = alpha_exact(tv.eps, cfg.lambda);
            a.planes.emplace(tv.eps, std::move(plane));
        }
    }

    a.nodes = NodeSet(m);
    a.nodes.reserve(total);
    a.leaf_begin.push_back(0);
    for (auto& leaf : a.leaves) {
        detail::place_leaf(leaf, a.layout, cfg.kappa, h);
        a.nodes.append(leaf_nodes(leaf));
        a.leaf_begin.push_back(a.nodes.size());
    }
    if (a.nodes.size() != total)
        throw std::logic_error("assemble_generic: produced " + std::to_string(a.nodes.size()) + " nodes, expected " +
                               std::to_string(total));
    if (cfg.check_distinct && a.nodes.min_pairwise_distance() <= 1e-12)
        throw ConfigurationError("assemble_generic: two nodes coincide (lambda/kappa collision)");
    check_separation(a);
    return a;
}

} // namespace pip
