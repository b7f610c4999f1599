#pragma once

// Recursive interpolation solver over the decomposition tree.
//
// For a split vertex v with bit-1 child w (on hyperplane H_w) and bit-0
// child u, the sub-solutions combine as Q_v = Q_w + Q_{H_w} * Q_u, where Q_w
// interpolates the corrected data of v on H_w and Q_u interpolates
// (f_v - Q_w) / Q_{H_w} on the remaining nodes. Corrections are never
// expanded into rational functions; they are evaluated node by node.

#include "pip/decomposition.hpp"
#include "pip/error.hpp"
#include "pip/instrument.hpp"
#include "pip/linearpip.hpp"
#include "pip/nodegen.hpp"
#include "pip/onedim.hpp"
#include "pip/polynomial.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <type_traits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pip {

enum class CorrectionMode {
    /// Carry Q^_v and the divisor factors down the tree (one polynomial per level).
    accumulated,
    /// Peel one level at a time: f_u = (f_v - Q_w) / Q_{H_w}.
    nested,
};

struct SolverConfig : NodeGenConfig {
    CorrectionMode mode = CorrectionMode::accumulated;
    /// Evaluate the result at every node afterwards (outside the op count).
    bool verify = true;
};

struct SolveReport {
    std::int64_t multiply_adds = 0;
    std::int64_t peak_reals_stored = 0;
    std::int64_t dense_matrices = 0;
    std::int64_t function_evaluations = 0;
    std::size_t nodes = 0;
    double seconds = 0.0;
    /// max |Q(p) - f(p)| over the nodes; NaN when verification is off.
    double max_residual = std::nan("");
    double max_abs_value = 0.0;
};

struct SolveResult {
    MultiPoly poly;
    NodeSet nodes;
    SolveReport report;
};

/// Correction state of one vertex: f_v = (f - correction) / prod(divisors).
struct SubProblemFrame {
    int vertex = 0;
    MultiPoly correction;
    std::vector<const HyperplaneSpec*> divisors;

    /// Product of the divisor factors as a polynomial.
    MultiPoly divisor_polynomial(int m) const {
        MultiPoly out = MultiPoly::constant(m, 1.0);
        for (const auto* h : divisors) out = mul_linear(out, h->polynomial());
        return out;
    }
};

namespace detail {

inline double checked_factor(const HyperplaneSpec& h, std::span<const double> p) {
    constexpr double kDivisionTol = 1e-12;
    const double v = h.value(p);
    double scale = 1.0;
    for (std::size_t j = 0; j < p.size(); ++j) scale = std::max(scale, std::abs(p[j] - h.base[j]));
    if (!(std::abs(v) > kDivisionTol * scale)) {
        std::string where = "(";
        for (std::size_t j = 0; j < p.size(); ++j) where += (j ? "," : "") + std::to_string(p[j]);
        throw IllPosedGeometryError("node " + where + ") lies on divisor hyperplane '" + h.eps +
                                    "'; lambda/kappa produce colliding geometry");
    }
    return v;
}

} // namespace detail

/// (f(p) - correction(p)) / prod_h Q_h(p).
template <class F>
double corrected_value(F&& f, const SubProblemFrame& frame, std::span<const double> p) {
    double den = 1.0;
    for (const auto* h : frame.divisors) den *= detail::checked_factor(*h, p);
    const double num = f(p) - (frame.correction.size() ? evaluate(frame.correction, p) : 0.0);
    detail::count_madds(static_cast<std::int64_t>(frame.divisors.size() * p.size()));
    return num / den;
}

namespace detail {

template <class F>
class TreeSolver {
public:
    TreeSolver(F& f, const Assembly& a) : f_(f), a_(a), tree_(*a.tree) {
        leaf_of_.assign(tree_.size(), -1);
        for (std::size_t i = 0; i < a.leaves.size(); ++i) leaf_of_[static_cast<std::size_t>(a.leaves[i].vertex)] = static_cast<int>(i);
        for (const auto& [eps, plane] : a.planes) plane_poly_.emplace(eps, plane.polynomial());
    }

    MultiPoly run(CorrectionMode mode) {
        if (mode == CorrectionMode::accumulated) {
            SubProblemFrame root{tree_.root(), MultiPoly(a_.m, 0), {}};
            return accumulated(std::move(root));
        }
        chain_.clear();
        return nested(tree_.root());
    }

private:
    template <class G>
    MultiPoly solve_leaf(int v, G&& g) {
        const auto& leaf = a_.leaves[static_cast<std::size_t>(leaf_of_[static_cast<std::size_t>(v)])];
        if (leaf.dim == 1) return solve_on_line(g, leaf.degree, leaf.line, leaf.eps).second;
        return solve_linear(g, leaf.flat, leaf.eps).second;
    }

    MultiPoly accumulated(SubProblemFrame fr) {
        const auto& tv = tree_[fr.vertex];
        if (tv.is_leaf()) {
            return solve_leaf(fr.vertex, [&](std::span<const double> p) { return corrected_value(f_, fr, p); });
        }
        const auto& wv = tree_[tv.child1];
        const HyperplaneSpec& hw = a_.planes.at(wv.eps);
        const MultiPoly& qh = plane_poly_.at(wv.eps);

        MultiPoly qw = accumulated(SubProblemFrame{tv.child1, fr.correction, fr.divisors});

        MultiPoly lifted = qw;
        for (const auto* h : fr.divisors) lifted = mul_linear(lifted, plane_poly_.at(h->eps));
        SubProblemFrame child{tv.child0, add(fr.correction, lifted), std::move(fr.divisors)};
        fr.correction = MultiPoly();
        lifted = MultiPoly();
        child.divisors.push_back(&hw);

        MultiPoly qu = accumulated(std::move(child));
        return add(qw, mul_linear(qu, qh));
    }

    double nested_value(std::span<const double> p) const {
        double v = f_(p);
        for (const auto& [qw, h] : chain_) v = (v - evaluate(*qw, p)) / checked_factor(*h, p);
        return v;
    }

    MultiPoly nested(int v) {
        const auto& tv = tree_[v];
        if (tv.is_leaf()) return solve_leaf(v, [&](std::span<const double> p) { return nested_value(p); });
        const auto& wv = tree_[tv.child1];
        const HyperplaneSpec& hw = a_.planes.at(wv.eps);
        MultiPoly qw = nested(tv.child1);
        chain_.emplace_back(&qw, &hw);
        MultiPoly qu = nested(tv.child0);
        chain_.pop_back();
        return add(qw, mul_linear(qu, plane_poly_.at(wv.eps)));
    }

    F& f_;
    const Assembly& a_;
    const DecompTree& tree_;
    std::vector<int> leaf_of_;
    std::map<std::string, MultiPoly> plane_poly_;
    std::vector<std::pair<const MultiPoly*, const HyperplaneSpec*>> chain_;
};

} // namespace detail

/// Interpolant of f on an already assembled node set.
template <class F>
MultiPoly solve_on_assembly(F&& f, const Assembly& a, CorrectionMode mode = CorrectionMode::accumulated) {
    if (a.tree) {
        detail::TreeSolver<std::remove_reference_t<F>> solver(f, a);
        return solver.run(mode);
    }
    const auto& leaf = a.leaves.front();
    if (leaf.degree == 0) return MultiPoly::constant(a.m, f(a.nodes[0]));
    if (leaf.dim == 1) return solve_on_line(f, leaf.degree, leaf.line).second;
    return solve_linear(f, leaf.flat).second;
}

/// Generic nodes for (m, n) plus the unique degree-<=n interpolant of f on them.
template <class F>
SolveResult solve(F&& f, int m, int n, const SolverConfig& cfg = {}) {
    std::int64_t evaluations = 0;
    auto counted = [&](std::span<const double> p) {
        ++evaluations;
        return static_cast<double>(f(p));
    };
    SolveResult out;
    const auto t0 = std::chrono::steady_clock::now();
    {
        ScopedTally tally;
        Assembly a = assemble_generic(m, n, cfg);
        out.poly = solve_on_assembly(counted, a, cfg.mode);
        out.nodes = std::move(a.nodes);
        const auto r = tally.report();
        out.report.multiply_adds = r.multiply_adds;
        out.report.peak_reals_stored = r.peak_reals_stored;
        out.report.dense_matrices = r.dense_matrices;
    }
    out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.report.function_evaluations = evaluations;
    out.report.nodes = out.nodes.size();
    if (out.poly.degree_bound() > n) out.poly = out.poly.with_degree_bound(n);
    if (out.poly.degree_bound() < n) out.poly = out.poly.with_degree_bound(n);
    if (cfg.verify) {
        double worst = 0.0, big = 0.0;
        for (std::size_t i = 0; i < out.nodes.size(); ++i) {
            const double fv = f(out.nodes[i]);
            big = std::max(big, std::abs(fv));
            worst = std::max(worst, std::abs(evaluate(out.poly, out.nodes[i]) - fv));
        }
        out.report.max_residual = worst;
        out.report.max_abs_value = big;
    }
    return out;
}

} // namespace pip
