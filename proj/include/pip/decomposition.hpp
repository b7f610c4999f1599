#pragma once

// The sub-problem tree and its splitting hyperplanes.
//
// Vertex labels sigma = (dimension, degree). A vertex with dimension > 1 and
// degree > 1 has two children: bit 0 keeps the dimension and lowers the
// degree, bit 1 lowers the dimension and keeps the degree. Each bit-1 vertex
// owns a hyperplane of its parent's flat; bit-0 vertices share their
// parent's flat.

#include "pip/error.hpp"
#include "pip/geometry.hpp"
#include "pip/monomials.hpp"
#include "pip/polynomial.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace pip {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "2", "3/2" or a decimal such as "1.25" into an exact rational.
inline Rational parse_rational(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash != std::string::npos)
            return Rational(boost::multiprecision::cpp_int(text.substr(0, slash)),
                            boost::multiprecision::cpp_int(text.substr(slash + 1)));
        const auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(boost::multiprecision::cpp_int(text));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        boost::multiprecision::cpp_int den = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
        return Rational(boost::multiprecision::cpp_int(digits), den);
    } catch (const std::exception&) {
        throw FormatError("cannot parse rational number '" + text + "'");
    }
}

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

struct TreeVertex {
    int dim = 0;
    int degree = 0;
    /// Bit string of the path from the root, '0'/'1' per edge.
    std::string eps;
    int parent = -1;
    int child0 = -1;
    int child1 = -1;
    int depth = 0;

    bool is_leaf() const { return child0 < 0; }
    bool last_bit_is_one() const { return !eps.empty() && eps.back() == '1'; }
};

class DecompTree {
public:
    DecompTree() = default;

    /// Full tree for m, n >= 2.
    static DecompTree build(int m, int n) {
        if (m < 2 || n < 2) throw DimensionError("build_tree requires m >= 2 and n >= 2");
        const std::size_t leaves = count_total(m - 1, n - 1);
        if (leaves > MonomialOrder::kMaxTerms) throw SizingError("decomposition tree is too large");
        DecompTree t;
        t.m_ = m;
        t.n_ = n;
        t.vertices_.reserve(2 * leaves - 1);
        t.vertices_.push_back(TreeVertex{m, n, "", -1, -1, -1, 0});
        std::vector<int> stack{0};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            const TreeVertex cur = t.vertices_[static_cast<std::size_t>(v)];
            if (cur.dim <= 1 || cur.degree <= 1) continue;
            const int c0 = static_cast<int>(t.vertices_.size());
            t.vertices_.push_back(TreeVertex{cur.dim, cur.degree - 1, cur.eps + '0', v, -1, -1, cur.depth + 1});
            const int c1 = c0 + 1;
            t.vertices_.push_back(TreeVertex{cur.dim - 1, cur.degree, cur.eps + '1', v, -1, -1, cur.depth + 1});
            t.vertices_[static_cast<std::size_t>(v)].child0 = c0;
            t.vertices_[static_cast<std::size_t>(v)].child1 = c1;
            stack.push_back(c0);
            stack.push_back(c1);
        }
        for (std::size_t i = 0; i < t.vertices_.size(); ++i) t.index_[t.vertices_[i].eps] = static_cast<int>(i);
        return t;
    }

    int dimension() const { return m_; }
    int degree() const { return n_; }
    std::size_t size() const { return vertices_.size(); }
    const TreeVertex& operator[](int v) const { return vertices_[static_cast<std::size_t>(v)]; }
    const std::vector<TreeVertex>& vertices() const { return vertices_; }
    int root() const { return 0; }

    /// Vertex with the given bit string, or -1.
    int find(const std::string& eps) const {
        auto it = index_.find(eps);
        return it == index_.end() ? -1 : it->second;
    }

    /// Number of levels, i.e. the largest vertex depth plus one (the root
    /// alone has depth 1). Vertex depths themselves count edges from the root.
    int depth() const {
        int d = 0;
        for (const auto& v : vertices_) d = std::max(d, v.depth);
        return d + 1;
    }

    /// Leaves in visiting order: depth first, bit-1 branch before bit-0.
    std::vector<int> leaves() const {
        std::vector<int> out;
        std::vector<int> stack{0};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            const auto& cur = (*this)[v];
            if (cur.is_leaf()) {
                out.push_back(v);
                continue;
            }
            stack.push_back(cur.child0);
            stack.push_back(cur.child1);
        }
        return out;
    }

    std::size_t leaf_count() const {
        return static_cast<std::size_t>(std::count_if(vertices_.begin(), vertices_.end(), [](const TreeVertex& v) { return v.is_leaf(); }));
    }

private:
    int m_ = 0;
    int n_ = 0;
    std::vector<TreeVertex> vertices_;
    std::map<std::string, int> index_;
};

inline DecompTree build_tree(int m, int n) { return DecompTree::build(m, n); }

/// Exact sum_{i=1}^{|eps|} (-1)^(i-1) eps_i lambda^i.
inline Rational alpha_exact(const std::string& eps, const Rational& lambda) {
    Rational sum = 0;
    Rational power = 1;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        power *= lambda;
        if (eps[i] == '1') {
            if (i % 2 == 0) sum += power;
            else sum -= power;
        } else if (eps[i] != '0') {
            throw FormatError("alpha: bit string may only contain 0 and 1");
        }
    }
    return sum;
}

inline double alpha(const std::string& eps, const Rational& lambda) { return static_cast<double>(alpha_exact(eps, lambda)); }

/// Q_H(x) = <normal, x - base> for the bit-1 vertex `eps`.
struct HyperplaneSpec {
    std::string eps;
    /// 0-based frame axis used as normal.
    int axis = 0;
    Vector normal;
    Vector base;
    /// Frame coordinates of `base`.
    Vector base_coords;
    Rational alpha_value;

    double value(std::span<const double> x) const {
        double s = 0.0;
        for (std::size_t j = 0; j < normal.size(); ++j) s += normal[j] * (x[j] - base[j]);
        return s;
    }

    MultiPoly polynomial() const { return MultiPoly::linear(-dot(normal, base), normal); }
};

using HyperplaneMap = std::map<std::string, HyperplaneSpec>;

/// Frame coordinates of every vertex's base point: bit-1 vertices shift
/// their parent's base by alpha(eps) along the dropped axis, bit-0 vertices
/// inherit it.
inline std::vector<std::vector<Rational>> vertex_base_coords(const DecompTree& tree, const Rational& lambda) {
    const int m = tree.dimension();
    std::vector<std::vector<Rational>> bases(tree.size(), std::vector<Rational>(static_cast<std::size_t>(m), Rational(0)));
    // Parents precede children in construction order.
    for (std::size_t v = 1; v < tree.size(); ++v) {
        const auto& cur = tree[static_cast<int>(v)];
        bases[v] = bases[static_cast<std::size_t>(cur.parent)];
        if (cur.last_bit_is_one()) bases[v][static_cast<std::size_t>(cur.dim)] += alpha_exact(cur.eps, lambda);
    }
    return bases;
}

namespace detail {

inline bool same_fixed_coords(const std::vector<Rational>& a, const std::vector<Rational>& b, int from) {
    for (std::size_t j = static_cast<std::size_t>(from); j < a.size(); ++j)
        if (a[j] != b[j]) return false;
    return true;
}

} // namespace detail

/// Checks that flats of equal dimension are pairwise disjoint and that no
/// split flat contains the origin or a unit-offset frame point
/// `linear_offset * xi_i`. Throws ConfigurationError otherwise.
inline void validate_hyperplanes(const DecompTree& tree, const std::vector<std::vector<Rational>>& bases,
                                 const Rational& lambda, const Rational& linear_offset = 1) {
    const int m = tree.dimension();
    std::map<int, std::vector<int>> by_dim;
    for (std::size_t v = 0; v < tree.size(); ++v)
        if (v == 0 || tree[static_cast<int>(v)].last_bit_is_one()) by_dim[tree[static_cast<int>(v)].dim].push_back(static_cast<int>(v));
    const std::string hint = " (lambda = " + to_string(lambda) + "; try a larger lambda)";
    for (auto& [k, list] : by_dim) {
        auto key = [&](int v) {
            return std::vector<Rational>(bases[static_cast<std::size_t>(v)].begin() + k, bases[static_cast<std::size_t>(v)].end());
        };
        std::sort(list.begin(), list.end(), [&](int a, int b) { return key(a) < key(b); });
        for (std::size_t i = 1; i < list.size(); ++i)
            if (detail::same_fixed_coords(bases[static_cast<std::size_t>(list[i - 1])], bases[static_cast<std::size_t>(list[i])], k))
                throw ConfigurationError("split flats '" + tree[list[i - 1]].eps + "' and '" + tree[list[i]].eps +
                                         "' of dimension " + std::to_string(k) + " coincide" + hint);
        for (int v : list) {
            if (v == 0) continue;
            std::vector<Rational> probe(static_cast<std::size_t>(m), Rational(0));
            for (int i = -1; i < m; ++i) {
                if (i >= 0) probe[static_cast<std::size_t>(i)] = linear_offset;
                if (detail::same_fixed_coords(probe, bases[static_cast<std::size_t>(v)], k))
                    throw ConfigurationError("split flat '" + tree[v].eps + "' contains a frame point" + hint);
                if (i >= 0) probe[static_cast<std::size_t>(i)] = 0;
            }
        }
    }
}

/// Hyperplane polynomial for every bit-1 vertex: normal xi_{sigma_1(v)+1},
/// base b_parent + alpha(eps) * normal.
inline HyperplaneMap assign_hyperplanes(const DecompTree& tree, const Frame& frame, const Rational& lambda,
                                        const Rational& linear_offset = 1) {
    if (frame.dimension() != tree.dimension()) throw DimensionError("assign_hyperplanes: frame dimension mismatch");
    if (lambda <= 1) throw ConfigurationError("assign_hyperplanes: lambda must exceed 1");
    const auto bases = vertex_base_coords(tree, lambda);
    validate_hyperplanes(tree, bases, lambda, linear_offset);
    HyperplaneMap out;
    for (std::size_t v = 1; v < tree.size(); ++v) {
        const auto& cur = tree[static_cast<int>(v)];
        if (!cur.last_bit_is_one()) continue;
        HyperplaneSpec h;
        h.eps = cur.eps;
        h.axis = cur.dim;
        auto xi = frame.axis(cur.dim);
        h.normal.assign(xi.begin(), xi.end());
        h.base_coords.resize(bases[v].size());
        for (std::size_t j = 0; j < bases[v].size(); ++j) h.base_coords[j] = static_cast<double>(bases[v][j]);
        h.base = frame.to_ambient(h.base_coords);
        h.alpha_value = alpha_exact(cur.eps, lambda);
        out.emplace(cur.eps, std::move(h));
    }
    return out;
}

/// One line per vertex: bit string, sigma, depth, normal axis, base, alpha.
inline std::string dump_tree(const DecompTree& tree, const HyperplaneMap& planes) {
    std::ostringstream os;
    for (const auto& v : tree.vertices()) {
        os << "eps=" << (v.eps.empty() ? "-" : v.eps) << " sigma=(" << v.dim << "," << v.degree << ") depth=" << v.depth;
        auto it = planes.find(v.eps);
        if (it != planes.end()) {
            os << " nu=xi" << it->second.axis + 1 << " b=(";
            char buf[40];
            for (std::size_t j = 0; j < it->second.base.size(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", it->second.base[j]);
                os << (j ? "," : "") << buf;
            }
            os << ") alpha=" << it->second.alpha_value;
        } else {
            os << (v.eps.empty() ? " root" : " inherits-parent-flat");
        }
        os << (v.is_leaf() ? " leaf" : "") << '\n';
    }
    return os.str();
}

} // namespace pip
