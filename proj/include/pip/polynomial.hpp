#pragma once

// Dense multivariate polynomials over the canonical monomial order.

#include "pip/error.hpp"
#include "pip/geometry.hpp"
#include "pip/instrument.hpp"
#include "pip/monomials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pip {

/// Polynomial in m variables with degree <= n, one coefficient per monomial
/// of the canonical order (length N(m, n)).
class MultiPoly {
public:
    MultiPoly() = default;

    /// Zero polynomial.
    MultiPoly(int m, int n) : m_(m), n_(n) {
        if (m < 1 || n < 0) throw DimensionError("MultiPoly requires m >= 1 and n >= 0");
        order_ = MonomialOrder::shared(m, n);
        coeffs_.assign(count_total(m, n), 0.0);
    }

    MultiPoly(int m, int n, std::span<const double> coeffs) : MultiPoly(m, n) {
        if (coeffs.size() != coeffs_.size())
            throw DimensionError("MultiPoly: expected " + std::to_string(coeffs_.size()) + " coefficients, got " +
                                 std::to_string(coeffs.size()));
        std::copy(coeffs.begin(), coeffs.end(), coeffs_.begin());
    }

    static MultiPoly constant(int m, double c) {
        MultiPoly p(m, 0);
        p.coeffs_[0] = c;
        return p;
    }

    /// c0 + <grad, x>.
    static MultiPoly linear(double c0, std::span<const double> grad) {
        MultiPoly p(static_cast<int>(grad.size()), 1);
        p.coeffs_[0] = c0;
        std::copy(grad.begin(), grad.end(), p.coeffs_.begin() + 1);
        return p;
    }

    /// c * x^idx with degree bound max(order(idx), n).
    static MultiPoly monomial(const MultiIndex& idx, double c = 1.0, int n = -1) {
        MultiPoly p(idx.dimension(), std::max(idx.order(), n));
        p.coeffs_[p.order_->position_of(idx)] = c;
        return p;
    }

    int dimension() const { return m_; }
    int degree_bound() const { return n_; }
    std::size_t size() const { return coeffs_.size(); }
    const MonomialOrder& order() const { return *order_; }
    std::shared_ptr<const MonomialOrder> shared_order() const { return order_; }

    std::span<const double> coefficients() const { return coeffs_; }
    std::span<double> coefficients() { return coeffs_; }
    double operator[](std::size_t i) const { return coeffs_[i]; }
    double& operator[](std::size_t i) { return coeffs_[i]; }

    double coefficient(const MultiIndex& idx) const {
        if (idx.dimension() != m_) throw DimensionError("coefficient: multi-index has wrong length");
        if (idx.order() > n_) return 0.0;
        return coeffs_[order_->position_of(idx)];
    }

    /// Largest k whose degree-k block has a coefficient with |c| > tol; -1 for the zero polynomial.
    int effective_degree(double tol = 0.0) const {
        for (int k = n_; k >= 0; --k)
            for (std::size_t i = order_->block_begin(k); i < order_->prefix(k); ++i)
                if (std::abs(coeffs_[i]) > tol) return k;
        return -1;
    }

    /// Same polynomial with another degree bound. Shrinking requires the dropped blocks to be zero.
    MultiPoly with_degree_bound(int n) const {
        MultiPoly out(m_, n);
        const std::size_t keep = std::min(out.size(), size());
        for (std::size_t i = keep; i < size(); ++i)
            if (coeffs_[i] != 0.0) throw DimensionError("with_degree_bound: nonzero terms above the new bound");
        std::copy_n(coeffs_.begin(), keep, out.coeffs_.begin());
        return out;
    }

    MultiPoly& operator*=(double s) {
        for (auto& c : coeffs_) c *= s;
        detail::count_madds(static_cast<std::int64_t>(coeffs_.size()));
        return *this;
    }

    /// this += s * other; the bound of `other` must not exceed ours.
    MultiPoly& axpy(double s, const MultiPoly& other) {
        if (other.m_ != m_) throw DimensionError("axpy: dimension mismatch");
        if (other.n_ > n_) throw DimensionError("axpy: operand degree exceeds the target bound");
        for (std::size_t i = 0; i < other.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
        detail::count_madds(static_cast<std::int64_t>(other.size()));
        return *this;
    }

    std::string str(int precision = 6) const;

private:
    int m_ = 0;
    int n_ = 0;
    std::shared_ptr<const MonomialOrder> order_;
    RealVector coeffs_;
};

namespace detail {
inline std::vector<double>& scratch() {
    thread_local std::vector<double> buf;
    return buf;
}
} // namespace detail

/// Sum of c_i * P_{I_i}(x).
inline double evaluate(const MultiPoly& q, std::span<const double> x) {
    if (static_cast<int>(x.size()) != q.dimension())
        throw DimensionError("evaluate: point has dimension " + std::to_string(x.size()) + ", polynomial has " +
                             std::to_string(q.dimension()));
    auto& buf = detail::scratch();
    buf.resize(q.size());
    q.order().monomials(x, buf);
    double s = 0.0;
    auto c = q.coefficients();
    for (std::size_t i = 0; i < buf.size(); ++i) s += c[i] * buf[i];
    detail::count_madds(2 * static_cast<std::int64_t>(q.size()));
    return s;
}

inline MultiPoly add(const MultiPoly& a, const MultiPoly& b) {
    if (a.dimension() != b.dimension()) throw DimensionError("add: dimension mismatch");
    const MultiPoly& big = a.degree_bound() >= b.degree_bound() ? a : b;
    const MultiPoly& small = &big == &a ? b : a;
    MultiPoly out = big;
    out.axpy(1.0, small);
    return out;
}

inline MultiPoly subtract(const MultiPoly& a, const MultiPoly& b) {
    if (a.dimension() != b.dimension()) throw DimensionError("subtract: dimension mismatch");
    MultiPoly out = a.degree_bound() >= b.degree_bound() ? a : a.with_degree_bound(b.degree_bound());
    out.axpy(-1.0, b);
    return out;
}

/// Exact product q * l for l of degree <= 1. The result bound is deg(q)+1
/// when l has a linear part; `degree_cap` >= 0 rejects anything larger.
inline MultiPoly mul_linear(const MultiPoly& q, const MultiPoly& l, int degree_cap = -1) {
    const int m = q.dimension();
    if (l.dimension() != m) throw DimensionError("mul_linear: dimension mismatch");
    if (l.effective_degree() > 1) throw DimensionError("mul_linear: factor has degree > 1");
    const auto lc = l.coefficients();
    bool has_linear = false;
    for (std::size_t j = 1; j < std::min<std::size_t>(lc.size(), static_cast<std::size_t>(m) + 1); ++j)
        has_linear = has_linear || lc[j] != 0.0;
    const int bound = q.degree_bound() + (has_linear ? 1 : 0);
    if (degree_cap >= 0 && bound > degree_cap)
        throw DimensionError("mul_linear: product degree " + std::to_string(bound) + " exceeds the bound " +
                             std::to_string(degree_cap));
    MultiPoly out(m, bound);
    const double l0 = lc[0];
    auto qc = q.coefficients();
    auto oc = out.coefficients();
    for (std::size_t i = 0; i < qc.size(); ++i) oc[i] = l0 * qc[i];
    if (has_linear) {
        const auto& ord = out.order();
        for (std::size_t i = 0; i < qc.size(); ++i) {
            const double c = qc[i];
            if (c == 0.0) continue;
            for (int j = 0; j < m; ++j) oc[ord.successor(i, j)] += lc[static_cast<std::size_t>(j) + 1] * c;
        }
    }
    detail::count_madds(static_cast<std::int64_t>(m + 1) * static_cast<std::int64_t>(qc.size()));
    return out;
}

/// Affine map x -> A x + b with full-rank A (row-major).
class AffineMap {
public:
    static constexpr double kRankTol = 1e-12;

    AffineMap(int m, std::vector<double> a, std::vector<double> b) : m_(m), a_(std::move(a)), b_(std::move(b)) {
        if (m < 1 || a_.size() != static_cast<std::size_t>(m) * m || b_.size() != static_cast<std::size_t>(m))
            throw DimensionError("AffineMap: inconsistent sizes");
        if (!full_rank()) throw DegenerateInputError("AffineMap: matrix is rank deficient");
    }

    static AffineMap identity(int m) { return translation(Vector(static_cast<std::size_t>(m), 0.0)); }

    static AffineMap translation(Vector b) {
        const int m = static_cast<int>(b.size());
        std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) a[static_cast<std::size_t>(i) * m + i] = 1.0;
        return AffineMap(m, std::move(a), std::move(b));
    }

    int dimension() const { return m_; }
    double a(int i, int j) const { return a_[static_cast<std::size_t>(i) * m_ + j]; }
    double b(int i) const { return b_[static_cast<std::size_t>(i)]; }

    Vector apply(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != m_) throw DimensionError("AffineMap::apply: dimension mismatch");
        Vector y(b_);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) y[static_cast<std::size_t>(i)] += a(i, j) * x[static_cast<std::size_t>(j)];
        return y;
    }

private:
    bool full_rank() const {
        std::vector<double> w(a_);
        double scale = 0.0;
        for (double v : w) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) return false;
        for (int k = 0; k < m_; ++k) {
            int piv = k;
            for (int i = k + 1; i < m_; ++i)
                if (std::abs(w[static_cast<std::size_t>(i) * m_ + k]) > std::abs(w[static_cast<std::size_t>(piv) * m_ + k])) piv = i;
            if (std::abs(w[static_cast<std::size_t>(piv) * m_ + k]) <= kRankTol * scale) return false;
            if (piv != k)
                for (int j = 0; j < m_; ++j) std::swap(w[static_cast<std::size_t>(k) * m_ + j], w[static_cast<std::size_t>(piv) * m_ + j]);
            for (int i = k + 1; i < m_; ++i) {
                const double f = w[static_cast<std::size_t>(i) * m_ + k] / w[static_cast<std::size_t>(k) * m_ + k];
                for (int j = k; j < m_; ++j) w[static_cast<std::size_t>(i) * m_ + j] -= f * w[static_cast<std::size_t>(k) * m_ + j];
            }
        }
        return true;
    }

    int m_;
    std::vector<double> a_;
    std::vector<double> b_;
};

/// The polynomial x -> q(A x + b), same degree bound.
inline MultiPoly compose_affine(const MultiPoly& q, const AffineMap& t) {
    const int m = q.dimension();
    const int n = q.degree_bound();
    if (t.dimension() != m) throw DimensionError("compose_affine: dimension mismatch");
    const auto& ord = q.order();
    // coordinate j of A x + b as a degree-1 polynomial
    std::vector<MultiPoly> coord;
    coord.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        Vector row(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) row[static_cast<std::size_t>(k)] = t.a(j, k);
        coord.push_back(MultiPoly::linear(t.b(j), row));
    }
    MultiPoly out(m, n);
    out[0] = q[0];
    // Transformed monomials of degree < n are kept as parents for the next degree.
    std::vector<MultiPoly> image;
    image.reserve(ord.prefix(n - 1));
    image.push_back(MultiPoly::constant(m, 1.0));
    for (std::size_t i = 1; i < q.size(); ++i) {
        MultiPoly ti = mul_linear(image[ord.parent(i)], coord[static_cast<std::size_t>(ord.parent_var(i))]);
        if (q[i] != 0.0) out.axpy(q[i], ti);
        if (ord.degree_of(i) < n) image.push_back(std::move(ti));
    }
    return out;
}

/// sum_i c_i * t(x)^i with t(x) = <x - base, dir>, by Horner's rule in
/// polynomial arithmetic. `dir` must have unit length.
inline MultiPoly embed_univariate(std::span<const double> coeffs, std::span<const double> dir,
                                  std::span<const double> base, int degree_cap = -1) {
    constexpr double kUnitTol = 1e-12;
    if (dir.size() != base.size() || dir.empty()) throw DimensionError("embed_univariate: direction/base mismatch");
    if (coeffs.empty()) throw DimensionError("embed_univariate: no coefficients");
    if (std::abs(norm2(dir) - 1.0) > kUnitTol) throw DegenerateInputError("embed_univariate: direction is not a unit vector");
    const int m = static_cast<int>(dir.size());
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (degree_cap >= 0 && n > degree_cap)
        throw DimensionError("embed_univariate: degree " + std::to_string(n) + " exceeds the bound " + std::to_string(degree_cap));
    const MultiPoly t = MultiPoly::linear(-dot(dir, base), dir);
    MultiPoly acc = MultiPoly::constant(m, coeffs[static_cast<std::size_t>(n)]);
    for (int i = n - 1; i >= 0; --i) {
        acc = mul_linear(acc, t);
        acc[0] += coeffs[static_cast<std::size_t>(i)];
    }
    return acc.degree_bound() == n ? acc : acc.with_degree_bound(n);
}

inline std::string MultiPoly::str(int precision) const {
    std::string s;
    char buf[64];
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0.0) continue;
        std::snprintf(buf, sizeof buf, "%+.*g", precision, coeffs_[i]);
        s += s.empty() ? buf : std::string(" ") + buf;
        auto e = order_->exponents(i);
        for (int j = 0; j < m_; ++j) {
            if (e[static_cast<std::size_t>(j)] == 0) continue;
            s += "*x" + std::to_string(j + 1);
            if (e[static_cast<std::size_t>(j)] > 1) s += "^" + std::to_string(e[static_cast<std::size_t>(j)]);
        }
    }
    return s.empty() ? "0" : s;
}

} // namespace pip
