#pragma once

// Dense Vandermonde baselines: the multivariate Vandermonde matrix, a
// partial-pivoting LU solve, explicit inversion and conditioning estimates.
// Factorizations go through LAPACK (dgetrf/dgetrs); multiply-adds are
// counted with the exact operation counts of those algorithms.

#include "pip/error.hpp"
#include "pip/geometry.hpp"
#include "pip/instrument.hpp"
#include "pip/monomials.hpp"
#include "pip/nodeset.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pip {

/// Row-major real matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0) throw DimensionError("DenseMatrix: dimensions must be positive");
        detail::count_dense_matrix();
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix I(n, n);
        for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double max_abs() const {
        double s = 0.0;
        for (double v : data_) s = std::max(s, std::abs(v));
        return s;
    }

    /// Maximum absolute column sum.
    double norm1() const {
        std::vector<double> col(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) col[j] += std::abs((*this)(i, j));
        return *std::max_element(col.begin(), col.end());
    }

    Vector multiply(std::span<const double> x) const {
        if (x.size() != cols_) throw DimensionError("DenseMatrix::multiply: length mismatch");
        Vector y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
        return y;
    }

    DenseMatrix multiply(const DenseMatrix& b) const {
        if (cols_ != b.rows_) throw DimensionError("DenseMatrix::multiply: shape mismatch");
        DenseMatrix c(rows_, b.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const double a = (*this)(i, k);
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a * b(k, j);
            }
        return c;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    RealVector data_;
};

/// Row i holds every monomial of degree <= n (canonical order) at node i.
inline DenseMatrix build_vandermonde(const NodeSet& nodes, int m, int n) {
    if (nodes.dimension() != m) throw DimensionError("build_vandermonde: node dimension differs from m");
    const std::size_t N = count_total(m, n);
    if (nodes.size() != N)
        throw DimensionError("build_vandermonde: expected " + std::to_string(N) + " nodes, got " + std::to_string(nodes.size()));
    const auto order = MonomialOrder::shared(m, n);
    DenseMatrix V(N, N);
    for (std::size_t i = 0; i < N; ++i) order->monomials(nodes[i], V.row(i));
    detail::count_madds(static_cast<std::int64_t>(N * N));
    return V;
}

/// Pivots below this fraction of max |V_ij| mark the matrix singular.
inline constexpr double kSingularThreshold = 1e-13;

struct LuFactors {
    DenseMatrix lu;
    std::vector<lapack_int> pivots;
    double max_entry = 0.0;
    /// min |U_kk| / max |V_ij|.
    double min_pivot_ratio = 0.0;
    double log_abs_det = 0.0;
    bool singular = false;
};

inline std::int64_t lu_multiply_adds(std::size_t n) {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto r = static_cast<std::int64_t>(n - k - 1);
        s += r * r + r;
    }
    return s;
}

/// Partial-pivoting LU; never throws on singularity, it is reported instead.
inline LuFactors lu_factor(DenseMatrix V, double threshold = kSingularThreshold) {
    if (!V.square()) throw DimensionError("lu_factor: matrix must be square");
    const auto n = static_cast<lapack_int>(V.rows());
    const double max_entry = V.max_abs();
    LuFactors f{std::move(V), std::vector<lapack_int>(static_cast<std::size_t>(n)), max_entry};
    const lapack_int info = LAPACKE_dgetrf(LAPACK_ROW_MAJOR, n, n, f.lu.data(), n, f.pivots.data());
    if (info < 0) throw std::logic_error("dgetrf: invalid argument " + std::to_string(-info));
    detail::count_madds(lu_multiply_adds(f.lu.rows()));
    double min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < f.lu.rows(); ++k) {
        const double p = std::abs(f.lu(k, k));
        min_pivot = std::min(min_pivot, p);
        f.log_abs_det += std::log(p);
    }
    f.min_pivot_ratio = f.max_entry > 0.0 ? min_pivot / f.max_entry : 0.0;
    f.singular = info > 0 || !(f.min_pivot_ratio >= threshold);
    return f;
}

/// Solves in place with the factors; rhs holds nrhs columns, row-major.
inline void lu_substitute(const LuFactors& f, std::span<double> rhs, std::size_t nrhs) {
    const auto n = static_cast<lapack_int>(f.lu.rows());
    const lapack_int info = LAPACKE_dgetrs(LAPACK_ROW_MAJOR, 'N', n, static_cast<lapack_int>(nrhs), f.lu.data(), n,
                                           f.pivots.data(), rhs.data(), static_cast<lapack_int>(nrhs));
    if (info != 0) throw std::logic_error("dgetrs failed with code " + std::to_string(info));
    detail::count_madds(static_cast<std::int64_t>(nrhs) * static_cast<std::int64_t>(f.lu.rows() * f.lu.rows()));
}

struct LinearSolution {
    Vector x;
    /// ||V x - rhs||_inf
    double residual_inf = 0.0;
};

inline void throw_singular(const LuFactors& f, const char* who) {
    throw SingularMatrixError(std::string(who) + ": matrix is singular (min pivot ratio " + std::to_string(f.min_pivot_ratio) +
                              " below " + std::to_string(kSingularThreshold) + "); the nodes are not generic");
}

inline LinearSolution lu_solve(const DenseMatrix& V, std::span<const double> rhs) {
    if (!V.square() || rhs.size() != V.rows()) throw DimensionError("lu_solve: shape mismatch");
    const LuFactors f = lu_factor(V);
    if (f.singular) throw_singular(f, "lu_solve");
    LinearSolution s{Vector(rhs.begin(), rhs.end())};
    lu_substitute(f, s.x, 1);
    for (std::size_t i = 0; i < V.rows(); ++i) s.residual_inf = std::max(s.residual_inf, std::abs(dot(V.row(i), s.x) - rhs[i]));
    return s;
}

inline DenseMatrix inverse_from(const LuFactors& f) {
    DenseMatrix inv = DenseMatrix::identity(f.lu.rows());
    lu_substitute(f, std::span<double>(inv.data(), inv.rows() * inv.cols()), inv.cols());
    return inv;
}

/// V^{-1} through LU and one substitution per unit vector.
inline DenseMatrix invert(const DenseMatrix& V) {
    if (!V.square()) throw DimensionError("invert: matrix must be square");
    const LuFactors f = lu_factor(V);
    if (f.singular) throw_singular(f, "invert");
    return inverse_from(f);
}

/// sigma_max / sigma_min via one-sided Jacobi rotations on the columns.
inline double cond2_jacobi(const DenseMatrix& V, int max_sweeps = 60) {
    const std::size_t r = V.rows(), c = V.cols();
    // Work on the transpose so that columns are contiguous rows.
    std::vector<double> w(r * c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) w[j * r + i] = V(i, j);
    auto col = [&](std::size_t j) { return w.data() + j * r; };
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < c; ++p)
            for (std::size_t q = p + 1; q < c; ++q) {
                double a = 0.0, b = 0.0, g = 0.0;
                const double* cp = col(p);
                const double* cq = col(q);
                for (std::size_t i = 0; i < r; ++i) {
                    a += cp[i] * cp[i];
                    b += cq[i] * cq[i];
                    g += cp[i] * cq[i];
                }
                if (std::abs(g) <= 1e-15 * std::sqrt(a * b) || g == 0.0) continue;
                rotated = true;
                const double zeta = (b - a) / (2.0 * g);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t), sn = cs * t;
                double* xp = col(p);
                double* xq = col(q);
                for (std::size_t i = 0; i < r; ++i) {
                    const double u = xp[i], v = xq[i];
                    xp[i] = cs * u - sn * v;
                    xq[i] = sn * u + cs * v;
                }
            }
        if (!rotated) break;
    }
    double smax = 0.0, smin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < r; ++i) s += col(j)[i] * col(j)[i];
        s = std::sqrt(s);
        smax = std::max(smax, s);
        smin = std::min(smin, s);
    }
    return smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
}

struct GenericityOptions {
    /// 1-norm condition number through the explicit inverse up to this size.
    std::size_t cond1_limit = 3000;
    /// 2-norm condition number through Jacobi SVD up to this size.
    std::size_t cond2_limit = 300;
};

struct GenericityReport {
    bool generic = false;
    double abs_det_log = 0.0;
    double min_pivot_ratio = 0.0;
    /// +inf when singular, NaN when skipped for size.
    double cond_1 = std::nan("");
    double cond_2 = std::nan("");
    std::size_t size = 0;
};

/// The node set is generic iff V_{m,n}(P) is regular.
inline GenericityReport genericity_check(const NodeSet& nodes, int m, int n, const GenericityOptions& opt = {}) {
    DenseMatrix V = build_vandermonde(nodes, m, n);
    GenericityReport r;
    r.size = V.rows();
    const double norm1 = r.size <= opt.cond1_limit ? V.norm1() : 0.0;
    const double cond2 = r.size <= opt.cond2_limit ? cond2_jacobi(V) : std::nan("");
    const LuFactors f = lu_factor(std::move(V));
    r.generic = !f.singular;
    r.abs_det_log = f.log_abs_det;
    r.min_pivot_ratio = f.min_pivot_ratio;
    if (!r.generic) {
        r.cond_1 = r.cond_2 = std::numeric_limits<double>::infinity();
        return r;
    }
    if (r.size <= opt.cond1_limit) r.cond_1 = norm1 * inverse_from(f).norm1();
    r.cond_2 = cond2;
    return r;
}

} // namespace pip
