#pragma once

#include "pip/error.hpp"
#include "pip/instrument.hpp"

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pip {

using Vector = std::vector<double>;
/// Storage for the large arrays whose size the storage accounting tracks.
using RealVector = std::vector<double, TrackingAllocator<double>>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
}

/// Orthonormal frame xi_1..xi_m of R^m, stored row-wise (row i is xi_{i+1}).
class Frame {
public:
    static constexpr double kOrthonormalTol = 1e-10;

    Frame() = default;

    /// Validates |<xi_i, xi_j> - delta_ij| <= 1e-10.
    Frame(int m, std::vector<double> rows) : m_(m), rows_(std::move(rows)) {
        if (m < 1) throw DimensionError("frame: dimension must be >= 1");
        if (rows_.size() != static_cast<std::size_t>(m) * m)
            throw DimensionError("frame: expected " + std::to_string(m * m) + " entries");
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const double d = dot(axis(i), axis(j)) - (i == j ? 1.0 : 0.0);
                if (std::abs(d) > kOrthonormalTol)
                    throw DegenerateInputError("frame: axes " + std::to_string(i + 1) + " and " +
                                               std::to_string(j + 1) + " are not orthonormal");
            }
    }

    static Frame standard(int m) {
        std::vector<double> rows(static_cast<std::size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) rows[static_cast<std::size_t>(i) * m + i] = 1.0;
        return Frame(m, std::move(rows));
    }

    /// Random orthonormal frame: Gram-Schmidt on Gaussian rows.
    template <class Rng>
    static Frame random(int m, Rng& rng) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> rows(static_cast<std::size_t>(m) * m);
        for (int i = 0; i < m; ++i) {
            std::span<double> row(rows.data() + static_cast<std::size_t>(i) * m, m);
            for (;;) {
                for (auto& v : row) v = gauss(rng);
                for (int pass = 0; pass < 2; ++pass)
                    for (int j = 0; j < i; ++j) {
                        std::span<const double> prev(rows.data() + static_cast<std::size_t>(j) * m, m);
                        const double c = dot(row, prev);
                        for (int k = 0; k < m; ++k) row[k] -= c * prev[k];
                    }
                const double nrm = norm2(row);
                if (nrm > 1e-6) {
                    for (auto& v : row) v /= nrm;
                    break;
                }
            }
        }
        return Frame(m, std::move(rows));
    }

    int dimension() const { return m_; }

    /// Axis i, 0-based.
    std::span<const double> axis(int i) const {
        return {rows_.data() + static_cast<std::size_t>(i) * m_, static_cast<std::size_t>(m_)};
    }

    /// x = sum_j coords[j] * xi_j.
    Vector to_ambient(std::span<const double> coords) const {
        Vector x(m_, 0.0);
        for (int j = 0; j < m_; ++j) {
            if (coords[j] == 0.0) continue;
            auto a = axis(j);
            for (int k = 0; k < m_; ++k) x[k] += coords[j] * a[k];
        }
        return x;
    }

    /// coords[j] = <x, xi_j>.
    Vector to_frame(std::span<const double> x) const {
        Vector c(m_);
        for (int j = 0; j < m_; ++j) c[j] = dot(x, axis(j));
        return c;
    }

private:
    int m_ = 0;
    std::vector<double> rows_;
};

} // namespace pip
