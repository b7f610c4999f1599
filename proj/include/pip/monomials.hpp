#pragma once

// Monomial bookkeeping for dense multivariate polynomials.
//
// Coefficient vectors are laid out in graded order: all monomials of total
// degree 0, then degree 1, and so on. Inside one degree block the exponent
// tuples run in descending lexicographic order, (k,0,...,0) first and
// (0,...,0,k) last. Because the order is graded, the table for (m, n) is a
// prefix of the table for (m, n') whenever n <= n'.

#include "pip/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace pip {

/// Exponent tuple (i_1, ..., i_m) addressing one monomial.
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<int> e) : exps_(e) { validate(); }
    explicit MultiIndex(std::vector<int> e) : exps_(std::move(e)) { validate(); }
    explicit MultiIndex(std::span<const int> e) : exps_(e.begin(), e.end()) { validate(); }

    int dimension() const { return static_cast<int>(exps_.size()); }
    int order() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }
    int operator[](int j) const { return exps_[static_cast<std::size_t>(j)]; }
    std::span<const int> exponents() const { return exps_; }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

    std::string str() const {
        std::string s = "(";
        for (std::size_t j = 0; j < exps_.size(); ++j) {
            if (j) s += ',';
            s += std::to_string(exps_[j]);
        }
        return s + ")";
    }

private:
    void validate() const {
        if (exps_.empty()) throw DimensionError("multi-index needs at least one exponent");
        for (int e : exps_)
            if (e < 0) throw DimensionError("multi-index exponents must be non-negative");
    }

    std::vector<int> exps_;
};

/// C(a, b) by the multiplicative formula with exact division at every step.
inline std::size_t binomial(std::int64_t a, std::int64_t b) {
    if (b < 0 || a < 0 || b > a) return 0;
    b = std::min(b, a - b);
    unsigned __int128 r = 1;
    for (std::int64_t i = 1; i <= b; ++i) {
        r = r * static_cast<unsigned __int128>(a - b + i) / static_cast<unsigned __int128>(i);
        if (r > std::numeric_limits<std::size_t>::max())
            throw SizingError("binomial(" + std::to_string(a) + ", " + std::to_string(b) + ") overflows");
    }
    return static_cast<std::size_t>(r);
}

/// N(m, n) = C(m+n, m): number of monomials of degree <= n in m variables.
inline std::size_t count_total(int m, int n) {
    if (m < 1 || n < 0) throw DimensionError("count_total requires m >= 1, n >= 0");
    try {
        return binomial(static_cast<std::int64_t>(m) + n, m);
    } catch (const SizingError&) {
        throw SizingError("N(m, n) overflows for m = " + std::to_string(m) + ", n = " + std::to_string(n));
    }
}

/// M(m, k): number of monomials of exact degree k in m variables.
inline std::size_t count_degree(int m, int k) {
    if (m < 1 || k < 0) throw DimensionError("count_degree requires m >= 1, k >= 0");
    // C(m+k, m) - C(m+k-1, m) collapses to C(m+k-1, m-1).
    try {
        return binomial(static_cast<std::int64_t>(m) + k - 1, m - 1);
    } catch (const SizingError&) {
        throw SizingError("M(m, k) overflows for m = " + std::to_string(m) + ", k = " + std::to_string(k));
    }
}

/// Canonical monomial table for m variables and degree <= n.
class MonomialOrder {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    /// Tables beyond this many monomials are refused.
    static constexpr std::size_t kMaxTerms = std::size_t{1} << 26;

    MonomialOrder(int m, int n) : m_(m), n_(n) {
        size_ = count_total(m, n);
        if (size_ > kMaxTerms / static_cast<std::size_t>(m))
            throw SizingError("monomial table for m = " + std::to_string(m) + ", n = " + std::to_string(n) +
                              " exceeds the configured maximum");
        build_binomials();
        build_table();
        build_links();
    }

    /// Shared table with degree >= n for dimension m (process-wide cache).
    static std::shared_ptr<const MonomialOrder> shared(int m, int n) {
        static std::mutex mu;
        static std::map<int, std::shared_ptr<const MonomialOrder>> cache;
        std::lock_guard lock(mu);
        auto& slot = cache[m];
        if (!slot || slot->degree() < n) slot = std::make_shared<const MonomialOrder>(m, n);
        return slot;
    }

    int dimension() const { return m_; }
    int degree() const { return n_; }
    std::size_t size() const { return size_; }

    /// Number of entries with degree <= k.
    std::size_t prefix(int k) const { return k < 0 ? 0 : block_begin_[static_cast<std::size_t>(k) + 1]; }
    /// First position of the degree-k block.
    std::size_t block_begin(int k) const { return block_begin_[static_cast<std::size_t>(k)]; }

    std::span<const int> exponents(std::size_t pos) const {
        return {exps_.data() + pos * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
    }
    MultiIndex operator[](std::size_t pos) const { return MultiIndex(exponents(pos)); }

    int degree_of(std::size_t pos) const { return degree_[pos]; }

    /// Position of `idx`, computed by ranking rather than search.
    std::size_t position_of(std::span<const int> idx) const {
        if (static_cast<int>(idx.size()) != m_) throw DimensionError("position_of: multi-index has wrong length");
        int k = 0;
        for (int e : idx) {
            if (e < 0) throw DimensionError("position_of: negative exponent");
            k += e;
        }
        if (k > n_)
            throw std::out_of_range("position_of: multi-index of order " + std::to_string(k) +
                                    " exceeds degree " + std::to_string(n_));
        std::size_t pos = block_begin_[static_cast<std::size_t>(k)];
        int remaining = k;
        for (int j = 0; j + 1 < m_; ++j) {
            const int before = remaining - idx[static_cast<std::size_t>(j)] - 1;
            if (before >= 0) pos += total(m_ - j - 1, before);
            remaining -= idx[static_cast<std::size_t>(j)];
        }
        return pos;
    }
    std::size_t position_of(const MultiIndex& idx) const { return position_of(idx.exponents()); }

    /// Position whose monomial divided by x_{var(pos)} gives parent(pos); pos >= 1.
    std::size_t parent(std::size_t pos) const { return parent_[pos]; }
    int parent_var(std::size_t pos) const { return var_[pos]; }

    /// Position of monomial(pos) * x_j, or npos once the degree bound is reached.
    std::size_t successor(std::size_t pos, int j) const {
        if (degree_[pos] >= n_) return npos;
        return succ_[pos * static_cast<std::size_t>(m_) + static_cast<std::size_t>(j)];
    }

    /// out[i] = value of monomial i at x for i < out.size().
    void monomials(std::span<const double> x, std::span<double> out) const {
        if (out.empty()) return;
        out[0] = 1.0;
        for (std::size_t i = 1; i < out.size(); ++i) out[i] = out[parent_[i]] * x[static_cast<std::size_t>(var_[i])];
    }

private:
    std::size_t total(int vars, int deg) const {
        return binom_[static_cast<std::size_t>(vars + deg) * stride_ + static_cast<std::size_t>(vars)];
    }

    void build_binomials() {
        stride_ = static_cast<std::size_t>(m_ + n_) + 1;
        binom_.assign(stride_ * stride_, 0);
        for (std::size_t a = 0; a < stride_; ++a) {
            binom_[a * stride_] = 1;
            for (std::size_t b = 1; b <= a; ++b)
                binom_[a * stride_ + b] = binom_[(a - 1) * stride_ + b - 1] + (b < a ? binom_[(a - 1) * stride_ + b] : 0);
        }
    }

    void build_table() {
        exps_.reserve(size_ * static_cast<std::size_t>(m_));
        degree_.reserve(size_);
        block_begin_.assign(static_cast<std::size_t>(n_) + 2, 0);
        std::vector<int> t(static_cast<std::size_t>(m_));
        for (int k = 0; k <= n_; ++k) {
            block_begin_[static_cast<std::size_t>(k)] = degree_.size();
            std::fill(t.begin(), t.end(), 0);
            t[0] = k;
            for (;;) {
                exps_.insert(exps_.end(), t.begin(), t.end());
                degree_.push_back(k);
                // Step to the lexicographic predecessor with the same order.
                int j = m_ - 2;
                while (j >= 0 && t[static_cast<std::size_t>(j)] == 0) --j;
                if (j < 0) break;
                const int tail = t[static_cast<std::size_t>(m_ - 1)];
                --t[static_cast<std::size_t>(j)];
                t[static_cast<std::size_t>(m_ - 1)] = 0;
                t[static_cast<std::size_t>(j + 1)] = tail + 1;
            }
        }
        block_begin_[static_cast<std::size_t>(n_) + 1] = degree_.size();
    }

    void build_links() {
        parent_.assign(size_, 0);
        var_.assign(size_, 0);
        std::vector<int> e(static_cast<std::size_t>(m_));
        for (std::size_t pos = 1; pos < size_; ++pos) {
            auto src = exponents(pos);
            std::copy(src.begin(), src.end(), e.begin());
            const auto first = static_cast<std::size_t>(std::find_if(e.begin(), e.end(), [](int v) { return v > 0; }) - e.begin());
            --e[first];
            parent_[pos] = position_of(e);
            var_[pos] = static_cast<int>(first);
        }
        const std::size_t inner = prefix(n_ - 1);
        succ_.assign(inner * static_cast<std::size_t>(m_), npos);
        for (std::size_t pos = 0; pos < inner; ++pos) {
            auto src = exponents(pos);
            std::copy(src.begin(), src.end(), e.begin());
            for (int j = 0; j < m_; ++j) {
                ++e[static_cast<std::size_t>(j)];
                succ_[pos * static_cast<std::size_t>(m_) + static_cast<std::size_t>(j)] = position_of(e);
                --e[static_cast<std::size_t>(j)];
            }
        }
    }

    int m_;
    int n_;
    std::size_t size_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::size_t> binom_;
    std::vector<int> exps_;
    std::vector<int> degree_;
    std::vector<std::size_t> block_begin_;
    std::vector<std::size_t> parent_;
    std::vector<int> var_;
    std::vector<std::size_t> succ_;
};

/// Canonical table for (m, n); same contents as MonomialOrder(m, n).
inline MonomialOrder build_order(int m, int n) { return MonomialOrder(m, n); }

inline std::size_t position_of(const MonomialOrder& order, const MultiIndex& idx) { return order.position_of(idx); }

/// k-th symmetric power: all degree-k monomials of `point` in canonical order.
inline std::vector<double> symmetric_power(std::span<const double> point, int k) {
    if (point.empty()) throw DimensionError("symmetric_power: empty point");
    if (k < 0) throw DimensionError("symmetric_power: negative degree");
    const auto order = MonomialOrder::shared(static_cast<int>(point.size()), k);
    std::vector<double> all(order->prefix(k));
    order->monomials(point, all);
    return {all.begin() + static_cast<std::ptrdiff_t>(order->block_begin(k)), all.end()};
}

} // namespace pip
