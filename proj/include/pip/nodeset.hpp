#pragma once

#include "pip/error.hpp"
#include "pip/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pip {

/// Ordered points in R^m. Each point remembers the decomposition leaf that
/// produced it as a bit string ("" outside the tree construction).
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(int m) : m_(m) {
        if (m < 1) throw DimensionError("NodeSet: dimension must be >= 1");
    }

    int dimension() const { return m_; }
    std::size_t size() const { return provenance_.size(); }
    bool empty() const { return provenance_.empty(); }

    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
    }
    const std::string& provenance(std::size_t i) const { return provenance_[i]; }

    void reserve(std::size_t n) {
        coords_.reserve(n * static_cast<std::size_t>(m_));
        provenance_.reserve(n);
    }

    void push_back(std::span<const double> p, std::string tag = {}) {
        if (static_cast<int>(p.size()) != m_) throw DimensionError("NodeSet: point has the wrong dimension");
        coords_.insert(coords_.end(), p.begin(), p.end());
        provenance_.push_back(std::move(tag));
    }

    void append(const NodeSet& other) {
        if (other.m_ != m_) throw DimensionError("NodeSet::append: dimension mismatch");
        coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
        provenance_.insert(provenance_.end(), other.provenance_.begin(), other.provenance_.end());
    }

    std::span<const double> raw() const { return coords_; }

    /// Smallest Euclidean distance between two points (+inf for fewer than two).
    double min_pairwise_distance() const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < size(); ++i) {
            auto a = (*this)[i];
            for (std::size_t j = i + 1; j < size(); ++j) {
                auto b = (*this)[j];
                double d2 = 0.0;
                for (int k = 0; k < m_ && d2 < best * best; ++k) {
                    const double d = a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)];
                    d2 += d * d;
                }
                best = std::min(best, std::sqrt(d2));
            }
        }
        return best;
    }

private:
    int m_ = 0;
    RealVector coords_;
    std::vector<std::string> provenance_;
};

} // namespace pip
