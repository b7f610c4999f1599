#pragma once

// Operation and storage accounting.
//
// Hot loops report multiply-adds in bulk; containers built on
// TrackingAllocator report the reals they hold. A ScopedTally captures both
// for one region of code on the current thread.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <new>

namespace pip {

namespace detail {

struct TallyState {
    std::int64_t multiply_adds = 0;
    std::int64_t live_reals = 0;
    std::int64_t peak_reals = 0;
    std::int64_t dense_matrices = 0;
};

inline TallyState& tally_state() {
    thread_local TallyState state;
    return state;
}

inline void count_madds(std::int64_t k) { tally_state().multiply_adds += k; }

inline void count_dense_matrix() { ++tally_state().dense_matrices; }

inline void reals_acquired(std::size_t n) {
    auto& s = tally_state();
    s.live_reals += static_cast<std::int64_t>(n);
    s.peak_reals = std::max(s.peak_reals, s.live_reals);
}

inline void reals_released(std::size_t n) { tally_state().live_reals -= static_cast<std::int64_t>(n); }

} // namespace detail

/// Allocator that reports element counts to the thread's tally.
template <class T>
struct TrackingAllocator {
    using value_type = T;

    TrackingAllocator() noexcept = default;
    template <class U>
    TrackingAllocator(const TrackingAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_array_new_length();
        T* p = static_cast<T*>(::operator new(n * sizeof(T)));
        detail::reals_acquired(n);
        return p;
    }

    void deallocate(T* p, std::size_t n) noexcept {
        detail::reals_released(n);
        ::operator delete(p);
    }

    template <class U>
    bool operator==(const TrackingAllocator<U>&) const noexcept { return true; }
};

/// Summary of one instrumented region.
struct TallyReport {
    std::int64_t multiply_adds = 0;
    /// Peak number of tracked reals alive above the level at region entry.
    std::int64_t peak_reals_stored = 0;
    /// Dense matrices constructed inside the region.
    std::int64_t dense_matrices = 0;
};

/// RAII region of operation/storage accounting. Regions nest; an inner
/// region's counts are also visible to the enclosing one.
class ScopedTally {
public:
    ScopedTally() : saved_(detail::tally_state()) {
        auto& s = detail::tally_state();
        baseline_live_ = s.live_reals;
        s.multiply_adds = 0;
        s.dense_matrices = 0;
        s.peak_reals = s.live_reals;
    }

    ScopedTally(const ScopedTally&) = delete;
    ScopedTally& operator=(const ScopedTally&) = delete;

    ~ScopedTally() {
        auto& s = detail::tally_state();
        s.multiply_adds += saved_.multiply_adds;
        s.dense_matrices += saved_.dense_matrices;
        s.peak_reals = std::max(s.peak_reals, saved_.peak_reals);
    }

    TallyReport report() const {
        const auto& s = detail::tally_state();
        return {s.multiply_adds, s.peak_reals - baseline_live_, s.dense_matrices};
    }

private:
    detail::TallyState saved_;
    std::int64_t baseline_live_ = 0;
};

} // namespace pip
