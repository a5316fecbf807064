#pragma once

// Exhaustive reference implementations of the covering/packing quantities,
// used only by tests as an independent check of the branch-and-bound solvers.
// Plain 2^n subset enumeration over bitmasks; fine up to ~20 points.

#include <cstdint>
#include <optional>
#include <vector>

#include <metricpack/space.hpp>

namespace oracle {

using metricpack::FiniteMetricSpace;
using metricpack::SubsetMask;

// minimum number of eps-balls centered in A covering W; nullopt if impossible
inline std::optional<std::size_t> cover_number(const FiniteMetricSpace& space, const SubsetMask& W,
                                               const SubsetMask& A, double eps) {
    const auto wl = W.indices();
    const auto al = A.indices();
    const std::uint64_t full = wl.size() == 64 ? ~0ull : (1ull << wl.size()) - 1;
    std::vector<std::uint64_t> covers(al.size(), 0);
    for (std::size_t ai = 0; ai < al.size(); ++ai)
        for (std::size_t wi = 0; wi < wl.size(); ++wi)
            if (space.dist(wl[wi], al[ai]) <= eps) covers[ai] |= 1ull << wi;

    std::optional<std::size_t> best;
    for (std::uint64_t sel = 1; sel < (1ull << al.size()); ++sel) {
        std::uint64_t covered = 0;
        for (std::size_t ai = 0; ai < al.size(); ++ai)
            if ((sel >> ai) & 1u) covered |= covers[ai];
        if (covered == full) {
            const auto size = static_cast<std::size_t>(__builtin_popcountll(sel));
            if (!best || size < *best) best = size;
        }
    }
    if (wl.empty()) return 0;
    return best;
}

// largest subset of W with all pairwise distances > eps
inline std::size_t pack_number(const FiniteMetricSpace& space, const SubsetMask& W, double eps) {
    const auto wl = W.indices();
    std::vector<std::uint64_t> conflict(wl.size(), 0);
    for (std::size_t i = 0; i < wl.size(); ++i)
        for (std::size_t j = 0; j < wl.size(); ++j)
            if (i != j && space.dist(wl[i], wl[j]) <= eps) conflict[i] |= 1ull << j;

    std::size_t best = 0;
    for (std::uint64_t sel = 1; sel < (1ull << wl.size()); ++sel) {
        bool independent = true;
        for (std::size_t i = 0; i < wl.size() && independent; ++i)
            if (((sel >> i) & 1u) && (conflict[i] & sel) != 0) independent = false;
        if (independent) best = std::max(best, static_cast<std::size_t>(__builtin_popcountll(sel)));
    }
    return best;
}

// smallest subset of W that is pairwise > eps and maximal under inclusion
inline std::size_t min_maximal_pack(const FiniteMetricSpace& space, const SubsetMask& W,
                                    double eps) {
    const auto wl = W.indices();
    std::vector<std::uint64_t> conflict(wl.size(), 0);
    for (std::size_t i = 0; i < wl.size(); ++i)
        for (std::size_t j = 0; j < wl.size(); ++j)
            if (i != j && space.dist(wl[i], wl[j]) <= eps) conflict[i] |= 1ull << j;

    std::size_t best = wl.size() + 1;
    for (std::uint64_t sel = 1; sel < (1ull << wl.size()); ++sel) {
        bool independent = true;
        for (std::size_t i = 0; i < wl.size() && independent; ++i)
            if (((sel >> i) & 1u) && (conflict[i] & sel) != 0) independent = false;
        if (!independent) continue;
        bool maximal = true;
        for (std::size_t v = 0; v < wl.size() && maximal; ++v)
            if (!((sel >> v) & 1u) && (conflict[v] & sel) == 0) maximal = false;
        if (maximal) best = std::min(best, static_cast<std::size_t>(__builtin_popcountll(sel)));
    }
    return best;
}

}  // namespace oracle
