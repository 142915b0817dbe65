#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace ggm {

/// C(n,k) saturated at uint64 max.
inline std::uint64_t subset_count(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t c = 1;
    for (int t = 1; t <= k; ++t) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();
        if (c > limit / static_cast<std::uint64_t>(n - k + t)) return limit;
        c = c * static_cast<std::uint64_t>(n - k + t) / static_cast<std::uint64_t>(t);
    }
    return c;
}

/// Visits every size-k subset of `pool` in lexicographic order of positions
/// (equivalently of values, since pools are kept ascending). The visitor gets
/// the current subset as a span of pool values and returns false to stop.
/// Returns true when the enumeration ran to completion.
///
/// k == 0 visits the empty subset once.
template <class Visit>
bool for_each_subset(std::span<const int> pool, int k, Visit&& visit) {
    const int n = static_cast<int>(pool.size());
    if (k < 0 || k > n) return true;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::vector<int> values(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) idx[static_cast<std::size_t>(t)] = t;
    while (true) {
        for (int t = 0; t < k; ++t) {
            values[static_cast<std::size_t>(t)] = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])];
        }
        if (!visit(std::span<const int>(values))) return false;
        // Advance to the next combination: bump the rightmost index that can
        // still move, then reset everything to its right.
        int t = k - 1;
        while (t >= 0 && idx[static_cast<std::size_t>(t)] == n - k + t) --t;
        if (t < 0) return true;
        ++idx[static_cast<std::size_t>(t)];
        for (int u = t + 1; u < k; ++u) {
            idx[static_cast<std::size_t>(u)] = idx[static_cast<std::size_t>(u - 1)] + 1;
        }
    }
}

/// All vertices of [0,p) except `i`, ascending.
inline std::vector<int> vertices_excluding(int p, int i) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(p > 0 ? p - 1 : 0));
    for (int v = 0; v < p; ++v) {
        if (v != i) out.push_back(v);
    }
    return out;
}

}  // namespace ggm
