#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ggm {

/// Scrambles a seed into an unrelated substream seed. Used to split one
/// per-trial seed into independent streams (instance generation, sampling)
/// without the streams sharing initial state.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer applied to seed + stream * golden ratio.
    std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seedable random source built on mt19937_64. The engine's output sequence
/// is fixed by the standard; all conversions from raw bits to doubles are
/// implemented here rather than via <random> distributions, whose streams
/// differ between standard libraries.
class Rng {
 public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in the open interval (0,1), 53-bit resolution.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform integer in [0, n), rejection sampled so the stream does not
    /// depend on the standard library's uniform_int_distribution.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Random sign, +1 or -1.
    double sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    /// Standard normal draw via the Marsaglia polar method. The second value
    /// of each generated pair is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        has_cached_ = true;
        return u * f;
    }

    /// In-place Fisher-Yates shuffle using this source's stream.
    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[static_cast<std::size_t>(below(i))]);
        }
    }

 private:
    std::mt19937_64 engine_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace ggm
