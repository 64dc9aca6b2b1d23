#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <vector>

namespace cliquemm {

/// Deterministic splitmix64 stream. Bounded sampling is hand rolled so
/// that traces replay bit-identically across compilers and platforms,
/// which std::uniform_int_distribution does not guarantee.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound), bound > 0. Rejection sampling keeps
    /// the draw unbiased.
    std::uint64_t below(std::uint64_t bound) {
        assert(bound > 0);
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % bound;
    }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    /// Derive an unrelated stream seed from (a, b).
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 0x632be59bd9b4e019ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

/// One uniform element of a non-empty vector.
template <typename T>
const T& pick(const std::vector<T>& pool, RngStream& rng) {
    assert(!pool.empty());
    return pool[static_cast<std::size_t>(rng.below(pool.size()))];
}

/// Uniform subset of size k (k <= pool.size()), returned sorted.
/// Partial Fisher-Yates over a copy.
template <typename T>
std::vector<T> sample_k(std::vector<T> pool, std::size_t k, RngStream& rng) {
    assert(k <= pool.size());
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// Index drawn proportionally to non-negative integer weights (sum > 0).
inline std::size_t weighted_index(const std::vector<long long>& weights, RngStream& rng) {
    long long total = 0;
    for (long long w : weights) total += w;
    assert(total > 0);
    long long r = static_cast<long long>(rng.below(static_cast<std::uint64_t>(total)));
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (r < weights[i]) return i;
        r -= weights[i];
    }
    return weights.size() - 1;  // unreachable
}

inline int ceil_div(long long a, long long b) {
    assert(b > 0);
    return static_cast<int>((a + b - 1) / b);
}

/// Smallest t with 2^t >= x (x >= 1). ceil_log2(1) == 0.
inline int ceil_log2(long long x) {
    assert(x >= 1);
    int t = 0;
    long long p = 1;
    while (p < x) {
        p <<= 1;
        ++t;
    }
    return t;
}

}  // namespace cliquemm
