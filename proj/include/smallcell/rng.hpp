#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace smallcell {

// splitmix64 finalizer; used both as a generator step and to mix stream tags.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a root seed and a tag path,
/// e.g. derive_seed(root, {hour, region}). Adding streams with other tags
/// never perturbs existing ones.
inline uint64_t derive_seed(uint64_t root, std::initializer_list<uint64_t> tags) {
    uint64_t s = mix64(root ^ 0x5851f42d4c957f2dull);
    for (uint64_t t : tags) s = mix64(s ^ mix64(t + 0xd1342543de82ef95ull));
    return s;
}

/// Small deterministic generator (xoshiro256**). We avoid std distributions
/// on purpose: their outputs differ between standard libraries, and scenario
/// outputs must be byte-identical everywhere.
class RngStream {
public:
    explicit RngStream(uint64_t seed) {
        uint64_t s = seed;
        for (auto& w : state_) w = (s = mix64(s));
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) {
        // Lemire-style rejection-free enough for simulation use; keep exact
        // via rejection to stay unbiased.
        if (n == 0) return 0;
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Exact Poisson sampling via the exponential inter-arrival construction:
    /// count arrivals of a unit-rate process before `mean`. Stable for any
    /// mean (works in log space), O(mean) uniforms per draw.
    int64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        int64_t count = -1;
        double acc = 0.0;
        while (acc < mean) {
            double u = next_double();
            // -log(1-u) is Exp(1); 1-u in (0,1] so log is finite
            acc += -std::log1p(-u);
            ++count;
        }
        return count;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4];
};

}  // namespace smallcell
