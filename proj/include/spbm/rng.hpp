#pragma once
// Deterministic, cross-platform RNG. xoshiro256** (Blackman/Vigna) seeded
// through SplitMix64. Every replicate derives independent sub-streams from
// (experiment seed, replicate index, stream role), so environment draws and
// agent sampling never share state.

#include <cstdint>
#include <cstddef>

namespace spbm {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

enum class StreamRole : std::uint64_t { environment = 1, agent = 2, generic = 3 };

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t replicate, StreamRole role) {
        std::uint64_t key = seed;
        key = splitmix64(key) ^ (0xA5A5A5A5A5A5A5A5ULL * (replicate + 1));
        key = splitmix64(key) ^ (0x0F0F0F0F0F0F0F0FULL * static_cast<std::uint64_t>(role));
        for (auto& w : s_) w = splitmix64(key);
    }

    explicit Rng(std::uint64_t seed) : Rng(seed, 0, StreamRole::generic) {}

    std::uint64_t next_u64() {
        std::uint64_t x = s_[1] * 5;
        std::uint64_t result = ((x << 7) | (x >> 57)) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = (s_[3] << 45) | (s_[3] >> 19);
        return result;
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    // index sampled from weights (need not be normalized); one uniform draw
    int categorical(const double* w, int n) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += w[i];
        double u = next_double() * total;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += w[i];
            if (u < acc) return i;
        }
        return n - 1;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::uint64_t s_[4];
};

} // namespace spbm
