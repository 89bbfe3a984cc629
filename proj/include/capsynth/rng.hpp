#pragma once

#include <cstdint>
#include <random>

namespace capsynth {

/// Deterministic RNG. Wraps mt19937_64 raw output with project-owned
/// uniform mappings so streams are byte-reproducible across standard
/// library implementations (std distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Independent stream for task `index` under a master seed.
    static Rng for_stream(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(splitmix64(master_seed + 0x9E3779B97F4A7C15ULL * (index + 1)));
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), unbiased.
    std::uint64_t uniform_int(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = eng_();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace capsynth
