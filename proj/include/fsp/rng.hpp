#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Deterministic randomness helpers. std::mt19937_64 is bit-exact across
// implementations, but the standard distributions are not, so bounded ints,
// coins, and gaussians are generated explicitly here. Independent streams
// are derived from (seed, stream_index) so parallel consumers (k-means
// restarts, baseline trials, per-frame noise) stay reproducible regardless
// of scheduling.

namespace fsp::rng {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for the `stream`-th independent substream of `seed`.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(stream_seed(seed, stream));
}

/// Uniform integer in [0, n) by rejection; n must be > 0.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % n;
}

/// Fair coin: true with probability 1/2.
inline bool coin(std::mt19937_64& eng) {
    return (eng() >> 63) != 0;
}

/// Uniform double in (0, 1].
inline double uniform_open01(std::mt19937_64& eng) {
    return (double)((eng() >> 11) + 1) * 0x1.0p-53;
}

/// Standard gaussian via Box-Muller, caching the second variate.
class Gaussian {
public:
    double operator()(std::mt19937_64& eng) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open01(eng);
        const double u2 = uniform_open01(eng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace fsp::rng
