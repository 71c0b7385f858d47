#ifndef THETAFORGE_RNG_HPP
#define THETAFORGE_RNG_HPP

#include <cstdint>
#include <initializer_list>

namespace thetaforge {

/// SplitMix64 stream.
///
/// The verification harness must reproduce every sampled input bit-for-bit
/// from the configured seed, independent of platform and of evaluation
/// order, so sampling uses this fixed generator rather than the standard
/// library distributions (which are implementation-defined).
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) { return n ? next() % n : 0; }

private:
    std::uint64_t state_;
};

/// Order-sensitive key combination for deriving independent substreams
/// (suite tag, genus, level, sample index) from one seed.
inline std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0x2545f4914f6cdd1dull;
    for (std::uint64_t k : keys) {
        h ^= k + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
    }
    return h;
}

/// FNV-1a of a string, for tagging substreams by suite name.
inline std::uint64_t tag_hash(const char* s) {
    std::uint64_t h = 1469598103934665603ull;
    for (; *s; ++s) {
        h ^= static_cast<unsigned char>(*s);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace thetaforge

#endif
