#pragma once

#include <cstdint>

namespace bcdcp {

// SplitMix64: a counter-based generator (Steele, Lea & Flood 2014). The state
// is a plain counter advanced by the golden-gamma increment and each output is
// a finalizer hash of it, so independent substreams are derived by hashing a
// (seed, stream) pair -- no jump-ahead needed. Output is identical on every
// platform, which carries the byte-level reproducibility contract.
class Rng {
public:
    Rng() : state_(0) {}
    explicit Rng(uint64_t seed) : state_(mix(seed ^ 0x6a09e667f3bcc909ull)) {}

    // Substream for one Monte Carlo path: pure function of (seed, index).
    static Rng substream(uint64_t seed, uint64_t stream_index) {
        Rng r;
        r.state_ = mix(mix(seed ^ 0x6a09e667f3bcc909ull) + mix(stream_index ^ 0xbb67ae8584caa73bull));
        return r;
    }

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1): 53-bit mantissa offset by 2^-54 so 0 never occurs.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

    // UniformRandomBitGenerator interface
    using result_type = uint64_t;
    static constexpr uint64_t min() { return 0; }
    static constexpr uint64_t max() { return ~0ull; }
    uint64_t operator()() { return next_u64(); }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t state_;
};

}  // namespace bcdcp
