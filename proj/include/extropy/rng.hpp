#pragma once

#include <cstdint>

namespace extropy {

// Counter-based generator: pure function of (key, index), so site tapes and
// halo draws are reproducible bit-for-bit regardless of evaluation order.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t mix_key(uint64_t a, uint64_t b) {
    return splitmix64(a ^ (0x9e3779b97f4a7c15ull + (b << 1)));
}

struct CounterRng {
    uint64_t key = 0;

    uint64_t word(uint64_t index) const { return splitmix64(key ^ splitmix64(index + 1)); }

    // uniform in [0, 1)
    double uniform(uint64_t index) const {
        return static_cast<double>(word(index) >> 11) * 0x1.0p-53;
    }

    int bit(uint64_t index) const { return static_cast<int>(word(index) & 1u); }
};

} // namespace extropy
