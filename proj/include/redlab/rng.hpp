#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redlab/common.hpp"

namespace redlab {

// SplitMix64. The artifact's only RNG; the exact sequence is part of the
// reproducibility contract (seeds in reports refer to this mixer bit-exactly).
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // unbiased uniform draw from [0, n) by rejection
    uint64_t below(uint64_t n) {
        require(n > 0, "below: empty range");
        if ((n & (n - 1)) == 0) return next() & (n - 1);
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<uint64_t>(n))); }

    // Fisher-Yates
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; i--) {
            size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }
};

// Per-task stream derivation: stream(seed, label) = SplitMix64(seed XOR fnv1a64(label)).
// Label conventions are listed in the README so shared-seed couplings replay exactly.
inline SplitMix64 task_stream(uint64_t master_seed, const std::string& label) {
    return SplitMix64(master_seed ^ fnv1a64(label));
}

inline SplitMix64 task_stream(uint64_t master_seed, const std::string& label, uint64_t counter) {
    uint64_t h = fnv1a64(label);
    h = fnv1a64(&counter, sizeof counter, h);
    return SplitMix64(master_seed ^ h);
}

}  // namespace redlab
