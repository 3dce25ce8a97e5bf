#pragma once

#include <cstdint>

namespace wmm {

/// splitmix64. The state transition and output mix are fixed so that any
/// implementation can reproduce a run bit for bit from its seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Index in [0, n). Plain modulo; the bias is irrelevant at litmus scale
    /// and keeps the mapping trivially portable.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

}  // namespace wmm
