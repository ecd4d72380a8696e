#pragma once

#include <cstdint>

namespace fpwalk {

// splitmix64 mixing step.  Used both to derive independent per-walker
// streams from one master seed and as the per-stream generator itself, so
// results do not depend on how walkers are distributed over threads.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
        // The generator walks a Weyl sequence, so stream starts must be
        // scrambled: a plain "+ id * gamma" offset would make consecutive
        // walkers shifted copies of one shared sequence.  Hashing seed and
        // id separately gives pseudo-random, far-apart starting states.
        state_ = mix(master_seed + 0x9E3779B97F4A7C15ULL) ^
                 mix((stream_id + 1) * 0xD1342543DE82EF95ULL);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace fpwalk
