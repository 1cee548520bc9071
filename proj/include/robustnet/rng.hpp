#pragma once
// Deterministic splittable random streams.
//
// Every stochastic component takes a (master_seed, index) pair and derives an
// independent stream from it, so results never depend on evaluation order or
// worker count.  Derivation uses the splitmix64 finalizer as a mixing hash;
// the stream generator is xoshiro256** seeded splitmix-style.

#include <array>
#include <cmath>
#include <cstdint>

namespace robustnet {

// splitmix64 finalizer (Vigna / Steele et al. constants)
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}
    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    uint64_t state_;
};

class Xoshiro256 {
public:
    explicit Xoshiro256(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

    // uniform in [-a, a)
    double uniform_sym(double a) { return a * (2.0 * uniform01() - 1.0); }

    // strictly positive unit-mean exponential draw
    double exp1() {
        double u = ((next() >> 11) + 0.5) * 0x1.0p-53;  // (0, 1)
        return -std::log(u);
    }

    // uniform integer in [0, bound); bound > 0
    uint64_t below(uint64_t bound) {
        return (uint64_t)(((unsigned __int128)next() * bound) >> 64);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<uint64_t, 4> s_;
};

// child stream seed for (master, index)
inline uint64_t substream_seed(uint64_t master, uint64_t index) {
    return mix64(mix64(master) ^ mix64(index));
}

// two-level variant: (master, purpose, index)
inline uint64_t substream_seed(uint64_t master, uint64_t purpose, uint64_t index) {
    return mix64(substream_seed(master, purpose) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

inline Xoshiro256 substream(uint64_t master, uint64_t index) {
    return Xoshiro256(substream_seed(master, index));
}

inline Xoshiro256 substream(uint64_t master, uint64_t purpose, uint64_t index) {
    return Xoshiro256(substream_seed(master, purpose, index));
}

}  // namespace robustnet
