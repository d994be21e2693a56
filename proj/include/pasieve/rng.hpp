#pragma once

#include <random>

#include "pasieve/common.hpp"

namespace pasieve {

// All randomness flows through this wrapper so that runs are reproducible
// bit-for-bit across platforms and thread counts. std::mt19937_64 has a
// standardized output sequence; std::*_distribution does not, so the
// distributions below are hand-rolled.
inline u64 splitmix64(u64 x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent stream ids give independent, reproducible generators for
// parallel work (schedule indices, trials, ...).
inline u64 derive_seed(u64 seed, u64 stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0xD1B54A32D192ED03ull + 1));
}

class Rng {
  public:
    explicit Rng(u64 seed, u64 stream = 0) : gen_(derive_seed(seed, stream)) {}

    u64 next() { return gen_(); }

    // uniform in [0,1) with 64 random bits
    Real uniform() { return static_cast<Real>(next()) * 0x1p-64L; }

    // unbiased integer in [lo, hi], rejection on the top band
    i64 uniform_int(i64 lo, i64 hi) {
        u64 span = static_cast<u64>(hi - lo) + 1;
        u64 limit = UINT64_MAX - UINT64_MAX % span;
        u64 v;
        do {
            v = next();
        } while (v >= limit);
        return lo + static_cast<i64>(v % span);
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace pasieve
