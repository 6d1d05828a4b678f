#pragma once

#include <cstdint>
#include <vector>

#include "conseq/pattern.hpp"

namespace conseq {

// Deterministic PRNG with a fixed cross-platform output sequence.  All
// sampling in this project goes through this generator so that a (seed,
// samples) pair pins down the result bit for bit.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform draw from [0, n) via rejection, no modulo bias
    std::uint64_t bounded(std::uint64_t n);
};

// in-place Fisher-Yates shuffle driven by rejection-sampled draws
void fisher_yates(std::vector<int>& a, SplitMix64& rng);

struct McResult {
    double estimate;
    double stderr_;
    long long hits;
    long long samples;
    std::uint64_t seed;
};

// Estimates the avoidance probability for uniform permutations of length
// n + d - 1 (the probability that no window forms an occurrence of v).
McResult monte_carlo_a(const Pattern& v, int n, long long samples, std::uint64_t seed);

}  // namespace conseq
