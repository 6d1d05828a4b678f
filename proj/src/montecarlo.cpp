#include "conseq/montecarlo.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace conseq {

std::uint64_t SplitMix64::bounded(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("bounded draw needs n >= 1");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        std::uint64_t r = next();
        if (r >= threshold) return r % n;
    }
}

void fisher_yates(std::vector<int>& a, SplitMix64& rng) {
    for (std::size_t i = a.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(a[i - 1], a[j]);
    }
}

McResult monte_carlo_a(const Pattern& v, int n, long long samples, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const int d = v.size();
    const int len = n + d - 1;
    const std::vector<int> pos = value_positions(v);

    SplitMix64 rng(seed);
    std::vector<int> p(len);
    long long hits = 0;
    for (long long s = 0; s < samples; ++s) {
        std::iota(p.begin(), p.end(), 1);
        fisher_yates(p, rng);
        bool clean = true;
        for (int i = 0; clean && i + d <= len; ++i) {
            if (window_ordered(p, i, pos)) clean = false;
        }
        if (clean) ++hits;
    }
    double est = static_cast<double>(hits) / static_cast<double>(samples);
    double se = std::sqrt(est * (1.0 - est) / static_cast<double>(samples));
    return McResult{est, se, hits, samples, seed};
}

}  // namespace conseq
