#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "conseq/montecarlo.hpp"
#include "conseq/rational.hpp"

using namespace conseq;

TEST_CASE("generator matches the published reference sequence") {
    // reference outputs of the splitmix64 algorithm for seed 0
    SplitMix64 rng(0);
    CHECK(rng.next() == 16294208416658607535ULL);
    CHECK(rng.next() == 7960286522194355700ULL);
    CHECK(rng.next() == 487617019471545679ULL);
    CHECK(rng.next() == 17909611376780542444ULL);
    CHECK(rng.next() == 1961750202426094747ULL);

    SplitMix64 rng2(424242);
    CHECK(rng2.next() == 14436730839898477291ULL);
    CHECK(rng2.next() == 13498596972625284250ULL);
    CHECK(rng2.next() == 3817912305944005771ULL);
}

TEST_CASE("bounded draws are deterministic and in range") {
    SplitMix64 rng(424242);
    CHECK(rng.bounded(10) == 1);
    CHECK(rng.bounded(10) == 0);
    CHECK(rng.bounded(6) == 1);
    CHECK(rng.bounded(100) == 71);

    SplitMix64 other(7);
    for (int i = 0; i < 1000; ++i) CHECK(other.bounded(17) < 17);
    CHECK_THROWS_AS(other.bounded(0), std::invalid_argument);

    // every residue of a small modulus is reachable
    SplitMix64 cover(5);
    std::vector<bool> seen(5, false);
    for (int i = 0; i < 200; ++i) seen[cover.bounded(5)] = true;
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
}

TEST_CASE("shuffle is reproducible and uniform over positions") {
    std::vector<int> a(10);
    std::iota(a.begin(), a.end(), 0);
    SplitMix64 rng(99);
    fisher_yates(a, rng);
    CHECK(a == std::vector<int>{2, 8, 1, 7, 6, 4, 5, 9, 0, 3});

    std::vector<int> b(6);
    std::iota(b.begin(), b.end(), 0);
    SplitMix64 rng7(7);
    fisher_yates(b, rng7);
    CHECK(b == std::vector<int>{1, 5, 0, 2, 4, 3});

    // the result is always a permutation of the input
    std::vector<int> c(25);
    std::iota(c.begin(), c.end(), 1);
    SplitMix64 rng3(31337);
    fisher_yates(c, rng3);
    std::vector<int> sorted(c);
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> iota(25);
    std::iota(iota.begin(), iota.end(), 1);
    CHECK(sorted == iota);
}

TEST_CASE("monte carlo estimates are bit-reproducible") {
    McResult a = monte_carlo_a(parse_pattern("132"), 6, 100000, 424242);
    McResult b = monte_carlo_a(parse_pattern("132"), 6, 100000, 424242);
    CHECK(a.hits == b.hits);
    CHECK(a.estimate == b.estimate);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.samples == 100000);
    CHECK(a.seed == 424242);

    McResult c = monte_carlo_a(parse_pattern("132"), 6, 100000, 424243);
    CHECK(c.hits != a.hits);  // a different seed explores a different sample
}

TEST_CASE("monte carlo estimate brackets the exact value") {
    McResult r = monte_carlo_a(parse_pattern("132"), 6, 100000, 424242);
    const double exact = rat_double(Rat(53, 210));
    CHECK(std::abs(r.estimate - exact) <= 4.0 * r.stderr_);
    CHECK(r.estimate == static_cast<double>(r.hits) / static_cast<double>(r.samples));
    const double se =
        std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(r.samples));
    CHECK(r.stderr_ == se);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(monte_carlo_a(parse_pattern("132"), 0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(monte_carlo_a(parse_pattern("132"), 3, 0, 1), std::invalid_argument);
}
