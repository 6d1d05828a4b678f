#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <string>
#include <vector>

#include "conseq/counting.hpp"
#include "conseq/errors.hpp"
#include "json.hpp"

using namespace conseq;

namespace {

void check_equal_tables(const CountTable& a, const CountTable& b) {
    REQUIRE(a.n_max() == b.n_max());
    REQUIRE(a.r_max() == b.r_max());
    for (int n = 0; n <= a.n_max(); ++n)
        for (int r = 0; r <= a.r_max() + 1; ++r)
            CHECK(a.count(n, r) == b.count(n, r));
}

}  // namespace

TEST_CASE("universe parsing") {
    CHECK(parse_universe("perms") == Universe::perms);
    CHECK(parse_universe("permutations") == Universe::perms);
    CHECK(parse_universe("words") == Universe::words);
    CHECK(universe_str(Universe::words) == "words");
    CHECK_THROWS_AS(parse_universe("sets"), std::invalid_argument);
}

TEST_CASE("avoider counts for 123 up to n = 12") {
    const std::vector<long> expected = {1, 1, 2, 5, 17, 70, 349, 2017,
                                            13358, 99377, 822041, 7477162, 74207209};
    CountTable t = dp_perm_counts(parse_pattern("123"), 12, 1);
    for (int n = 0; n <= 12; ++n) CHECK(t.count(n, 0) == expected[n]);
    t.check_invariants();
}

TEST_CASE("avoider counts for 132 up to n = 12") {
    const std::vector<long> expected = {1, 1, 2, 5, 16, 63, 296, 1623,
                                            10176, 71793, 562848, 4853949, 45664896};
    CountTable t = dp_perm_counts(parse_pattern("132"), 12, 1);
    for (int n = 0; n <= 12; ++n) CHECK(t.count(n, 0) == expected[n]);
}

TEST_CASE("avoider counts for 1342 up to n = 10") {
    const std::vector<long> expected = {1, 1, 2, 6, 23, 110, 630, 4210,
                                            32150, 276210, 2636720};
    CountTable t = dp_perm_counts(parse_pattern("1342"), 10, 1);
    for (int n = 0; n <= 10; ++n) CHECK(t.count(n, 0) == expected[n]);
}

TEST_CASE("dp and brute force agree on permutations") {
    for (const char* s : {"123", "132", "213", "231", "312", "321", "1342", "2143"}) {
        Pattern v = parse_pattern(s);
        CountTable brute = brute_perm_counts(v, 7, 3);
        CountTable dp = dp_perm_counts(v, 7, 3);
        check_equal_tables(brute, dp);
    }
}

TEST_CASE("dp and brute force agree on words") {
    for (const char* s : {"123", "132", "213"}) {
        Pattern v = parse_pattern(s);
        CountTable brute = brute_word_counts(v, 3, 8, 2);
        CountTable dp = dp_word_counts(v, 3, 8, 2);
        check_equal_tables(brute, dp);
    }
    CountTable brute4 = brute_word_counts(parse_pattern("132"), 4, 6, 2);
    CountTable dp4 = dp_word_counts(parse_pattern("132"), 4, 6, 2);
    check_equal_tables(brute4, dp4);
}

TEST_CASE("word occurrence tables for 132 over [3]") {
    CountTable t = dp_word_counts(parse_pattern("132"), 3, 8, 2);
    const std::vector<long> g0 = {1, 3, 9, 26, 75, 216, 622, 1791, 5157};
    const std::vector<long> g1 = {0, 0, 0, 1, 6, 27, 106, 387, 1350};
    const std::vector<long> g2 = {0, 0, 0, 0, 0, 0, 1, 9, 54};
    for (int n = 0; n <= 8; ++n) {
        CHECK(t.count(n, 0) == g0[n]);
        CHECK(t.count(n, 1) == g1[n]);
        CHECK(t.count(n, 2) == g2[n]);
    }
}

TEST_CASE("word occurrence tables for 132 over [4]") {
    CountTable t = dp_word_counts(parse_pattern("132"), 4, 8, 2);
    const std::vector<long> g0 = {1, 4, 16, 60, 224, 834, 3104, 11552, 42992};
    const std::vector<long> g1 = {0, 0, 0, 4, 32, 188, 960, 4544, 20528};
    const std::vector<long> g2 = {0, 0, 0, 0, 0, 2, 32, 288, 2000};
    for (int n = 0; n <= 8; ++n) {
        CHECK(t.count(n, 0) == g0[n]);
        CHECK(t.count(n, 1) == g1[n]);
        CHECK(t.count(n, 2) == g2[n]);
    }
}

TEST_CASE("row sums, overflow bucket, and invariants") {
    CountTable t = dp_perm_counts(parse_pattern("123"), 8, 1);
    for (int n = 0; n <= 8; ++n) CHECK(t.row_sum(n) == t.total_objects(n));
    CHECK(t.total_objects(6) == 720);
    // overflow holds everything with more than r_max occurrences
    Int spread = t.count(6, 0) + t.count(6, 1) + t.overflow(6);
    CHECK(spread == 720);
    CHECK(t.overflow(2) == 0);
    CHECK_NOTHROW(t.check_invariants());

    CountTable w = dp_word_counts(parse_pattern("132"), 3, 6, 2);
    CHECK(w.total_objects(6) == 729);
    CHECK_NOTHROW(w.check_invariants());

    // manual corruption is caught
    CountTable bad = dp_perm_counts(parse_pattern("132"), 5, 1);
    bad.at(4, 0) += 1;
    CHECK_THROWS_AS(bad.check_invariants(), verification_error);
}

TEST_CASE("enumeration caps raise budget errors") {
    CHECK_THROWS_AS(brute_perm_counts(parse_pattern("123"), 11, 1), budget_error);
    CHECK_THROWS_AS(brute_word_counts(parse_pattern("123"), 10, 9, 1), budget_error);
    EnumLimits wide;
    wide.brute_perm_cap = 11;
    CHECK_NOTHROW(brute_perm_counts(parse_pattern("123"), 8, 1, wide));
    CHECK_THROWS_AS(dp_perm_counts(parse_pattern("123"), 63, 1), std::invalid_argument);
    CHECK_THROWS_AS(dp_word_counts(parse_pattern("123"), 63, 5, 1), std::invalid_argument);
}

TEST_CASE("permutation counts recovered from word tables") {
    for (const char* s : {"132", "123"}) {
        Pattern v = parse_pattern(s);
        CountTable direct = dp_perm_counts(v, 8, 2);
        for (int n = 0; n <= 8; ++n)
            for (int r = 0; r <= 2; ++r)
                CHECK(perms_from_words(v, n, r) == direct.count(n, r));
    }
}

TEST_CASE("prefix probabilities") {
    CountTable t = dp_perm_counts(parse_pattern("132"), 10, 1);
    CHECK(prefix_prob(t, 6) == Rat(53, 210));
    CHECK(prefix_prob(t, 0) == 1);
    CHECK(prefix_prob(t, -3) == 1);
    CHECK(prefix_prob(t, 1) == Rat(5, 6));
    CHECK_THROWS_AS(prefix_prob(t, 9), std::invalid_argument);

    CountTable t2 = dp_perm_counts(parse_pattern("132"), 8, 2);
    Rat below2 = prefix_prob(t2, 4, 2);
    Rat below1 = prefix_prob(t2, 4, 1);
    CHECK(below2 >= below1);
    Rat expected(t2.count(6, 0) + t2.count(6, 1), factorial(6));
    expected.canonicalize();
    CHECK(below2 == expected);
    CHECK_THROWS_AS(prefix_prob(t2, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(prefix_prob(t, 4, 3), std::invalid_argument);
}

TEST_CASE("csv round trip preserves counts") {
    CountTable t = dp_word_counts(parse_pattern("132"), 3, 7, 2);
    std::string csv = t.to_csv();
    CHECK(csv.rfind("n,r,count\n", 0) == 0);
    CountTable back = CountTable::from_csv(parse_pattern("132"), Universe::words, 3, csv);
    check_equal_tables(t, back);

    CountTable p = dp_perm_counts(parse_pattern("123"), 9, 3);
    CountTable pback = CountTable::from_csv(parse_pattern("123"), Universe::perms, 0, p.to_csv());
    check_equal_tables(p, pback);
}

TEST_CASE("csv parser rejects malformed input") {
    Pattern v = parse_pattern("132");
    CHECK_THROWS_AS(CountTable::from_csv(v, Universe::perms, 0, "bogus"), std::invalid_argument);
    CHECK_THROWS_AS(CountTable::from_csv(v, Universe::perms, 0, "n,r,count\n"), std::invalid_argument);
    CHECK_THROWS_AS(CountTable::from_csv(v, Universe::perms, 0, "n,r,count\n3\n"), std::invalid_argument);
    // counts that cannot be completed to the universe size fail verification
    CHECK_THROWS_AS(CountTable::from_csv(v, Universe::perms, 0, "n,r,count\n0,0,1\n3,0,7\n"),
                    verification_error);
}

TEST_CASE("json serialization carries the full table") {
    CountTable t = dp_word_counts(parse_pattern("132"), 3, 4, 1);
    nlohmann::json j = nlohmann::json::parse(t.to_json());
    CHECK(j["pattern"] == "132");
    CHECK(j["universe"] == "words");
    CHECK(j["k"] == 3);
    CHECK(j["rows"].size() == 5 * 2);
    CHECK(j["rows"][0]["count"] == "1");
    nlohmann::json compact = nlohmann::json::parse(t.to_json(false));
    CHECK(compact == j);

    nlohmann::json jp = nlohmann::json::parse(dp_perm_counts(parse_pattern("123"), 3, 1).to_json());
    CHECK_FALSE(jp.contains("k"));
}

TEST_CASE("cache round trip honors the environment variable") {
    char tmpl[] = "/tmp/conseq_cache_XXXXXX";
    char* dir = mkdtemp(tmpl);
    REQUIRE(dir != nullptr);
    setenv("CONSEQ_LAB_CACHE_DIR", dir, 1);

    Pattern v = parse_pattern("132");
    CHECK_FALSE(cache_load(v, Universe::perms, 0, "dp", 6, 1).has_value());
    CountTable t = dp_perm_counts(v, 6, 1);
    cache_store(t, "dp");
    auto hit = cache_load(v, Universe::perms, 0, "dp", 6, 1);
    REQUIRE(hit.has_value());
    check_equal_tables(t, *hit);
    // different shape misses
    CHECK_FALSE(cache_load(v, Universe::perms, 0, "dp", 7, 1).has_value());
    CHECK_FALSE(cache_load(v, Universe::perms, 0, "brute", 6, 1).has_value());

    CountTable cached = perm_counts_cached(v, 6, 1);
    check_equal_tables(t, cached);
    CountTable wcached = word_counts_cached(v, 3, 6, 1);
    check_equal_tables(wcached, dp_word_counts(v, 3, 6, 1));

    unsetenv("CONSEQ_LAB_CACHE_DIR");
    CHECK_FALSE(cache_load(v, Universe::perms, 0, "dp", 6, 1).has_value());
}
