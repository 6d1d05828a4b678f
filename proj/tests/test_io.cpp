#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "conseq/counting.hpp"
#include "conseq/rational.hpp"
#include "json.hpp"

using namespace conseq;

TEST_CASE("rational round trips through text") {
    for (const char* s : {"0", "1", "-7", "3/4", "-3/4", "53/210", "71/720",
                          "110376169593/57105153064960000"}) {
        CHECK(rat_string(parse_rational(s)) == s);
    }
    // non-canonical input is normalized once
    CHECK(rat_string(parse_rational("10/4")) == "5/2");
}

TEST_CASE("report-grade decimal renderings") {
    CHECK(rat_decimal(Rat(1, 3), 30) == "0.333333333333333333333333333333");
    CHECK(rat_decimal(Rat(41, 360), 30) == "0.113888888888888888888888888889");
    CHECK(rat_decimal(Rat(71, 720), 30) == "0.0986111111111111111111111111111");
    CHECK(rat_decimal(Rat(287, 83231), 30) == "0.00344823443188235152767598611094");
    CHECK(rat_decimal(Rat(2, 7), 12) == "0.285714285714");
    CHECK(rat_decimal(Rat(987654321), 4) == "987700000");
    CHECK(rat_decimal(Rat(1, 1024), 10) == "0.0009765625000");
}

TEST_CASE("count tables survive a csv write-read cycle on disk") {
    CountTable t = dp_word_counts(parse_pattern("132"), 4, 7, 2);
    char tmpl[] = "/tmp/conseq_io_XXXXXX";
    char* dir = mkdtemp(tmpl);
    REQUIRE(dir != nullptr);
    std::filesystem::path file = std::filesystem::path(dir) / "table.csv";
    {
        std::ofstream out(file);
        out << t.to_csv();
    }
    std::ifstream in(file);
    std::stringstream buf;
    buf << in.rdbuf();
    CountTable back = CountTable::from_csv(parse_pattern("132"), Universe::words, 4, buf.str());
    for (int n = 0; n <= 7; ++n)
        for (int r = 0; r <= 3; ++r)
            CHECK(back.count(n, r) == t.count(n, r));
    std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt cache entries are ignored") {
    char tmpl[] = "/tmp/conseq_cache_io_XXXXXX";
    char* dir = mkdtemp(tmpl);
    REQUIRE(dir != nullptr);
    setenv("CONSEQ_LAB_CACHE_DIR", dir, 1);

    Pattern v = parse_pattern("132");
    cache_store(dp_perm_counts(v, 6, 1), "dp");
    REQUIRE(cache_load(v, Universe::perms, 0, "dp", 6, 1).has_value());

    // clobber every cache file; loads must fall back to recomputation
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::ofstream out(entry.path(), std::ios::trunc);
        out << "not a count table";
    }
    CHECK_FALSE(cache_load(v, Universe::perms, 0, "dp", 6, 1).has_value());
    CountTable fresh = perm_counts_cached(v, 6, 1);
    CHECK(fresh.count(6, 0) == 296);

    // a cached table whose counts were tampered with is rejected as corrupt
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::ofstream out(entry.path(), std::ios::trunc);
        out << "n,r,count\n0,0,1\n6,0,999\n";
    }
    CHECK_FALSE(cache_load(v, Universe::perms, 0, "dp", 6, 1).has_value());

    unsetenv("CONSEQ_LAB_CACHE_DIR");
    std::filesystem::remove_all(dir);
}

TEST_CASE("cache calls are no-ops without the environment variable") {
    unsetenv("CONSEQ_LAB_CACHE_DIR");
    Pattern v = parse_pattern("123");
    CHECK_FALSE(cache_load(v, Universe::perms, 0, "dp", 5, 1).has_value());
    CHECK_NOTHROW(cache_store(dp_perm_counts(v, 5, 1), "dp"));
    CountTable t = perm_counts_cached(v, 5, 1);
    CHECK(t.count(5, 0) == 70);
}

TEST_CASE("json renderings are valid json in both layouts") {
    CountTable t = dp_perm_counts(parse_pattern("123"), 5, 1);
    nlohmann::json pretty = nlohmann::json::parse(t.to_json(true));
    nlohmann::json compact = nlohmann::json::parse(t.to_json(false));
    CHECK(pretty == compact);
    CHECK(pretty["rows"].size() == 12);
    // pretty printing uses a two-space indent and newlines
    CHECK(t.to_json(true).find('\n') != std::string::npos);
    CHECK(t.to_json(false).find('\n') == std::string::npos);
}
