#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "conseq/correlation.hpp"
#include "conseq/errors.hpp"
#include "json.hpp"

using namespace conseq;

namespace {

Word w(const std::vector<int>& letters, int k) { return Word(letters, k); }

}  // namespace

TEST_CASE("instance sets") {
    InstanceSet s = instances(parse_pattern("132"), 4);
    REQUIRE(s.words.size() == 4);
    std::vector<std::string> names;
    for (const auto& iw : s.words) names.push_back(word_str(iw));
    CHECK(names == std::vector<std::string>{"132", "142", "143", "243"});
    for (const auto& iw : s.words) CHECK(reduce(iw.letters) == s.v.entries());

    CHECK(instances(parse_pattern("132"), 5).words.size() == 10);
    InstanceSet tiny = instances(Pattern({1, 2}), 2);
    REQUIRE(tiny.words.size() == 1);
    CHECK(word_str(tiny.words[0]) == "12");
    CHECK_THROWS_AS(instances(parse_pattern("132"), 2), std::invalid_argument);
}

TEST_CASE("alpha correlation of two words") {
    Rat half(1, 2);
    Word a = w({1, 3, 2}, 4), b = w({2, 4, 3}, 4);
    // full self-overlap contributes (k/alpha)^3
    CHECK(alpha_correlation(a, a, half, 4) == 512);
    // only the single-letter suffix-prefix match survives here
    CHECK(alpha_correlation(a, b, half, 4) == 8);
    CHECK(alpha_correlation(b, a, half, 4) == 0);
    CHECK(alpha_correlation(w({}, 4), a, half, 4) == 0);
    CHECK_THROWS_AS(alpha_correlation(a, w({1, 2}, 4), half, 4), std::invalid_argument);
    CHECK_THROWS_AS(alpha_correlation(a, a, Rat(3, 2), 4), std::invalid_argument);
    CHECK_THROWS_AS(alpha_correlation(a, a, Rat(0), 4), std::invalid_argument);
}

TEST_CASE("correlation matrix for 132 over [4]") {
    CorrMatrix R = build_R(parse_pattern("132"), 4, Rat(1, 2));
    REQUIRE(R.index.size() == 4);
    const long expected[4][4] = {{512, 0, 0, 8},
                                      {0, 512, 0, 8},
                                      {0, 0, 512, 0},
                                      {0, 0, 0, 512}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(R.entries[i][j] == expected[i][j]);

    CHECK(R.position_of(w({1, 4, 2}, 4)) == 1);
    CHECK_THROWS_WITH_AS(R.position_of(w({2, 3, 4}, 4)), "word not in the index set",
                         std::invalid_argument);

    nlohmann::json j = nlohmann::json::parse(R.to_json());
    CHECK(j["pattern"] == "132");
    CHECK(j["k"] == 4);
    CHECK(j["alpha"] == "1/2");
    CHECK(j["index"] == nlohmann::json({"132", "142", "143", "243"}));
    CHECK(j["entries"][0][0] == "512");
    CHECK(j["entries"][0][3] == "8");
}

TEST_CASE("modified correlation matrices") {
    CorrMatrix R = build_R(parse_pattern("132"), 4, Rat(1, 2));
    Word u = w({1, 3, 2}, 4);
    Word s = w({1, 4, 2}, 4);
    Word t = w({1, 4, 3}, 4);

    CorrMatrix rows = build_R_modified(R, ModVariant::row_u, u, s, t);
    for (int jx = 0; jx < 4; ++jx) CHECK(rows.entries[0][jx] == 1);
    CHECK(rows.entries[1][1] == 512);

    CorrMatrix cols = build_R_modified(R, ModVariant::col_u_t, u, s, t);
    for (int i = 0; i < 4; ++i)
        CHECK(cols.entries[i][0] == alpha_correlation(t, R.index[i], R.alpha, 4));
    CHECK(cols.entries[2][1] == 0);

    CorrMatrix both = build_R_modified(R, ModVariant::both, u, s, t);
    CHECK(both.entries[0][0] == 1);  // u row turned to ones away from the column
    for (int i = 0; i < 4; ++i)
        CHECK(both.entries[i][1] == alpha_correlation(t, R.index[i], R.alpha, 4));
    CHECK(both.entries[3][2] == 0);
}

TEST_CASE("exact determinants") {
    CHECK(det_rational({{Rat(1)}}) == 1);
    CHECK(det_rational({{Rat(1), Rat(2)}, {Rat(3), Rat(4)}}) == -2);
    CHECK(det_rational({{Rat(1, 2), Rat(1, 3)}, {Rat(1, 4), Rat(1, 5)}}) == Rat(1, 60));
    CHECK(det_rational({{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}) == 0);
    // row swaps flip the sign
    CHECK(det_rational({{Rat(3), Rat(4)}, {Rat(1), Rat(2)}}) == 2);

    CorrMatrix R = build_R(parse_pattern("132"), 4, Rat(1, 2));
    CHECK(det_rational(R.entries) == rat_pow(Rat(512), 4));
}

TEST_CASE("waiting-time transform from a cold start") {
    Pattern v12 = Pattern({1, 2});
    T1Solution one_third = expected_alpha_T1(v12, 2, Rat(1, 3), Word({}, 2));
    CHECK(one_third.e == Rat(1, 25));
    T1Solution one_half = expected_alpha_T1(v12, 2, Rat(1, 2), Word({}, 2));
    CHECK(one_half.e == Rat(1, 9));

    Pattern v = parse_pattern("132");
    T1Solution a = expected_alpha_T1(v, 4, Rat(1, 3), Word({}, 4));
    CHECK(a.e == Rat(287, 83231));
    T1Solution b = expected_alpha_T1(v, 4, Rat(1, 2), Word({}, 4));
    CHECK(b.e == Rat(127, 8319));

    Rat total = 0;
    for (const Rat& x : b.x) total += x;
    CHECK(total == b.e);
    CHECK(b.index.size() == 4);
}

TEST_CASE("transforms for later completions decrease") {
    Pattern v = parse_pattern("132");
    Rat t1 = expected_alpha_Tr(v, 4, Rat(1, 2), 1);
    Rat t2 = expected_alpha_Tr(v, 4, Rat(1, 2), 2);
    Rat t3 = expected_alpha_Tr(v, 4, Rat(1, 2), 3);
    CHECK(t1 == Rat(127, 8319));
    CHECK(t2 < t1);
    CHECK(t3 < t2);
    CHECK(t3 > 0);
    CHECK_THROWS_AS(expected_alpha_Tr(v, 4, Rat(1, 2), 0), std::invalid_argument);
}

TEST_CASE("system residuals vanish for every start") {
    Pattern v = parse_pattern("132");
    for (const Rat& alpha : {Rat(1, 3), Rat(1, 2)}) {
        T1SystemReport cold = verify_T1_system(v, 4, alpha, Word({}, 4));
        CHECK(cold.all_zero);
        CHECK(cold.sum_residual == 0);
        CHECK(cold.residuals.size() == 4);
        for (const Word& t : instances(v, 4).words) {
            T1SystemReport rep = verify_T1_system(v, 4, alpha, t);
            CHECK(rep.all_zero);
        }
    }
    T1SystemReport tiny = verify_T1_system(Pattern({1, 2}), 2, Rat(1, 3), Word({}, 2));
    CHECK(tiny.all_zero);
}

TEST_CASE("generating-function values against the certified series") {
    Pattern v = parse_pattern("132");
    const double expected[3] = {0.984733742036302, 0.014914827683204, 0.000344272392129};
    for (int r = 0; r <= 2; ++r) {
        GenfuncResult g = genfunc_value(v, 4, Rat(1, 2), r);
        CHECK(g.within);
        CHECK(std::abs(rat_double(g.value) - expected[r]) < 1e-12);
        CHECK(g.truncation > 0);
        CHECK(g.truncation <= 400);
        CHECK(rat_double(g.tail_bound) <= 1e-15);
        CHECK(rat_double(g.value) >= 0.0);
    }
    // the three cases nearly exhaust the mass at alpha = 1/2
    Rat sum = 0;
    for (int r = 0; r <= 2; ++r) sum += genfunc_value(v, 4, Rat(1, 2), r).value;
    CHECK(rat_double(sum) < 1.0);
    CHECK(rat_double(sum) > 0.9999);
}

TEST_CASE("word-equivalent patterns share every transform") {
    Pattern a = parse_pattern("1342");
    Pattern b = parse_pattern("1432");
    for (const Rat& alpha : {Rat(1, 3), Rat(1, 2)}) {
        for (int r = 0; r <= 1; ++r) {
            GenfuncResult ga = genfunc_value(a, 5, alpha, r);
            GenfuncResult gb = genfunc_value(b, 5, alpha, r);
            CHECK(ga.value == gb.value);
            CHECK(ga.within);
            CHECK(gb.within);
        }
    }
    CHECK(genfunc_value(a, 5, Rat(1, 3), 0).value == Rat(18984375, 37974374));
    CHECK(genfunc_value(a, 5, Rat(1, 2), 0).value == Rat(5000000, 5004997));
    CHECK(genfunc_value(a, 5, Rat(1, 3), 1).value ==
          Rat("106749140625/1442053080691876"));
    CHECK(genfunc_value(a, 5, Rat(1, 2), 1).value ==
          Rat("24970000000/25049994970009"));
}

TEST_CASE("series truncation is bounded by the budget") {
    CHECK_THROWS_AS(genfunc_value(parse_pattern("132"), 4, Rat(999, 1000), 0),
                    budget_error);
}
