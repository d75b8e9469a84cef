#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>

#include "etr/codes.hpp"
#include "oracles.hpp"

using namespace etr;

TEST_CASE("pairing matches the Cantor formula on small arguments") {
    CHECK(pair(0, 0) == 0);
    CHECK(pair(1, 0) == 1);
    CHECK(pair(0, 1) == 2);
    CHECK(pair(2, 0) == 3);
    for (Code a = 0; a < 120; ++a)
        for (Code b = 0; b < 120; ++b) REQUIRE(pair(a, b) == oracle::cantor(a, b));
}

TEST_CASE("unpair inverts pair") {
    for (Code c = 0; c < 50000; ++c) {
        const auto [a, b] = unpair(c);
        REQUIRE(pair(a, b) == c);
        REQUIRE(std::make_pair(a, b) == oracle::uncantor(c));
    }
    for (Code a : {Code{0}, Code{1}, Code{123456789}, Code{3000000000}})
        for (Code b : {Code{0}, Code{7}, Code{987654321}, Code{1000000000}}) CHECK(unpair(pair(a, b)) == std::make_pair(a, b));
}

TEST_CASE("unpair is total near the top of the code range") {
    const Code top = std::numeric_limits<Code>::max();
    for (Code c : {top, top - 1, top / 2, top - 1000}) {
        const auto [a, b] = unpair(c);
        CHECK(pair(a, b) == c);
    }
}

TEST_CASE("pairing overflow is reported") {
    CHECK_THROWS_AS(pair(Code{1} << 33, Code{1} << 33), CodeOverflow);
    CHECK_THROWS_AS(pair(std::numeric_limits<Code>::max(), 1), CodeOverflow);
}

TEST_CASE("sequence coding") {
    CHECK(encode_sequence({}) == 0);
    const std::vector<Code> one{0};
    CHECK(encode_sequence(one) == oracle::cantor(0, 0) + 1);
    const std::vector<Code> two{3, 5};
    CHECK(encode_sequence(two) == oracle::cantor(oracle::cantor(0, 3) + 1, 5) + 1);
    CHECK(decode_sequence(0).empty());
    for (Code c = 0; c < 5000; ++c) REQUIRE(encode_sequence(decode_sequence(c)) == c);
    const std::vector<Code> s{4, 0, 9, 1};
    CHECK(decode_sequence(encode_sequence(s)) == s);
}

TEST_CASE("stage codes address (x, n) as pair(n, x)") {
    CHECK(stage_code(0, 0) == 0);
    CHECK(stage_code(1, 0) == oracle::cantor(0, 1));
    for (Code x = 0; x < 20; ++x)
        for (Natural n = 0; n < 20; ++n) {
            const StageRef r = stage_of(stage_code(x, n));
            REQUIRE(r.x == x);
            REQUIRE(r.n == n);
        }
}
