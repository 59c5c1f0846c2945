#include <doctest.h>

#include <set>

#include "pmda/digits.hpp"

using namespace pmda;

TEST_CASE("r-ary expansions, most significant digit first") {
    DigitProfile p23(2, 3);
    CHECK(p23.digits(6) == std::vector<uint32_t>{1, 1, 0});
    CHECK(p23.digits(0) == std::vector<uint32_t>{0, 0, 0});
    DigitProfile p32(3, 2);
    CHECK(p32.digits(7) == std::vector<uint32_t>{2, 1});
    CHECK_THROWS_AS(p23.digits(8), OutOfRange);
}

TEST_CASE("V_{i,t} index sets match the worked partitions") {
    DigitProfile p23(2, 3);
    CHECK(p23.v_indices(1, 0) == std::vector<uint32_t>{0, 1, 4, 5});
    CHECK(p23.v_indices(1, 1) == std::vector<uint32_t>{2, 3, 6, 7});
    CHECK(p23.v_indices(0, 1) == std::vector<uint32_t>{4, 5, 6, 7});
    DigitProfile p32(3, 2);
    CHECK(p32.v_indices(0, 1) == std::vector<uint32_t>{3, 4, 5});
    CHECK(p32.v_indices(1, 2) == std::vector<uint32_t>{2, 5, 8});
    CHECK_THROWS_AS(p23.v_indices(3, 0), OutOfRange);
}

TEST_CASE("v_indices partitions the index range") {
    for (uint32_t r = 2; r <= 4; ++r)
        for (uint32_t m = 1; m <= 6; ++m) {
            DigitProfile p(r, m);
            for (uint32_t i = 0; i < m; ++i) {
                std::set<uint32_t> all;
                for (uint32_t t = 0; t < r; ++t) {
                    const auto v = p.v_indices(i, t);
                    CHECK(v.size() == p.ell / r);
                    all.insert(v.begin(), v.end());
                }
                CHECK(all.size() == p.ell);
            }
            // digits and compose are mutually inverse
            for (uint32_t a = 0; a < p.ell; ++a) CHECK(p.compose(p.digits(a)) == a);
        }
}

TEST_CASE("digit_replace") {
    DigitProfile p(2, 3);
    CHECK(p.replace(0, 0, 1) == 4);
    for (uint32_t a = 0; a < p.ell; ++a)
        for (uint32_t i = 0; i < 3; ++i) {
            CHECK(p.replace(a, i, p.digit(a, i)) == a);
            std::set<uint32_t> companions;
            for (uint32_t t = 0; t < 2; ++t) {
                const uint32_t b = p.replace(a, i, t);
                CHECK(p.digit(b, i) == t);
                companions.insert(b);
            }
            CHECK(companions.size() == 2);
        }
    CHECK_THROWS_AS(p.replace(0, 0, 2), OutOfRange);
}
