#include <doctest.h>

#include <random>
#include <set>

#include "pmda/gf.hpp"
#include "pmda/matrix.hpp"

using namespace pmda;

TEST_CASE("prime field construction and arithmetic") {
    auto f = Field::make(13, 1);
    CHECK(f->q() == 13);
    CHECK(f->mul(5, 8) == 1);
    CHECK(f->inv(5) == 8);
    CHECK(f->pow(2, 12) == 1);
    CHECK_THROWS_AS(Field::make(4, 1), NotPrime);
    CHECK_THROWS_AS(f->inv(0), DivisionByZero);
    CHECK_THROWS_AS(f->element(13), OutOfRange);
}

TEST_CASE("smallest irreducible cubic over GF(11)") {
    auto f = Field::make(11, 3);
    CHECK(f->q() == 1331);
    // brute-force root check: a cubic with no roots is irreducible
    const auto& mod = f->modulus();
    REQUIRE(mod.size() == 4);
    CHECK(mod[3] == 1);
    auto eval = [&](uint32_t x) {
        uint64_t acc = 0, pw = 1;
        for (uint32_t c : mod) {
            acc = (acc + static_cast<uint64_t>(c) * pw) % 11;
            pw = pw * x % 11;
        }
        return acc;
    };
    for (uint32_t x = 0; x < 11; ++x) CHECK(eval(x) != 0);
    // no root-free cubic with a smaller tail exists
    const uint32_t tail = mod[0] + 11 * mod[1] + 121 * mod[2];
    for (uint32_t t = 0; t < tail; ++t) {
        const std::vector<uint32_t> cand = {t % 11, (t / 11) % 11, (t / 121) % 11, 1};
        bool has_root = false;
        for (uint32_t x = 0; x < 11 && !has_root; ++x) {
            uint64_t acc = 0, pw = 1;
            for (uint32_t c : cand) {
                acc = (acc + static_cast<uint64_t>(c) * pw) % 11;
                pw = pw * x % 11;
            }
            has_root = acc == 0;
        }
        CHECK(has_root);
    }
}

TEST_CASE("explicit reducible modulus is rejected") {
    // x^2 + 1 = (x+5)(x+8) over GF(13)
    CHECK_THROWS_AS(Field::make(13, 2, std::vector<uint32_t>{1, 0, 1}), ReducibleModulus);
    CHECK_NOTHROW(Field::make(13, 2, std::vector<uint32_t>{2, 0, 1}));
}

TEST_CASE("GF(2^4) spot values") {
    auto f = Field::make(2, 4);
    CHECK(f->modulus() == std::vector<uint32_t>{1, 1, 0, 0, 1});  // x^4 + x + 1
    CHECK(f->pow(2, 4) == 3);                                     // x^4 = x + 1
}

TEST_CASE("field axioms hold on random triples") {
    std::mt19937_64 rng(7);
    for (auto& f : {Field::make(13, 1), Field::make(11, 3), Field::make(2, 4)}) {
        for (int t = 0; t < 1000; ++t) {
            const uint32_t a = rng() % f->q(), b = rng() % f->q(), c = rng() % f->q();
            CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
            CHECK(f->mul(a, 1) == a);
            if (a != 0) CHECK(f->mul(a, f->inv(a)) == 1);
            CHECK(f->add(a, f->neg(a)) == 0);
            CHECK(f->mul(a, b) == f->mul(b, a));
        }
    }
}

TEST_CASE("element wrapper enforces field binding") {
    auto f = Field::make(13, 1);
    auto g = Field::make(11, 1);
    Elem a(5, *f), b(8, *f), c(3, *g);
    CHECK((a * b).v == 1);
    CHECK((a + b).v == 0);
    CHECK(a.inv().v == 8);
    CHECK_THROWS_AS(a + c, FieldMismatch);
}

TEST_CASE("find_subgroup on GF(13)") {
    auto f = Field::make(13, 1);
    Subgroup g = find_subgroup(f, 4, 2);
    CHECK(g.order == 4);
    CHECK(g.generator == 5);
    const auto elems = g.elements();
    CHECK(elems == std::vector<uint32_t>{1, 5, 12, 8});
    CHECK(g.coset_reps.size() == 2);
    CHECK(g.coset_reps[0] == 1);
    // invariants checked by direct exponentiation
    CHECK(f->pow(g.generator, g.order) == 1);
    for (uint32_t k = 1; k < g.order; ++k) CHECK(f->pow(g.generator, k) != 1);
    for (size_t i = 0; i < g.coset_reps.size(); ++i)
        for (size_t j = 0; j < g.coset_reps.size(); ++j)
            if (i != j)
                CHECK(!g.contains(f->div(g.coset_reps[i], g.coset_reps[j])));

    CHECK_THROWS_AS(find_subgroup(f, 4, 4), NoSuchSubgroup);

    // degenerate request: the trivial subgroup already qualifies
    Subgroup t = find_subgroup(f, 1, 1);
    CHECK(t.order == 1);
    CHECK(t.generator == 1);
}

TEST_CASE("subfield basis for GF(11) in GF(11^3)") {
    auto big = Field::make(11, 3);
    auto small = Field::make(11, 1);
    TowerBasis tb = subfield_basis(big, small);
    CHECK(tb.v0 == 1);
    CHECK(tb.v1 == 11);
    CHECK(tb.v2 == 121);
    CHECK(tb.embed(7) == 7);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const uint32_t a = rng() % 11, b = rng() % 11;
        CHECK(big->mul(tb.embed(a), tb.embed(b)) == tb.embed(small->mul(a, b)));
        CHECK(big->add(tb.embed(a), tb.embed(b)) == tb.embed(small->add(a, b)));
    }
    // v0 + xi v1 + xi^2 v2 for xi in {0,1,2}: coordinate matrix is Vandermonde
    Matrix coords(small, 3, 3);
    for (uint32_t xi = 0; xi < 3; ++xi) {
        uint32_t v = big->add(tb.v0, big->add(big->mul(xi, tb.v1),
                                              big->mul(big->mul(xi, xi), tb.v2)));
        const auto c = tb.coords(v);
        for (int j = 0; j < 3; ++j) coords.at(xi, j) = c[j];
    }
    CHECK(rank(coords) == 3);
    CHECK_THROWS_AS(subfield_basis(Field::make(13, 1), small), IncompatibleTower);
    CHECK_THROWS_AS(subfield_basis(big, Field::make(13, 1)), IncompatibleTower);
}

TEST_CASE("subgroup invariants on a non-prime field") {
    auto f = Field::make(11, 3);  // q - 1 = 1330 = 2 * 5 * 7 * 19
    Subgroup g = find_subgroup(f, 7, 3);
    CHECK(g.order == 7);
    CHECK(f->pow(g.generator, 7) == 1);
    std::set<uint32_t> elems;
    for (uint32_t e : g.elements()) elems.insert(e);
    CHECK(elems.size() == 7);
}
