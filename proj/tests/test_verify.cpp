#include <doctest.h>

#include <random>

#include "pmda/pmds.hpp"
#include "pmda/verify.hpp"

using namespace pmda;

TEST_CASE("verify_local_mds catches repeated thick columns") {
    auto f = Field::make(13, 1);
    BlockMatrix H(f, 2, 3, 2);
    for (uint32_t i = 0; i < 3; ++i) {
        H.set_diag(0, i, {1, 1});
        H.set_diag(1, i, {uint32_t(i + 2), uint32_t(i + 5)});
    }
    CHECK(verify_local_mds(H, 3, 2).certified());
    H.set_diag(1, 2, H.block(1, 0).diag);  // duplicate thick column 0 and 2
    const PatternReport rep = verify_local_mds(H, 3, 2);
    CHECK(rep.failures.size() == 1);
    CHECK(rep.failures[0].per_group[0] == std::vector<uint32_t>{0, 2});
}

TEST_CASE("verify_local_mds degenerate r = 1") {
    auto f = Field::make(13, 1);
    BlockMatrix H(f, 1, 3, 2);
    H.set_diag(0, 0, {1, 2});
    H.set_diag(0, 1, {3, 4});
    H.set_diag(0, 2, {5, 0});  // singular block
    const PatternReport rep = verify_local_mds(H, 3, 1);
    CHECK(rep.part_i_checks == 3);
    CHECK(rep.failures.size() == 1);
}

TEST_CASE("verify_pmds certifies the flagship c2 instance") {
    const CodeInstance inst = build_c2(2, 4, 2, 2);
    const PatternReport rep = verify_pmds(inst);
    CHECK(rep.part_i_checks == 12);
    CHECK(rep.part_ii_patterns == 216);
    CHECK(rep.certified());
}

TEST_CASE("verify_pmds parallel run matches the sequential one") {
    const CodeInstance inst = build_c2(2, 4, 2, 2);
    VerifyOptions opts;
    opts.jobs = 4;
    const PatternReport rep = verify_pmds(inst, opts);
    CHECK(rep.part_ii_patterns == 216);
    CHECK(rep.certified());
}

TEST_CASE("verify_pmds budget guard and sampling") {
    const CodeInstance inst = build_c2(2, 4, 2, 2);
    VerifyOptions opts;
    opts.budget = 100;
    CHECK_THROWS_AS(verify_pmds(inst, opts), TooLarge);
    opts.exhaustive = false;
    opts.samples = 50;
    const PatternReport rep = verify_pmds(inst, opts);
    CHECK(rep.part_ii_patterns == 50);
    CHECK(rep.certified());
}

TEST_CASE("same-coset theta is caught as a failing pattern") {
    const CodeInstance good = build_c2(2, 4, 2, 2);
    CodeSpec corrupted = good.spec();
    corrupted.theta[1] = corrupted.theta[0];
    CHECK_THROWS_AS(corrupted.validate(), ValidationError);
    const CodeInstance bad = CodeInstance::assemble(corrupted, /*validate=*/false);
    VerifyOptions opts;
    opts.max_failures = 1;
    const PatternReport rep = verify_pmds(bad, opts);
    CHECK(!rep.certified());
    CHECK(rep.failures[0].deficiency > 0);
}

TEST_CASE("R1-violating lambda table fails part i") {
    const CodeInstance good = build_c2(2, 4, 2, 2);
    CodeSpec corrupted = good.spec();
    corrupted.lambda[1] = corrupted.lambda[0];
    const CodeInstance bad = CodeInstance::assemble(corrupted, /*validate=*/false);
    VerifyOptions opts;
    opts.max_failures = 1;
    const PatternReport rep = verify_pmds(bad, opts);
    CHECK(!rep.certified());
}

TEST_CASE("oracle suite passes everywhere") {
    const OracleReport rep = oracle_suite(0x5eed, 100);
    CHECK(rep.lines.size() == 8);
    for (const auto& line : rep.lines) {
        CHECK(line.pass == 100);
        CHECK(line.fail == 0);
    }
}

TEST_CASE("block Vandermonde negative control") {
    // equal blocks make the difference singular and the determinant zero
    auto f = Field::make(13, 1);
    const uint32_t r = 2, ell = 2;
    BlockMatrix bv(f, r, r, ell);
    const std::vector<uint32_t> d = {3, 7};
    for (uint32_t i = 0; i < r; ++i) {
        bv.set_diag(0, i, {1, 1});
        bv.set_diag(1, i, d);
    }
    CHECK(det(bv.expand()) == 0);
}
