#include <doctest.h>

#include <random>

#include "pmda/matrix.hpp"

using namespace pmda;

namespace {

Matrix random_matrix(const FieldPtr& f, size_t rows, size_t cols, std::mt19937_64& rng) {
    Matrix m(f, rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) m.at(i, j) = rng() % f->q();
    return m;
}

Matrix random_nonsingular(const FieldPtr& f, size_t n, std::mt19937_64& rng) {
    while (true) {
        Matrix m = random_matrix(f, n, n, rng);
        if (det(m) != 0) return m;
    }
}

}  // namespace

TEST_CASE("rank basics") {
    auto f = Field::make(13, 1);
    CHECK(rank(Matrix::identity(f, 4)) == 4);

    std::mt19937_64 rng(11);
    Matrix m = random_matrix(f, 4, 5, rng);
    for (size_t j = 0; j < 5; ++j) m.at(3, j) = m.at(1, j);  // duplicate row
    CHECK(rank(m) < 4);

    // Vandermonde on distinct nonzero points
    const std::vector<uint32_t> pts = {2, 3, 5, 7};
    Matrix v(f, 4, 4);
    for (size_t i = 0; i < 4; ++i) {
        uint32_t pw = 1;
        for (size_t j = 0; j < 4; ++j) {
            v.at(i, j) = pw;
            pw = f->mul(pw, pts[i]);
        }
    }
    CHECK(rank(v) == 4);

    for (int t = 0; t < 50; ++t) {
        Matrix m2 = random_matrix(f, 3 + rng() % 4, 3 + rng() % 4, rng);
        CHECK(rank(m2) == rank(m2.transpose()));
    }
}

TEST_CASE("det basics") {
    auto f = Field::make(13, 1);
    CHECK(det(Matrix::identity(f, 5)) == 1);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        Matrix m(f, 2, 2);
        m.at(0, 0) = rng() % 13; m.at(0, 1) = rng() % 13;
        m.at(1, 0) = rng() % 13; m.at(1, 1) = rng() % 13;
        const uint32_t cofactor =
            f->sub(f->mul(m.at(0, 0), m.at(1, 1)), f->mul(m.at(0, 1), m.at(1, 0)));
        CHECK(det(m) == cofactor);
    }

    // multiplicativity on block-diagonal assemblies
    for (int t = 0; t < 20; ++t) {
        const size_t b0 = 1 + rng() % 3, b1 = 1 + rng() % 3;
        Matrix m0 = random_matrix(f, b0, b0, rng), m1 = random_matrix(f, b1, b1, rng);
        Matrix blk(f, b0 + b1, b0 + b1);
        for (size_t i = 0; i < b0; ++i)
            for (size_t j = 0; j < b0; ++j) blk.at(i, j) = m0.at(i, j);
        for (size_t i = 0; i < b1; ++i)
            for (size_t j = 0; j < b1; ++j) blk.at(b0 + i, b0 + j) = m1.at(i, j);
        CHECK(det(blk) == f->mul(det(m0), det(m1)));
    }
    CHECK_THROWS_AS(det(Matrix(f, 2, 3)), NotSquare);
}

TEST_CASE("solve round trips") {
    auto f = Field::make(13, 1);
    std::mt19937_64 rng(17);

    std::vector<uint32_t> b = {3, 1, 4};
    CHECK(solve(Matrix::identity(f, 3), b) == b);

    for (int t = 0; t < 20; ++t) {
        Matrix m = random_nonsingular(f, 6, rng);
        std::vector<uint32_t> rhs(6);
        for (auto& v : rhs) v = rng() % 13;
        const auto x = solve(m, rhs, true);
        CHECK(m.apply(x) == rhs);
    }

    // rank-deficient but consistent: duplicated row
    Matrix m(f, 3, 3);
    m.at(0, 0) = 1; m.at(0, 1) = 2; m.at(0, 2) = 3;
    m.at(1, 0) = 4; m.at(1, 1) = 5; m.at(1, 2) = 6;
    for (size_t j = 0; j < 3; ++j) m.at(2, j) = m.at(0, j);
    std::vector<uint32_t> rhs = {7, 8, 7};
    const auto x = solve(m, rhs);
    CHECK(m.apply(x) == rhs);
    CHECK_THROWS_AS(solve(m, rhs, true), Singular);

    rhs[2] = 9;  // now inconsistent
    CHECK_THROWS_AS(solve(m, rhs), Inconsistent);
}

TEST_CASE("cv_det closed form") {
    auto f7 = Field::make(7, 1);
    CHECK(cv_det({1, 2}, {3}, *f7) == 4);
    CHECK(det(cv_matrix({1, 2}, {3}, f7)) == 4);

    // l = 0 degenerates to a plain Vandermonde determinant
    auto f13 = Field::make(13, 1);
    const std::vector<uint32_t> c = {2, 5, 6};
    uint32_t vd = 1;
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = i + 1; j < c.size(); ++j) vd = f13->mul(vd, f13->sub(c[j], c[i]));
    CHECK(cv_det(c, {}, *f13) == vd);

    CHECK(cv_det({4}, {9}, *f13) == f13->inv(f13->sub(4, 9)));
    CHECK_THROWS_AS(cv_det({1, 2}, {2}, *f13), PoleCollision);

    std::mt19937_64 rng(23);
    for (auto& f : {Field::make(13, 1), Field::make(11, 3)}) {
        for (int t = 0; t < 200; ++t) {
            const size_t n = 1 + rng() % 6;
            const size_t l = rng() % (n + 1);
            std::vector<uint32_t> cs, ds;
            while (cs.size() < n) {
                uint32_t v = rng() % f->q();
                if (std::find(cs.begin(), cs.end(), v) == cs.end()) cs.push_back(v);
            }
            while (ds.size() < l) {
                uint32_t v = rng() % f->q();
                if (std::find(ds.begin(), ds.end(), v) == ds.end() &&
                    std::find(cs.begin(), cs.end(), v) == cs.end())
                    ds.push_back(v);
            }
            CHECK(cv_det(cs, ds, *f) == det(cv_matrix(cs, ds, f)));
        }
    }
}

TEST_CASE("block matrix expansion") {
    auto f = Field::make(13, 1);

    BlockMatrix zeros(f, 2, 2, 2);
    const Matrix z = zeros.expand();
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) CHECK(z.at(i, j) == 0);

    BlockMatrix one(f, 1, 1, 2);
    one.set_diag(0, 0, {3, 7});
    const Matrix d = one.expand();
    CHECK(d.at(0, 0) == 3);
    CHECK(d.at(1, 1) == 7);
    CHECK(d.at(0, 1) == 0);

    std::mt19937_64 rng(29);
    BlockMatrix grid(f, 2, 3, 2);
    std::vector<Matrix> blocks;
    for (size_t r = 0; r < 2; ++r)
        for (size_t c = 0; c < 3; ++c) {
            Matrix b = random_matrix(f, 2, 2, rng);
            grid.set_dense(r, c, b);
            blocks.push_back(std::move(b));
        }
    const Matrix g = grid.expand();
    for (size_t r = 0; r < 2; ++r)
        for (size_t c = 0; c < 3; ++c)
            for (size_t u = 0; u < 2; ++u)
                for (size_t v = 0; v < 2; ++v)
                    CHECK(g.at(r * 2 + u, c * 2 + v) == blocks[r * 3 + c].at(u, v));

    const BlockMatrix sel = grid.select_thick_cols({2, 0});
    const Matrix s = sel.expand();
    for (size_t u = 0; u < 4; ++u) {
        CHECK(s.at(u, 0) == g.at(u, 4));
        CHECK(s.at(u, 2) == g.at(u, 0));
    }
}
