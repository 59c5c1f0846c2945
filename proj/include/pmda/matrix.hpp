#ifndef PMDA_MATRIX_HPP
#define PMDA_MATRIX_HPP

#include <cstddef>
#include <memory>
#include <vector>

#include "pmda/gf.hpp"

namespace pmda {

struct NotSquare : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct Inconsistent : Error { using Error::Error; };
struct PoleCollision : Error { using Error::Error; };

/// Dense row-major matrix over one field.  Immutable by convention once
/// built; the mutating accessors exist for construction code.
class Matrix {
public:
    Matrix(FieldPtr f, size_t rows, size_t cols)
        : f_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static Matrix identity(FieldPtr f, size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const Field& field() const { return *f_; }
    const FieldPtr& field_ptr() const { return f_; }

    uint32_t at(size_t r, size_t c) const { return a_[r * cols_ + c]; }
    uint32_t& at(size_t r, size_t c) { return a_[r * cols_ + c]; }

    Matrix mul(const Matrix& o) const;
    Matrix transpose() const;
    Matrix select_cols(const std::vector<size_t>& idx) const;
    std::vector<uint32_t> apply(const std::vector<uint32_t>& x) const;  // M * x

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    FieldPtr f_;
    size_t rows_, cols_;
    std::vector<uint32_t> a_;
};

size_t rank(Matrix m);
uint32_t det(Matrix m);

/// Returns x with M*x = rhs.  Consistent rank-deficient systems get free
/// variables set to zero; require_unique turns those into Singular.
std::vector<uint32_t> solve(Matrix m, std::vector<uint32_t> rhs, bool require_unique = false);

Matrix invert(Matrix m);

/// Cauchy--Vandermonde matrix [1/(c_i - d_j) | 1 c_i ... c_i^{n-l-1}].
Matrix cv_matrix(const std::vector<uint32_t>& c, const std::vector<uint32_t>& d,
                 const FieldPtr& f);

/// Closed-form determinant of cv_matrix(c, d).
uint32_t cv_det(const std::vector<uint32_t>& c, const std::vector<uint32_t>& d,
                const Field& f);

/// Grid of ell x ell blocks, each zero, diagonal, or dense.
class BlockMatrix {
public:
    enum class Kind { zero, diag, dense };

    struct Block {
        Kind kind = Kind::zero;
        std::vector<uint32_t> diag;             // ell entries when kind == diag
        std::shared_ptr<const Matrix> dense;    // when kind == dense
    };

    BlockMatrix(FieldPtr f, size_t block_rows, size_t block_cols, size_t ell)
        : f_(std::move(f)), brows_(block_rows), bcols_(block_cols), ell_(ell),
          blocks_(block_rows * block_cols) {}

    size_t block_rows() const { return brows_; }
    size_t block_cols() const { return bcols_; }
    size_t ell() const { return ell_; }
    const FieldPtr& field_ptr() const { return f_; }

    const Block& block(size_t r, size_t c) const { return blocks_[r * bcols_ + c]; }
    void set_diag(size_t r, size_t c, std::vector<uint32_t> d);
    void set_dense(size_t r, size_t c, Matrix m);

    Matrix expand() const;
    BlockMatrix select_thick_cols(const std::vector<uint32_t>& sel) const;

private:
    FieldPtr f_;
    size_t brows_, bcols_, ell_;
    std::vector<Block> blocks_;
};

}  // namespace pmda

#endif
