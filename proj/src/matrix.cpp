#include "pmda/matrix.hpp"

#include <algorithm>

namespace pmda {

Matrix Matrix::identity(FieldPtr f, size_t n) {
    Matrix m(std::move(f), n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Matrix Matrix::mul(const Matrix& o) const {
    if (cols_ != o.rows_) throw Error("matrix product dimension mismatch");
    Matrix out(f_, rows_, o.cols_);
    const Field& f = *f_;
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const uint32_t aik = at(i, k);
            if (aik == 0) continue;
            for (size_t j = 0; j < o.cols_; ++j) {
                const uint32_t b = o.at(k, j);
                if (b != 0) out.at(i, j) = f.add(out.at(i, j), f.mul(aik, b));
            }
        }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(f_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

Matrix Matrix::select_cols(const std::vector<size_t>& idx) const {
    Matrix out(f_, rows_, idx.size());
    for (size_t j = 0; j < idx.size(); ++j)
        for (size_t i = 0; i < rows_; ++i) out.at(i, j) = at(i, idx[j]);
    return out;
}

std::vector<uint32_t> Matrix::apply(const std::vector<uint32_t>& x) const {
    if (x.size() != cols_) throw Error("matrix apply dimension mismatch");
    const Field& f = *f_;
    std::vector<uint32_t> out(rows_, 0);
    for (size_t i = 0; i < rows_; ++i) {
        uint32_t acc = 0;
        for (size_t j = 0; j < cols_; ++j) {
            const uint32_t a = at(i, j);
            if (a != 0 && x[j] != 0) acc = f.add(acc, f.mul(a, x[j]));
        }
        out[i] = acc;
    }
    return out;
}

size_t rank(Matrix m) {
    const Field& f = m.field();
    size_t r = 0;
    for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        size_t pivot = r;
        while (pivot < m.rows() && m.at(pivot, c) == 0) ++pivot;
        if (pivot == m.rows()) continue;
        if (pivot != r)
            for (size_t j = c; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(r, j));
        const uint32_t pinv = f.inv(m.at(r, c));
        for (size_t i = r + 1; i < m.rows(); ++i) {
            const uint32_t factor = f.mul(m.at(i, c), pinv);
            if (factor == 0) continue;
            for (size_t j = c; j < m.cols(); ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(r, j)));
        }
        ++r;
    }
    return r;
}

uint32_t det(Matrix m) {
    if (m.rows() != m.cols()) throw NotSquare("determinant of non-square matrix");
    const Field& f = m.field();
    const size_t n = m.rows();
    uint32_t sign = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t pivot = c;
        while (pivot < n && m.at(pivot, c) == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != c) {
            for (size_t j = c; j < n; ++j) std::swap(m.at(pivot, j), m.at(c, j));
            sign = f.neg(sign);
        }
        const uint32_t pinv = f.inv(m.at(c, c));
        for (size_t i = c + 1; i < n; ++i) {
            const uint32_t factor = f.mul(m.at(i, c), pinv);
            if (factor == 0) continue;
            for (size_t j = c; j < n; ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(c, j)));
        }
    }
    uint32_t d = sign;
    for (size_t i = 0; i < n; ++i) d = f.mul(d, m.at(i, i));
    return d;
}

std::vector<uint32_t> solve(Matrix m, std::vector<uint32_t> rhs, bool require_unique) {
    if (rhs.size() != m.rows()) throw Error("solve dimension mismatch");
    const Field& f = m.field();
    const size_t R = m.rows(), C = m.cols();
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < C && r < R; ++c) {
        size_t pivot = r;
        while (pivot < R && m.at(pivot, c) == 0) ++pivot;
        if (pivot == R) continue;
        if (pivot != r) {
            for (size_t j = c; j < C; ++j) std::swap(m.at(pivot, j), m.at(r, j));
            std::swap(rhs[pivot], rhs[r]);
        }
        const uint32_t pinv = f.inv(m.at(r, c));
        for (size_t i = r + 1; i < R; ++i) {
            const uint32_t factor = f.mul(m.at(i, c), pinv);
            if (factor == 0) continue;
            for (size_t j = c; j < C; ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(r, j)));
            rhs[i] = f.sub(rhs[i], f.mul(factor, rhs[r]));
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (size_t i = r; i < R; ++i)
        if (rhs[i] != 0) throw Inconsistent("system has no solution");
    if (require_unique && pivot_col.size() < C)
        throw Singular("system is rank-deficient");
    std::vector<uint32_t> x(C, 0);
    for (size_t k = pivot_col.size(); k-- > 0;) {
        const size_t c = pivot_col[k];
        uint32_t acc = rhs[k];
        for (size_t j = c + 1; j < C; ++j)
            if (m.at(k, j) != 0 && x[j] != 0) acc = f.sub(acc, f.mul(m.at(k, j), x[j]));
        x[c] = f.div(acc, m.at(k, c));
    }
    return x;
}

Matrix invert(Matrix m) {
    if (m.rows() != m.cols()) throw NotSquare("inverse of non-square matrix");
    const Field& f = m.field();
    const size_t n = m.rows();
    Matrix inv = Matrix::identity(m.field_ptr(), n);
    for (size_t c = 0; c < n; ++c) {
        size_t pivot = c;
        while (pivot < n && m.at(pivot, c) == 0) ++pivot;
        if (pivot == n) throw Singular("matrix is singular");
        if (pivot != c)
            for (size_t j = 0; j < n; ++j) {
                std::swap(m.at(pivot, j), m.at(c, j));
                std::swap(inv.at(pivot, j), inv.at(c, j));
            }
        const uint32_t pinv = f.inv(m.at(c, c));
        for (size_t j = 0; j < n; ++j) {
            m.at(c, j) = f.mul(m.at(c, j), pinv);
            inv.at(c, j) = f.mul(inv.at(c, j), pinv);
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == c) continue;
            const uint32_t factor = m.at(i, c);
            if (factor == 0) continue;
            for (size_t j = 0; j < n; ++j) {
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(c, j)));
                inv.at(i, j) = f.sub(inv.at(i, j), f.mul(factor, inv.at(c, j)));
            }
        }
    }
    return inv;
}

Matrix cv_matrix(const std::vector<uint32_t>& c, const std::vector<uint32_t>& d,
                 const FieldPtr& fp) {
    const Field& f = *fp;
    const size_t n = c.size(), l = d.size();
    if (l > n) throw Error("cv_matrix requires l <= n");
    Matrix m(fp, n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < l; ++j) {
            const uint32_t diff = f.sub(c[i], d[j]);
            if (diff == 0) throw PoleCollision("c_i equals d_j");
            m.at(i, j) = f.inv(diff);
        }
        uint32_t pw = 1;
        for (size_t k = 0; k + l < n; ++k) {
            m.at(i, l + k) = pw;
            pw = f.mul(pw, c[i]);
        }
    }
    return m;
}

uint32_t cv_det(const std::vector<uint32_t>& c, const std::vector<uint32_t>& d,
                const Field& f) {
    const size_t n = c.size(), l = d.size();
    if (l > n) throw Error("cv_det requires l <= n");
    uint32_t num = 1;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) num = f.mul(num, f.sub(c[j], c[i]));
    for (size_t i = 0; i < l; ++i)
        for (size_t j = i + 1; j < l; ++j) num = f.mul(num, f.sub(d[i], d[j]));
    uint32_t den = 1;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < l; ++j) {
            const uint32_t diff = f.sub(c[i], d[j]);
            if (diff == 0) throw PoleCollision("c_i equals d_j");
            den = f.mul(den, diff);
        }
    return f.div(num, den);
}

void BlockMatrix::set_diag(size_t r, size_t c, std::vector<uint32_t> d) {
    if (d.size() != ell_) throw Error("diagonal block has wrong length");
    Block& b = blocks_[r * bcols_ + c];
    b.kind = Kind::diag;
    b.diag = std::move(d);
    b.dense.reset();
}

void BlockMatrix::set_dense(size_t r, size_t c, Matrix m) {
    if (m.rows() != ell_ || m.cols() != ell_) throw Error("dense block has wrong shape");
    Block& b = blocks_[r * bcols_ + c];
    b.kind = Kind::dense;
    b.diag.clear();
    b.dense = std::make_shared<const Matrix>(std::move(m));
}

Matrix BlockMatrix::expand() const {
    Matrix out(f_, brows_ * ell_, bcols_ * ell_);
    for (size_t R = 0; R < brows_; ++R)
        for (size_t C = 0; C < bcols_; ++C) {
            const Block& b = block(R, C);
            if (b.kind == Kind::zero) continue;
            if (b.kind == Kind::diag) {
                for (size_t u = 0; u < ell_; ++u)
                    out.at(R * ell_ + u, C * ell_ + u) = b.diag[u];
            } else {
                for (size_t u = 0; u < ell_; ++u)
                    for (size_t v = 0; v < ell_; ++v)
                        out.at(R * ell_ + u, C * ell_ + v) = b.dense->at(u, v);
            }
        }
    return out;
}

BlockMatrix BlockMatrix::select_thick_cols(const std::vector<uint32_t>& sel) const {
    BlockMatrix out(f_, brows_, sel.size(), ell_);
    for (size_t j = 0; j < sel.size(); ++j)
        for (size_t R = 0; R < brows_; ++R)
            out.blocks_[R * sel.size() + j] = block(R, sel[j]);
    return out;
}

}  // namespace pmda
