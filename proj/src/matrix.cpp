#include "canlink/matrix.hpp"

#include "canlink/errors.hpp"
#include "canlink/poly.hpp"

namespace canlink {

QMat QMat::from_rows(std::vector<std::vector<Rat>> rows) {
    QMat m;
    m.r_ = rows.size();
    m.c_ = rows.empty() ? 0 : rows[0].size();
    for (const auto& row : rows)
        if (row.size() != m.c_) throw PreconditionError("ragged matrix rows");
    m.a_ = std::move(rows);
    return m;
}

QMat QMat::transposed() const {
    QMat t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Rat QMat::det() const {
    if (r_ != c_) throw PreconditionError("determinant of non-square matrix");
    QMat m = *this;
    Rat d(1);
    for (std::size_t col = 0; col < c_; ++col) {
        std::size_t pivot = col;
        while (pivot < r_ && m.at(pivot, col).is_zero()) ++pivot;
        if (pivot == r_) return Rat(0);
        if (pivot != col) {
            std::swap(m.a_[pivot], m.a_[col]);
            d = -d;
        }
        d *= m.at(col, col);
        Rat inv = m.at(col, col).inverse();
        for (std::size_t row = col + 1; row < r_; ++row) {
            if (m.at(row, col).is_zero()) continue;
            Rat f = m.at(row, col) * inv;
            for (std::size_t j = col; j < c_; ++j) m.at(row, j) -= f * m.at(col, j);
        }
    }
    return d;
}

QMat QMat::inverse() const {
    if (r_ != c_) throw PreconditionError("inverse of non-square matrix");
    QMat m = *this;
    QMat inv = identity(r_);
    for (std::size_t col = 0; col < c_; ++col) {
        std::size_t pivot = col;
        while (pivot < r_ && m.at(pivot, col).is_zero()) ++pivot;
        if (pivot == r_) throw PreconditionError("singular matrix");
        if (pivot != col) {
            std::swap(m.a_[pivot], m.a_[col]);
            std::swap(inv.a_[pivot], inv.a_[col]);
        }
        Rat p = m.at(col, col).inverse();
        for (std::size_t j = 0; j < c_; ++j) {
            m.at(col, j) *= p;
            inv.at(col, j) *= p;
        }
        for (std::size_t row = 0; row < r_; ++row) {
            if (row == col || m.at(row, col).is_zero()) continue;
            Rat f = m.at(row, col);
            for (std::size_t j = 0; j < c_; ++j) {
                m.at(row, j) -= f * m.at(col, j);
                inv.at(row, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

QMat operator*(const QMat& a, const QMat& b) {
    if (a.c_ != b.r_) throw PreconditionError("matrix size mismatch");
    QMat m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
        for (std::size_t k = 0; k < a.c_; ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < b.c_; ++j) m.at(i, j) += a.at(i, k) * b.at(k, j);
        }
    return m;
}

Poly linear_change(const Poly& p, const std::vector<std::size_t>& vars,
                   const std::vector<std::vector<Rat>>& M) {
    QMat m = QMat::from_rows(M);
    if (m.rows() != vars.size() || m.cols() != vars.size())
        throw PreconditionError("matrix size does not match variable subset");
    if (m.det().is_zero()) throw PreconditionError("singular change of coordinates");
    std::map<std::size_t, Poly> images;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        Poly img = Poly::zero(p.table());
        for (std::size_t j = 0; j < vars.size(); ++j)
            img = img + Poly::variable(p.table(), vars[j]).scaled(m.at(i, j));
        images.emplace(vars[i], img);
    }
    return p.substituted(images);
}

} // namespace canlink
