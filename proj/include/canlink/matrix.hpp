#ifndef CANLINK_MATRIX_HPP
#define CANLINK_MATRIX_HPP

#include <vector>

#include "canlink/rational.hpp"

namespace canlink {

// Dense rational matrix, just enough linear algebra for coordinate changes
// and quadratic-form diagonalization.
class QMat {
  public:
    QMat() = default;
    QMat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows, std::vector<Rat>(cols)) {}
    static QMat identity(std::size_t n) {
        QMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rat(1);
        return m;
    }
    static QMat from_rows(std::vector<std::vector<Rat>> rows);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Rat& at(std::size_t i, std::size_t j) { return a_[i][j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return a_[i][j]; }

    QMat transposed() const;
    Rat det() const;        // square only
    QMat inverse() const;   // square, det != 0
    friend QMat operator*(const QMat& a, const QMat& b);
    friend bool operator==(const QMat& a, const QMat& b) { return a.a_ == b.a_; }

  private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<std::vector<Rat>> a_;
};

} // namespace canlink

#endif
