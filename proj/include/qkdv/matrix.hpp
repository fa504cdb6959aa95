#pragma once

#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace qkdv {

// Small dense exact matrix over the rationals.
class ExactMatrix {
public:
    ExactMatrix() : rows_(0), cols_(0) {}
    ExactMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static ExactMatrix identity(int n) {
        ExactMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Rational& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    friend bool operator==(const ExactMatrix& x, const ExactMatrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

    ExactMatrix operator+(const ExactMatrix& o) const {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        ExactMatrix r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }

    ExactMatrix operator-(const ExactMatrix& o) const {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        ExactMatrix r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }

    ExactMatrix operator*(const ExactMatrix& o) const {
        assert(cols_ == o.rows_);
        ExactMatrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Rational& v = at(i, k);
                if (v.isZero()) continue;
                for (int j = 0; j < o.cols_; ++j) {
                    if (o.at(k, j).isZero()) continue;
                    r.at(i, j) += v * o.at(k, j);
                }
            }
        return r;
    }

    ExactMatrix operator*(const Rational& s) const {
        ExactMatrix r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
        return r;
    }

    std::vector<Rational> apply(const std::vector<Rational>& x) const {
        assert(static_cast<int>(x.size()) == cols_);
        std::vector<Rational> y(rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!at(i, j).isZero() && !x[j].isZero()) y[i] += at(i, j) * x[j];
        return y;
    }

    bool isZero() const {
        for (const auto& v : a_)
            if (!v.isZero()) return false;
        return true;
    }

private:
    int rows_, cols_;
    std::vector<Rational> a_;
};

struct SolveReport {
    bool ok = false;
    std::vector<Rational> x;
    std::vector<int> badRows;  // inconsistent rows (residual nonzero), or empty
    bool rankDeficient = false;
    std::string message;
};

namespace detail {

// Fraction-free (Bareiss) forward elimination on an integer matrix held as
// Rationals. Returns pivot columns; the matrix is modified in place.
inline std::vector<int> bareissEliminate(std::vector<std::vector<Rational>>& m) {
    const int rows = static_cast<int>(m.size());
    const int cols = rows ? static_cast<int>(m[0].size()) : 0;
    std::vector<int> pivotCols;
    Rational prevPivot(1);
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (!m[i][c].isZero()) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < cols; ++j)
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prevPivot;
            m[i][c] = Rational(0);
        }
        prevPivot = m[r][c];
        pivotCols.push_back(c);
        ++r;
    }
    return pivotCols;
}

}  // namespace detail

// Exact linear solve of A x = b. If the system is overdetermined and
// consistent, returns the unique solution; inconsistent rows and column-rank
// deficiency are reported, never silently ignored.
inline SolveReport solveExact(const ExactMatrix& A, const std::vector<Rational>& b) {
    SolveReport rep;
    const int rows = A.rows(), cols = A.cols();
    if (static_cast<int>(b.size()) != rows) {
        rep.message = "dimension mismatch";
        return rep;
    }

    // Clear denominators row by row so elimination is fraction-free.
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
    for (int i = 0; i < rows; ++i) {
        mpz_class l(1);
        for (int j = 0; j < cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), A.at(i, j).denominator().get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), b[i].denominator().get_mpz_t());
        Rational scale{mpz_class(l)};
        for (int j = 0; j < cols; ++j) m[i][j] = A.at(i, j) * scale;
        m[i][cols] = b[i] * scale;
    }

    std::vector<int> pivotCols = detail::bareissEliminate(m);
    const int rank = static_cast<int>(pivotCols.size());
    if (rank < cols || (rank > 0 && pivotCols.back() == cols)) {
        // Either the coefficient matrix is column-rank deficient, or the only
        // new pivot lives in the b column (plainly inconsistent).
        if (rank > 0 && pivotCols.back() == cols) {
            rep.message = "inconsistent system";
            rep.badRows.push_back(rank - 1);
        } else {
            rep.rankDeficient = true;
            rep.message = "coefficient matrix is column-rank deficient";
        }
        return rep;
    }

    // Back substitution on the echelon form.
    std::vector<Rational> x(cols);
    for (int i = cols - 1; i >= 0; --i) {
        Rational s = m[i][cols];
        for (int j = i + 1; j < cols; ++j) s -= m[i][j] * x[j];
        x[i] = s / m[i][i];
    }

    // Verify every original row; surplus rows act as held-out checks.
    for (int i = 0; i < rows; ++i) {
        Rational s;
        for (int j = 0; j < cols; ++j) s += A.at(i, j) * x[j];
        if (s != b[i]) rep.badRows.push_back(i);
    }
    if (!rep.badRows.empty()) {
        rep.message = "inconsistent system";
        return rep;
    }
    rep.ok = true;
    rep.x = std::move(x);
    return rep;
}

inline int rank(const ExactMatrix& A) {
    std::vector<std::vector<Rational>> m(A.rows(), std::vector<Rational>(A.cols()));
    for (int i = 0; i < A.rows(); ++i) {
        mpz_class l(1);
        for (int j = 0; j < A.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), A.at(i, j).denominator().get_mpz_t());
        Rational scale{mpz_class(l)};
        for (int j = 0; j < A.cols(); ++j) m[i][j] = A.at(i, j) * scale;
    }
    return static_cast<int>(detail::bareissEliminate(m).size());
}

inline ExactMatrix inverse(const ExactMatrix& A) {
    if (A.rows() != A.cols()) throw std::domain_error("inverse: not square");
    const int n = A.rows();
    // Rational Gauss-Jordan on [A | I].
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = A.at(i, j);
        m[i][n + i] = Rational(1);
    }
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (!m[i][c].isZero()) { piv = i; break; }
        if (piv < 0) throw std::domain_error("inverse: singular matrix");
        std::swap(m[c], m[piv]);
        Rational inv = m[c][c].inverse();
        for (int j = 0; j < 2 * n; ++j) m[c][j] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == c || m[i][c].isZero()) continue;
            Rational f = m[i][c];
            for (int j = 0; j < 2 * n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    ExactMatrix r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = m[i][n + j];
    return r;
}

}  // namespace qkdv
