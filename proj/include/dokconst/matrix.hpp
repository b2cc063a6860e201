#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dokconst {

using Integer = mpz_class;
using Rational = mpq_class;

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < m.rows_; ++i) {
            if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> column(std::size_t j) const {
        std::vector<T> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_column(std::size_t j, const std::vector<T>& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix columns(std::size_t first, std::size_t count) const {
        Matrix m(rows_, count);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
        return m;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        T tmp;
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    tmp = aik * b(k, j);
                    c(i, j) += tmp;
                }
            }
        return c;
    }

    friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
        if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
        std::vector<T> out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
                if (v[k] != 0) out[i] += a(i, k) * v[k];
        return out;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix dimension mismatch");
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
        return c;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix dimension mismatch");
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
        return c;
    }

    Matrix scaled(const T& s) const {
        Matrix c = *this;
        for (auto& x : c.data_) x *= s;
        return c;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_identity() const {
        if (!square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }

    const std::vector<T>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix& m);

// Column Hermite form: H = A*U with U unimodular. The first `rank` columns of H
// are in lower echelon form with positive pivots, the rest are zero.
struct ColumnHermite {
    IntMatrix H;
    IntMatrix U;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_rows;
};

ColumnHermite column_hermite(const IntMatrix& a, bool want_transform = true);

// Saturated integer basis (columns) of {x : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& a);

// Canonical basis of the column span of A (echelon columns of the Hermite form).
IntMatrix column_span_basis(const IntMatrix& a);

// Smallest saturated lattice containing the columns of A: Q-span intersected with Z^n.
IntMatrix saturate(const IntMatrix& a);

std::vector<Integer> elementary_divisors(const IntMatrix& a);

bool is_saturated(const IntMatrix& basis);

Integer determinant(const IntMatrix& a);
Rational determinant(const RatMatrix& a);

std::size_t rank(const IntMatrix& a);

std::optional<RatMatrix> inverse(const RatMatrix& a);

// Solve B x = v for integer x, where B has independent columns.
class LatticeSolver {
public:
    explicit LatticeSolver(const IntMatrix& basis);
    std::optional<std::vector<Integer>> solve(const std::vector<Integer>& v) const;
    std::optional<IntMatrix> solve(const IntMatrix& vs) const;
    std::size_t rank() const { return hermite_.rank; }

private:
    ColumnHermite hermite_;
    std::size_t cols_;
};

std::string to_string(const Integer& x);
std::string to_string(const Rational& x);
Rational parse_rational(const std::string& s);

}  // namespace dokconst
