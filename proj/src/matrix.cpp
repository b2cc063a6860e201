#include "dokconst/matrix.hpp"

#include <utility>

namespace dokconst {

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
    return r;
}

namespace {

void swap_columns(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void negate_column(IntMatrix& m, std::size_t c) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, c) = -m(i, c);
}

// col_dst -= q * col_src
void axpy_column(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& q) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (m(i, src) != 0) m(i, dst) -= q * m(i, src);
}

// (col_r, col_j) <- (s col_r + t col_j, -b col_r + a col_j)
void combine_columns(IntMatrix& m, std::size_t r, std::size_t j, const Integer& s, const Integer& t,
                     const Integer& a, const Integer& b) {
    Integer x, y;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        x = m(i, r);
        y = m(i, j);
        if (x == 0 && y == 0) continue;
        m(i, r) = s * x + t * y;
        m(i, j) = a * y - b * x;
    }
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

ColumnHermite column_hermite(const IntMatrix& a, bool want_transform) {
    ColumnHermite out;
    out.H = a;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (want_transform) out.U = IntMatrix::identity(n);
    IntMatrix& H = out.H;
    std::size_t r = 0;
    Integer g, s, t, qa, qb;
    for (std::size_t i = 0; i < m && r < n; ++i) {
        for (std::size_t j = r + 1; j < n; ++j) {
            if (H(i, j) == 0) continue;
            if (H(i, r) == 0) {
                swap_columns(H, r, j);
                if (want_transform) swap_columns(out.U, r, j);
                continue;
            }
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), H(i, r).get_mpz_t(), H(i, j).get_mpz_t());
            qa = H(i, r) / g;
            qb = H(i, j) / g;
            combine_columns(H, r, j, s, t, qa, qb);
            if (want_transform) combine_columns(out.U, r, j, s, t, qa, qb);
        }
        if (H(i, r) == 0) continue;
        if (H(i, r) < 0) {
            negate_column(H, r);
            if (want_transform) negate_column(out.U, r);
        }
        for (std::size_t k = 0; k < r; ++k) {
            if (H(i, k) == 0) continue;
            Integer q = floor_div(H(i, k), H(i, r));
            if (q == 0) continue;
            axpy_column(H, k, r, q);
            if (want_transform) axpy_column(out.U, k, r, q);
        }
        out.pivot_rows.push_back(i);
        ++r;
    }
    out.rank = r;
    return out;
}

IntMatrix integer_kernel(const IntMatrix& a) {
    const std::size_t n = a.cols();
    if (a.rows() == 0) return IntMatrix::identity(n);
    ColumnHermite ch = column_hermite(a, true);
    IntMatrix k = ch.U.columns(ch.rank, n - ch.rank);
    return column_span_basis(k);
}

IntMatrix column_span_basis(const IntMatrix& a) {
    ColumnHermite ch = column_hermite(a, false);
    return ch.H.columns(0, ch.rank);
}

IntMatrix saturate(const IntMatrix& a) {
    IntMatrix left = integer_kernel(a.transpose());
    if (left.cols() == 0) return IntMatrix::identity(a.rows());
    return integer_kernel(left.transpose());
}

namespace {

bool is_diagonal(const IntMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && m(i, j) != 0) return false;
    return true;
}

}  // namespace

std::vector<Integer> elementary_divisors(const IntMatrix& a) {
    IntMatrix m = a;
    for (;;) {
        ColumnHermite ch = column_hermite(m, false);
        m = ch.H.columns(0, ch.rank).transpose();
        if (is_diagonal(m)) break;
    }
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
        if (m(i, i) != 0) d.push_back(abs(m(i, i)));
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            Integer g = gcd(d[i], d[j]);
            Integer l = lcm(d[i], d[j]);
            d[i] = g;
            d[j] = l;
        }
    return d;
}

bool is_saturated(const IntMatrix& basis) {
    if (basis.cols() == 0) return true;
    auto d = elementary_divisors(basis);
    if (d.size() != basis.cols()) return false;
    for (const auto& x : d)
        if (x != 1) return false;
    return true;
}

Integer determinant(const IntMatrix& a) {
    if (!a.square()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

Rational determinant(const RatMatrix& a) {
    if (!a.square()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = a.rows();
    RatMatrix m = a;
    Rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m(p, k) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            det = -det;
        }
        det *= m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m(i, k) == 0) continue;
            Rational f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return det;
}

std::size_t rank(const IntMatrix& a) { return column_hermite(a, false).rank; }

std::optional<RatMatrix> inverse(const RatMatrix& a) {
    if (!a.square()) throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = a.rows();
    RatMatrix m = a;
    RatMatrix inv = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m(p, k) == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(k, j), m(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        Rational piv = m(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            m(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m(i, k) == 0) continue;
            Rational f = m(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

LatticeSolver::LatticeSolver(const IntMatrix& basis) : hermite_(column_hermite(basis, true)), cols_(basis.cols()) {
    if (hermite_.rank != cols_) throw std::invalid_argument("lattice basis columns are dependent");
}

std::optional<std::vector<Integer>> LatticeSolver::solve(const std::vector<Integer>& v) const {
    const IntMatrix& H = hermite_.H;
    if (v.size() != H.rows()) throw std::invalid_argument("vector length mismatch");
    std::vector<Integer> r = v;
    std::vector<Integer> y(cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        std::size_t p = hermite_.pivot_rows[c];
        if (r[p] == 0) continue;
        if (!mpz_divisible_p(r[p].get_mpz_t(), H(p, c).get_mpz_t())) return std::nullopt;
        y[c] = r[p] / H(p, c);
        for (std::size_t i = p; i < H.rows(); ++i)
            if (H(i, c) != 0) r[i] -= y[c] * H(i, c);
    }
    for (const auto& x : r)
        if (x != 0) return std::nullopt;
    return hermite_.U * y;
}

std::optional<IntMatrix> LatticeSolver::solve(const IntMatrix& vs) const {
    IntMatrix out(cols_, vs.cols());
    for (std::size_t j = 0; j < vs.cols(); ++j) {
        auto x = solve(vs.column(j));
        if (!x) return std::nullopt;
        out.set_column(j, *x);
    }
    return out;
}

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rational& x) {
    Rational c = x;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
    r.canonicalize();
    return r;
}

}  // namespace dokconst
