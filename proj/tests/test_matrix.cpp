#include <doctest.h>

#include "dokconst/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace dokconst;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
    std::uniform_int_distribution<int> d(-bound, bound);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

// Leibniz expansion; independent of the elimination code.
Integer leibniz(const IntMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    Integer total = 0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (p[i] > p[j]) ++inversions;
        Integer term = inversions % 2 ? -1 : 1;
        for (std::size_t i = 0; i < n; ++i) term *= m(i, p[i]);
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int c = coef(rng);
        for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
    }
    return u;
}

}  // namespace

TEST_CASE("determinants agree with the Leibniz expansion") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + trial % 5;
        IntMatrix m = random_matrix(rng, n, n, 4);
        if (trial % 7 == 0 && n > 1) m.set_column(0, m.column(1));
        Integer expected = leibniz(m);
        CHECK(determinant(m) == expected);
        CHECK(determinant(to_rational(m)) == Rational(expected));
    }
    CHECK(determinant(IntMatrix(0, 0)) == 1);
    CHECK(determinant(RatMatrix(0, 0)) == 1);
}

TEST_CASE("hermite transform is unimodular and reproduces H") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        IntMatrix a = random_matrix(rng, 1 + trial % 4, 1 + trial % 6, 5);
        ColumnHermite ch = column_hermite(a);
        CHECK(a * ch.U == ch.H);
        Integer d = determinant(ch.U);
        CHECK((d == 1 || d == -1));
        CHECK(ch.rank == ch.pivot_rows.size());
        for (std::size_t c = 0; c < ch.rank; ++c) {
            CHECK(ch.H(ch.pivot_rows[c], c) > 0);
            for (std::size_t r = 0; r < ch.pivot_rows[c]; ++r) CHECK(ch.H(r, c) == 0);
        }
        for (std::size_t c = ch.rank; c < a.cols(); ++c)
            for (std::size_t r = 0; r < a.rows(); ++r) CHECK(ch.H(r, c) == 0);
    }
}

TEST_CASE("integer kernel is exact and saturated") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t r = 1 + trial % 3, c = 2 + trial % 5;
        IntMatrix a = random_matrix(rng, r, c, 6);
        // scaling rows must not change the kernel
        IntMatrix scaled = a.scaled(Integer(6));
        IntMatrix k = integer_kernel(scaled);
        CHECK(k.cols() == c - rank(a));
        IntMatrix z = a * k;
        for (std::size_t i = 0; i < z.rows(); ++i)
            for (std::size_t j = 0; j < z.cols(); ++j) CHECK(z(i, j) == 0);
        CHECK(is_saturated(k));
    }
    IntMatrix one = IntMatrix::from_rows({{1, 1, 1}});
    IntMatrix k = integer_kernel(one);
    CHECK(k.cols() == 2);
}

TEST_CASE("elementary divisors survive unimodular conjugation") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 2 + trial % 3;
        std::vector<Integer> d;
        IntMatrix m(n, n);
        Integer run = 1;
        for (std::size_t i = 0; i < n; ++i) {
            run *= 1 + static_cast<int>(rng() % 3);
            d.push_back(run);
            m(i, i) = run;
        }
        IntMatrix x = random_unimodular(rng, n) * m * random_unimodular(rng, n);
        CHECK(elementary_divisors(x) == d);
    }
    IntMatrix b = IntMatrix::from_rows({{2, 0}, {0, 1}, {0, 0}});
    CHECK_FALSE(is_saturated(b));
    IntMatrix s = saturate(b);
    CHECK(is_saturated(s));
    CHECK(s.cols() == 2);
}

TEST_CASE("lattice solver") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        IntMatrix b = random_matrix(rng, 5, 3, 4);
        if (rank(b) != 3) continue;
        LatticeSolver solver(b);
        std::vector<Integer> x(3);
        for (auto& e : x) e = static_cast<int>(rng() % 9) - 4;
        auto got = solver.solve(b * x);
        REQUIRE(got);
        CHECK(*got == x);
    }
    IntMatrix b = IntMatrix::from_rows({{2}, {0}});
    LatticeSolver s(b);
    CHECK_FALSE(s.solve(std::vector<Integer>{1, 0}));
    CHECK_FALSE(s.solve(std::vector<Integer>{2, 1}));
    CHECK(*s.solve(std::vector<Integer>{4, 0}) == std::vector<Integer>{2});
}

TEST_CASE("rational formatting") {
    CHECK(to_string(Rational(1, 3)) == "1/3");
    CHECK(to_string(Rational(6, 2)) == "3");
    CHECK(parse_rational("-4/6") == Rational(-2, 3));
    CHECK_THROWS(parse_rational("x"));
    auto inv = inverse(to_rational(IntMatrix::from_rows({{2, 1}, {1, 1}})));
    REQUIRE(inv);
    CHECK((*inv)(0, 0) == 1);
    CHECK((*inv)(0, 1) == -1);
    CHECK_FALSE(inverse(to_rational(IntMatrix::from_rows({{1, 2}, {2, 4}}))));
}
