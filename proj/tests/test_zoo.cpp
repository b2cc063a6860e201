#include <doctest.h>

#include "dokconst/identify.hpp"
#include "dokconst/zoo.hpp"

using namespace dokconst;

namespace {

Rational pw(long p, int e) {
    Rational r = 1;
    for (int i = 0; i < (e < 0 ? -e : e); ++i) r *= p;
    return e < 0 ? 1 / r : r;
}

// Expected constant exponents and fixed-sum indices, zoo order.
const std::vector<int> kConstExp = {-1, 1, 0, 1, -1, 0, 0, 0};
const std::vector<bool> kIndexIsP = {false, false, false, false, true, false, true, true};

}  // namespace

TEST_CASE("zoo constructions") {
    CHECK(zoo_names().size() == 8);
    auto e = zoo_lattice(3, "Aprime");
    CHECK(e.lattice.rank() == 2);
    CHECK(e.expected_constant == Rational(1, 3));
    CHECK(zoo_lattice(5, "ext_A_eps").lattice.rank() == 5);
    CHECK(zoo_lattice(3, "regular").lattice.rank() == 6);
    CHECK_THROWS(zoo_lattice(3, "B"));
    CHECK_THROWS(zoo_lattice(17, "A"));
    CHECK_THROWS(zoo_lattice(9, "A"));
    CHECK_THROWS(zoo_lattice(dihedral_group(3), "nope"));
}

TEST_CASE("standard relation") {
    auto th = standard_relation(3);
    CHECK(th.element().coefficients() == std::vector<long long>{1, -2, -1, 2});
    CHECK(is_relation(standard_relation(5).element()));
    CHECK_THROWS(standard_relation(2));
    CHECK_THROWS(standard_relation(9));
}

TEST_CASE("zoo table") {
    for (int p : {3, 5, 7, 11, 13}) {
        auto rows = zoo_table(p);
        REQUIRE(rows.size() == 10);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(rows[i].name == zoo_names()[i]);
            CHECK(rows[i].constant == pw(p, kConstExp[i]));
            REQUIRE(rows[i].index.has_value());
            CHECK(*rows[i].index == (kIndexIsP[i] ? p : 1));
            CHECK(rows[i].I == rows[i].expected_I);
        }
        CHECK(rows[8].predicted_only);
        CHECK(rows[8].constant == Rational(1, p));
        CHECK(rows[9].constant == p);
    }
    CHECK_THROWS(zoo_table(17));
}

TEST_CASE("cyclotomic matrices for A'") {
    for (int p : {3, 5, 7}) {
        auto g = dihedral_group(p);
        int rot = -1, refl = -1;
        for (int x : g->generators()) (g->element_order(x) == p ? rot : refl) = x;
        REQUIRE(rot >= 0);
        REQUIRE(refl >= 0);
        // a is the reflection, b the rotation
        std::vector<IntMatrix> gens;
        for (int x : g->generators()) gens.push_back(x == rot ? cyclotomic_b(p) : cyclotomic_a(p));
        auto l = ZGLattice::from_generators(g, gens);
        auto th = standard_relation(p);
        CHECK(dok_pairing(l, th).value == Rational(1, p));
        CHECK(rational_multiplicities_d2p(l) == D2pMultiplicities{0, 0, 1});
        auto d = dihedral_subgroups(*g);
        CHECK(sum_of_fixed_index(l, {d.c2, d.c2prime, d.cp}) == Integer(p));
    }
}

TEST_CASE("extension search") {
    for (int p : {3, 5}) {
        const auto& r = cached_extension_search(p);
        CHECK(r.split_a_rho == p);
        CHECK(r.split_aprime_rho == Rational(1, p));
        REQUIRE_FALSE(r.a_rho.empty());
        REQUIRE_FALSE(r.aprime_rho.empty());
        auto th = standard_relation(p);
        for (const auto& w : r.a_rho) {
            CHECK(w.constant == Rational(1, p));
            CHECK(dok_pairing(w.lattice, th).value == w.constant);
            CHECK(I_invariant(w.lattice, th) == expected_I(w.lattice));
            CHECK(rational_multiplicities_d2p(w.lattice) == D2pMultiplicities{1, 1, 1});
        }
        for (const auto& w : r.aprime_rho) {
            CHECK(w.constant == p);
            CHECK(I_invariant(w.lattice, th) == Rational(p));
        }
    }
    CHECK_THROWS(extension_search(7));
}

TEST_CASE("I identity on the zoo") {
    for (int p : {3, 5, 7}) {
        auto g = dihedral_group(p);
        auto th = standard_relation(p);
        for (const auto& n : zoo_names()) {
            auto l = zoo_lattice(g, n);
            auto m = rational_multiplicities_d2p(l);
            CHECK(I_invariant(l, th) == pw(p, static_cast<int>(m.meps + m.mtau - m.m1)));
        }
    }
}

TEST_CASE("genus representatives") {
    for (const auto& t : genus_types()) {
        auto l = genus_representative(3, t.name);
        REQUIRE(l.has_value());
        CHECK(rational_multiplicities_d2p(*l) == t.character);
        CHECK(dok_pairing(*l, standard_relation(3)).value == pw(3, t.constant_exponent));
    }
    CHECK_FALSE(genus_representative(7, "ext_A_rho").has_value());
    CHECK(genus_representative(7, "A").has_value());
}
