#include <doctest.h>

#include "dokconst/dokchitser.hpp"
#include "dokconst/zoo.hpp"

#include <random>

using namespace dokconst;

namespace {

// Direct evaluation of prod det((1/|H|) <,> | L^H)^{coeff}, with the pairing built by hand.
Rational by_hand(const ZGLattice& l, const Relation& theta) {
    const auto& g = *l.group();
    RatMatrix gram(l.rank(), l.rank());
    for (int x = 0; x < g.order(); ++x) {
        RatMatrix a = to_rational(l.action(x));
        gram = gram + a.transpose() * a;
    }
    Rational out = 1;
    for (const auto& c : g.subgroup_classes()) {
        long long k = theta.element().coefficient(c.index);
        if (k == 0) continue;
        // fixed vectors: kernel of stacked (h - 1)
        IntMatrix stacked(l.rank() * c.elements.size(), l.rank());
        std::size_t row = 0;
        for (int h : c.elements) {
            IntMatrix d = l.action(h) - IntMatrix::identity(l.rank());
            for (std::size_t i = 0; i < d.rows(); ++i, ++row)
                for (std::size_t j = 0; j < d.cols(); ++j) stacked(row, j) = d(i, j);
        }
        RatMatrix b = to_rational(integer_kernel(stacked));
        Rational det = determinant((b.transpose() * gram * b).scaled(Rational(1, c.order)));
        for (long long i = 0; i < (k < 0 ? -k : k); ++i) out = k > 0 ? Rational(out * det) : Rational(out / det);
    }
    return out;
}

}  // namespace

TEST_CASE("factorisation helpers") {
    CHECK(factor_rational(Rational(1, 3)) == std::map<long, int>{{3, -1}});
    CHECK(factor_rational(Rational(-12, 5)) == std::map<long, int>{{2, 2}, {3, 1}, {5, -1}});
    CHECK(factor_rational(Rational(1)).empty());
    CHECK(format_factored(Rational(1, 3)) == "3^-1");
    CHECK(format_factored(Rational(1)) == "1");
    CHECK(p_adic_order(Rational(9, 2), 3) == 2);
    CHECK(p_adic_order(Rational(9, 2), 2) == -1);
    CHECK(is_power_of(Rational(1, 25), 5));
    CHECK(is_power_of(Rational(1), 7));
    CHECK_FALSE(is_power_of(Rational(15), 5));
    CHECK_FALSE(is_power_of(Rational(-5), 5));
}

TEST_CASE("pairing definition on D6") {
    auto g = dihedral_group(3);
    auto th = standard_relation(3);
    CHECK(dok_pairing(trivial_lattice(g), th).value == Rational(1, 3));
    CHECK(dok_pairing(sign_lattice(g), th).value == 3);
    for (int p : {3, 5, 7}) {
        auto gp = dihedral_group(p);
        CHECK(dok_pairing(permutation_lattice(gp, dihedral_subgroups(*gp).c2), standard_relation(p)).value == 1);
    }
    for (const auto& n : zoo_names()) {
        auto l = zoo_lattice(g, n);
        CHECK(dok_pairing(l, th).value == by_hand(l, th));
    }
    CHECK(dok_pairing(trivial_lattice(g), Relation::verify(BurnsideElement(g))).value == 1);
}

TEST_CASE("injection definition") {
    auto g = dihedral_group(3);
    auto th = standard_relation(3);
    CHECK(dok_injection(trivial_lattice(g), th).value == Rational(1, 3));
    CHECK(dok_injection(zoo_lattice(g, "Aprime"), th).value == Rational(1, 3));
    auto phi1 = find_injection(th, InjectionTarget::nonzero(), 1);
    auto phi2 = find_injection(th, InjectionTarget::nonzero(), 2);
    CHECK(is_g_map(phi1));
    CHECK(phi1.determinant != 0);
    CHECK(phi1.matrix != phi2.matrix);
    for (const auto& n : zoo_names()) {
        auto l = zoo_lattice(g, n);
        CHECK(dok_injection(l, th, phi1).value == dok_injection(l, th, phi2).value);
        CHECK(dok_injection(l, th).value == dok_pairing(l, th).value);
    }
    auto two = find_injection(th, InjectionTarget::coprime(2), 3);
    CHECK(two.determinant % 2 != 0);
    CHECK_THROWS(find_injection(Relation::verify(BurnsideElement(g)), InjectionTarget::nonzero(), 1));

    // a map that is not G-equivariant is rejected
    auto broken = phi1;
    broken.matrix(0, 0) += 1;
    CHECK_FALSE(is_g_map(broken));
}

TEST_CASE("hom basis dimension") {
    // rank of Hom_G(Z[G/H], Z[G/K]) = number of double cosets H\G/K
    for (auto g : {dihedral(3), dihedral(5), symmetric(4)}) {
        const auto& cls = g->subgroup_classes();
        for (const auto& h : cls)
            for (const auto& k : cls) {
                auto s1 = permutation_set(g, {h.index}), s2 = permutation_set(g, {k.index});
                auto basis = hom_basis(*g, s1, s2);
                CHECK(basis.size() == double_cosets(*g, k, h).representatives.size());
            }
    }
}

TEST_CASE("Z_(p) relations") {
    for (int p : {3, 5}) {
        auto r = is_zp_relation(standard_relation(p), 2, 1);
        REQUIRE(r.answer == ZpAnswer::yes);
        CHECK(is_g_map(*r.witness));
        CHECK(r.witness->determinant % 2 != 0);
        CHECK(determinant(r.witness->matrix) == r.witness->determinant);
        // not a Z_(p)-relation: C(1) = 1/p
        CHECK(is_zp_relation(standard_relation(p), p, 1, 200).answer == ZpAnswer::unknown);
    }
}

TEST_CASE("trivial prime certificates") {
    auto d6 = trivial_prime_certificate(dihedral(3));
    CHECK(d6.certifies(2));
    CHECK_FALSE(d6.certifies(3));
    CHECK(d6.certifies(101));
    CHECK(d6.uncertified == std::vector<int>{3});
    auto c6 = trivial_prime_certificate(cyclic(6));
    CHECK(c6.certifies(2));
    CHECK(c6.certifies(3));
    CHECK(c6.uncertified.empty());
    auto d30 = trivial_prime_certificate(dihedral(15));
    CHECK(d30.certifies(2));
    CHECK_FALSE(d30.certifies(3));
    CHECK_FALSE(d30.certifies(5));
    for (auto g : {dihedral(3), dihedral(15), symmetric(4), cyclic(6)}) {
        auto c = trivial_prime_certificate(g);
        for (const auto& [p, cls] : c.witnesses) CHECK(check_certificate_witness(*g, g->subgroup_classes()[cls], p));
    }
}

TEST_CASE("I invariant") {
    for (int p : {3, 5, 7}) {
        auto g = dihedral_group(p);
        auto th = standard_relation(p);
        CHECK(I_invariant(trivial_lattice(g), th) == Rational(1, p));
        CHECK(I_invariant(sign_lattice(g), th) == p);
        CHECK(I_invariant(zoo_lattice(g, "Aprime"), th) == p);
        CHECK(I_invariant(zoo_lattice(g, "A"), th) == p);
    }
}

TEST_CASE("multiplicativity on small inputs") {
    auto g = dihedral_group(5);
    auto th = standard_relation(5);
    auto a = zoo_lattice(g, "A"), e = sign_lattice(g);
    CHECK(dok_pairing(direct_sum(a, e), th).value == dok_pairing(a, th).value * dok_pairing(e, th).value);
    CHECK(dok_pairing(a, th * 2).value == dok_pairing(a, th).value * dok_pairing(a, th).value);
    CHECK(dok_pairing(a, th * -1).value * dok_pairing(a, th).value == 1);
}

TEST_CASE("pairing independence on zoo lattices") {
    for (int p : {3, 5}) {
        auto g = dihedral_group(p);
        auto th = standard_relation(p);
        for (const auto& n : zoo_names()) {
            auto l = zoo_lattice(g, n);
            Rational base = dok_pairing(l, th).value;
            for (std::uint64_t s = 1; s <= 20; ++s) CHECK(dok_pairing(l, th, averaged_pairing(l, s)).value == base);
        }
    }
}
