#include <doctest.h>

#include "dokconst/lattice.hpp"
#include "dokconst/sampling.hpp"
#include "dokconst/zoo.hpp"

#include <random>
#include <set>

using namespace dokconst;

namespace {

std::vector<GroupPtr> corpus() { return {dihedral(3), dihedral(5), dihedral(15), symmetric(4), cyclic(6)}; }

// H-orbits on G/K by walking cosets directly.
int orbit_count(const FiniteGroup& g, const ElementSet& h, const ElementSet& k) {
    auto cosets = left_cosets(g, k);
    std::vector<int> owner(cosets.size(), -1);
    auto coset_of = [&](int x) {
        for (std::size_t i = 0; i < cosets.size(); ++i)
            if (cosets[i].second.test(x)) return static_cast<int>(i);
        return -1;
    };
    int orbits = 0;
    for (std::size_t i = 0; i < cosets.size(); ++i) {
        if (owner[i] >= 0) continue;
        ++orbits;
        for (int x : elements_of(h)) owner[coset_of(g.mul(x, cosets[i].first))] = orbits;
    }
    return orbits;
}

bool isomorphic(const ZGLattice& a, const ZGLattice& b) {
    return a.rank() == b.rank() && find_isomorphism(a, b, 11).has_value();
}

Integer pow2(int e) {
    Integer r = 1;
    for (int i = 0; i < e; ++i) r *= 2;
    return r;
}

}  // namespace

TEST_CASE("permutation lattices") {
    auto d6 = dihedral(3);
    const auto& cls = d6->subgroup_classes();
    CHECK(permutation_lattice(d6, d6->all_elements()).rank() == 1);
    CHECK(permutation_lattice(d6, set_of({d6->identity()})).rank() == 6);
    auto z = permutation_lattice(d6, d6->subgroup_class("C2").representative);
    CHECK(z.rank() == 3);
    std::vector<Integer> chi;
    for (const auto& c : d6->element_classes()) chi.push_back(z.trace(c.front()));
    CHECK(chi == std::vector<Integer>{3, 1, 0});
    CHECK(cls.size() == 4);
}

TEST_CASE("lattice from generators") {
    auto d6 = dihedral(3);
    // generators are a rotation then a reflection
    REQUIRE(d6->generators().size() == 2);
    auto gens = d6->generators();
    bool rot_first = d6->element_order(gens[0]) == 3;
    IntMatrix m1 = IntMatrix::identity(1), mneg = IntMatrix::identity(1).scaled(-1);
    auto eps = ZGLattice::from_generators(d6, rot_first ? std::vector{m1, mneg} : std::vector{mneg, m1});
    for (int x = 0; x < 6; ++x) CHECK(eps.action(x)(0, 0) == sign_lattice(d6).action(x)(0, 0));
    IntMatrix two = IntMatrix::identity(1).scaled(2);
    CHECK_THROWS(ZGLattice::from_generators(d6, {two, m1}));
    // the reflection swaps the two cosets of C3
    IntMatrix swap = IntMatrix::from_rows({{0, 1}, {1, 0}});
    auto rho = ZGLattice::from_generators(d6, rot_first ? std::vector{IntMatrix::identity(2), swap}
                                                        : std::vector{swap, IntMatrix::identity(2)});
    CHECK(isomorphic(rho, zoo_lattice(d6, "rho")));
    CHECK_THROWS(ZGLattice::from_generators(d6, rot_first ? std::vector{swap, swap} : std::vector{swap, swap}));
}

TEST_CASE("homomorphism on random pairs") {
    std::mt19937_64 rng(3);
    int checked = 0;
    for (const auto& g : corpus())
        for (const auto& c : g->subgroup_classes()) {
            auto l = permutation_lattice(g, c.representative);
            if (l.rank() > 12) continue;
            for (int k = 0; k < 40; ++k) {
                int x = rng() % g->order(), y = rng() % g->order();
                CHECK(l.action(x) * l.action(y) == l.action(g->mul(x, y)));
                ++checked;
            }
        }
    CHECK(checked >= 1000);
}

TEST_CASE("lattice algebra") {
    auto d6 = dihedral(3);
    auto z = permutation_lattice(d6, d6->subgroup_class("C2").representative);
    auto t = tensor(z, sign_lattice(d6));
    CHECK(t.rank() == 3);
    int reflection = dihedral_reflection(3, 0);
    CHECK(t.trace(reflection) == -z.trace(reflection));
    CHECK(twist_sign(z).trace(reflection) == -1);
    CHECK_THROWS(twist_sign(trivial_lattice(symmetric(3))));

    IntMatrix cols = IntMatrix::from_rows({{1, 1}, {-1, 0}, {0, -1}});
    auto ap = span_sublattice(z, cols);
    CHECK(ap.rank() == 2);
    CHECK(rational_multiplicities_d2p(ap) == D2pMultiplicities{0, 0, 1});
    IntMatrix bad = IntMatrix::from_rows({{1}, {0}, {0}});
    CHECK_THROWS(span_sublattice(z, bad));
    CHECK_THROWS(direct_sum(z, trivial_lattice(dihedral(5))));

    std::mt19937_64 rng(5);
    auto u = random_unimodular(rng, 3, 6);
    auto zb = change_basis(z, u);
    for (int x = 0; x < 6; ++x) CHECK(zb.trace(x) == z.trace(x));
}

TEST_CASE("fixed sublattices") {
    for (const auto& g : corpus())
        for (const auto& k : g->subgroup_classes()) {
            auto l = permutation_lattice(g, k.representative);
            if (l.rank() > 15) continue;
            for (const auto& h : g->subgroup_classes()) {
                auto f = fixed_sublattice(l, h.representative);
                CHECK(is_saturated(f.basis));
                for (auto d : elementary_divisors(f.basis)) CHECK(d == 1);
                CHECK(static_cast<int>(f.rank()) == orbit_count(*g, h.representative, k.representative));
            }
        }
    auto d6 = dihedral(3);
    auto z = permutation_lattice(d6, d6->subgroup_class("C2").representative);
    CHECK(fixed_sublattice(z, d6->subgroup_class("C3").representative).rank() == 1);
    CHECK(fixed_sublattice(z, set_of({d6->identity()})).basis == IntMatrix::identity(3));
    auto ap = zoo_lattice(d6, "Aprime");
    CHECK(fixed_sublattice(ap, d6->subgroup_class("C3").representative).rank() == 0);
    CHECK(fixed_sublattice(ap, d6->subgroup_class("C2").representative).rank() == 1);
}

TEST_CASE("averaged pairing") {
    auto d6 = dihedral(3);
    auto reg = permutation_lattice(d6, set_of({d6->identity()}));
    CHECK(averaged_pairing(reg).gram == RatMatrix::identity(6).scaled(6));
    CHECK(averaged_pairing(sign_lattice(d6)).gram == RatMatrix::from_rows({{6}}));
    auto ap = zoo_lattice(d6, "Aprime");
    auto p1 = averaged_pairing(ap, 1), p2 = averaged_pairing(ap, 2);
    CHECK(p1.gram != p2.gram);
    CHECK(is_invariant(ap, p1.gram));
    CHECK(is_invariant(ap, p2.gram));
    CHECK(is_positive_definite(p1.gram));
    CHECK_THROWS(make_pairing(ap, RatMatrix::from_rows({{1, 0}, {0, 1}})));
}

TEST_CASE("gram determinants of A'") {
    for (int p : {3, 5, 7, 11}) {
        auto g = dihedral_group(p);
        auto z = permutation_lattice(g, dihedral_subgroups(*g).c2);
        IntMatrix basis;
        auto ap = span_sublattice(z, aprime_difference_basis(p), &basis);
        // the standard form of Z[G/C2] restricted to A'
        InvariantPairing std_form = restrict_pairing(InvariantPairing{RatMatrix::identity(p)}, basis);
        CHECK(is_invariant(ap, std_form.gram));
        Sublattice all{IntMatrix::identity(ap.rank())};
        CHECK(gram_determinant(std_form, all, 1) == p);
        auto fixed = fixed_sublattice(ap, dihedral_subgroups(*g).c2);
        CHECK(gram_determinant(std_form, fixed, 1) == Rational(pow2((p - 1) / 2) * p));
        CHECK(gram_determinant(std_form, fixed_sublattice(ap, dihedral_subgroups(*g).cp), 1) == 1);

        // the same value from the explicit vectors 2e_0 - e_i - e_{p-i}
        const int m = (p - 1) / 2;
        RatMatrix gm(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) gm(i, j) = i == j ? 6 : 4;
        CHECK(determinant(gm) == Rational(pow2(m) * p));
    }
    // basis change does not move the determinant
    std::mt19937_64 rng(9);
    auto d10 = dihedral(5);
    auto reg = permutation_lattice(d10, set_of({d10->identity()}));
    auto pr = averaged_pairing(reg);
    auto f = fixed_sublattice(reg, d10->subgroup_class("C2").representative);
    auto u = random_unimodular(rng, f.rank(), 10);
    CHECK(gram_determinant(pr, f, Rational(1, 2)) == gram_determinant(pr, Sublattice{f.basis * u}, Rational(1, 2)));
}

TEST_CASE("sum of fixed sublattices") {
    for (int p : {3, 5, 7}) {
        auto g = dihedral_group(p);
        auto d = dihedral_subgroups(*g);
        std::vector<ElementSet> hs{d.c2, d.c2prime, d.cp};
        CHECK(sum_of_fixed_index(zoo_lattice(g, "Aprime"), hs) == Integer(p));
        CHECK(sum_of_fixed_index(zoo_lattice(g, "A"), hs) == Integer(1));
        CHECK(sum_of_fixed_index(zoo_lattice(g, "regular"), hs) == Integer(p));
        CHECK_FALSE(sum_of_fixed_index(zoo_lattice(g, "A"), {d.cp}).has_value());
    }
}

TEST_CASE("rational multiplicities") {
    auto d6 = dihedral(3);
    auto z = permutation_lattice(d6, d6->subgroup_class("C2").representative);
    CHECK(rational_multiplicities_d2p(z) == D2pMultiplicities{1, 0, 1});
    CHECK(rational_multiplicities_d2p(zoo_lattice(d6, "Aprime")) == D2pMultiplicities{0, 0, 1});
    for (int p : {3, 5, 7})
        CHECK(rational_multiplicities_d2p(zoo_lattice(dihedral_group(p), "regular")) == D2pMultiplicities{1, 1, 2});
    CHECK_THROWS(rational_multiplicities_d2p(trivial_lattice(symmetric(4))));
}

TEST_CASE("restriction and induction of lattices") {
    auto g = dihedral(15);
    const auto& d6 = [&]() -> const SubgroupClass& {
        for (const auto& c : g->subgroup_classes())
            if (c.order == 6 && !c.is_cyclic) return c;
        throw std::logic_error("no D6");
    }();
    auto e = subgroup_as_group(g, d6.representative);
    auto ind = induce_lattice(trivial_lattice(e.subgroup), e);
    CHECK(ind.rank() == 5);
    auto perm = permutation_lattice(g, d6.representative);
    for (int x = 0; x < g->order(); ++x) CHECK(ind.trace(x) == perm.trace(x));
    auto res = restrict_lattice(perm, e);
    CHECK(res.rank() == 5);
    for (int y = 0; y < e.subgroup->order(); ++y) CHECK(res.trace(y) == perm.trace(e.map[y]));
}

TEST_CASE("sampling") {
    auto d6 = dihedral(3);
    std::mt19937_64 rng(1);
    auto l = zoo_lattice(d6, "regular");
    auto same = random_stable_sublattice(l, rng, 1, {2, 3});
    CHECK(same.index == 1);
    CHECK(same.lattice.rank() == 6);
    for (int k = 0; k < 20; ++k) {
        auto s = random_stable_sublattice(l, rng, 1000, {2, 3});
        CHECK(s.index <= 1000);
        CHECK(abs(determinant(s.basis)) == s.index);
        CHECK(s.lattice.rank() == 6);
    }

    auto one_eps = direct_sum(trivial_lattice(d6), sign_lattice(d6));
    auto overs = overlattices_mod_p(one_eps, 2);
    auto rho = zoo_lattice(d6, "rho");
    bool found = false;
    for (const auto& o : overs) found = found || isomorphic(o.lattice, rho);
    CHECK(found);

    auto ap_one = direct_sum(zoo_lattice(d6, "Aprime"), trivial_lattice(d6));
    auto z = permutation_lattice(d6, dihedral_subgroups(*d6).c2);
    found = false;
    for (const auto& o : overlattices_mod_p(ap_one, 3)) found = found || isomorphic(o.lattice, z);
    CHECK(found);
    // (1/p)L and L itself are always present
    std::set<int> dims;
    for (const auto& o : overs) dims.insert(o.submodule_dimension);
    CHECK(dims.count(0) == 1);
    CHECK(dims.count(2) == 1);
}
