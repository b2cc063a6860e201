#pragma once

#include "dokconst/group.hpp"
#include "dokconst/matrix.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace dokconst {

// Free Z-module of finite rank with a G-action; matrices act on column coordinates.
class ZGLattice {
public:
    // One matrix per entry of g->generators(), in that order.
    static ZGLattice from_generators(GroupPtr g, const std::vector<IntMatrix>& generator_matrices);
    static ZGLattice from_all(GroupPtr g, std::vector<IntMatrix> matrices);

    const GroupPtr& group() const { return group_; }
    std::size_t rank() const { return rank_; }
    const IntMatrix& action(int g) const { return action_[g]; }
    std::vector<IntMatrix> generator_matrices() const;
    Integer trace(int g) const;

private:
    ZGLattice(GroupPtr g, std::size_t rank, std::vector<IntMatrix> action)
        : group_(std::move(g)), rank_(rank), action_(std::move(action)) {}

    GroupPtr group_;
    std::size_t rank_ = 0;
    std::vector<IntMatrix> action_;
};

struct InvariantPairing {
    RatMatrix gram;
};

struct Sublattice {
    IntMatrix basis;
    std::size_t rank() const { return basis.cols(); }
};

ZGLattice trivial_lattice(const GroupPtr& g);
ZGLattice permutation_lattice(const GroupPtr& g, const ElementSet& h);
ZGLattice direct_sum(const ZGLattice& a, const ZGLattice& b);
ZGLattice tensor(const ZGLattice& a, const ZGLattice& b);
// Dihedral groups only: reflections pick up a sign.
ZGLattice twist_sign(const ZGLattice& a);
int dihedral_parameter(const FiniteGroup& g);
ZGLattice sign_lattice(const GroupPtr& g);
// Columns must span a G-stable sublattice; result carries the action in that basis.
ZGLattice span_sublattice(const ZGLattice& l, const IntMatrix& columns, IntMatrix* basis_out = nullptr);
// Same action conjugated by a unimodular change of basis U (new coordinates y = U^-1 x).
ZGLattice change_basis(const ZGLattice& l, const IntMatrix& u);

ZGLattice restrict_lattice(const ZGLattice& l, const Embedding& e);
ZGLattice induce_lattice(const ZGLattice& l, const Embedding& e);
ZGLattice inflate_lattice(const ZGLattice& l, const Quotient& q, const GroupPtr& ambient);

Sublattice fixed_sublattice(const ZGLattice& l, const ElementSet& h);
ZGLattice fixed_lattice_as_module(const ZGLattice& l, const ElementSet& h);

bool is_positive_definite(const RatMatrix& m);
bool is_invariant(const ZGLattice& l, const RatMatrix& gram);
// Validates symmetry, non-degeneracy and invariance.
InvariantPairing make_pairing(const ZGLattice& l, RatMatrix gram);
InvariantPairing averaged_pairing(const ZGLattice& l, std::optional<std::uint64_t> seed = std::nullopt);
InvariantPairing restrict_pairing(const InvariantPairing& p, const IntMatrix& basis);

Rational gram_determinant(const InvariantPairing& p, const Sublattice& b, const Rational& scale);

// [L : sum of L^H]; nullopt when the sum has lower rank.
std::optional<Integer> sum_of_fixed_index(const ZGLattice& l, const std::vector<ElementSet>& subgroups);

struct D2pMultiplicities {
    long m1 = 0;
    long meps = 0;
    long mtau = 0;
    bool operator==(const D2pMultiplicities&) const = default;
};
D2pMultiplicities rational_multiplicities_d2p(const ZGLattice& l);

// Z-basis of Hom_G(a, b) as rank(b) x rank(a) matrices.
std::vector<IntMatrix> equivariant_maps(const ZGLattice& a, const ZGLattice& b);
std::optional<IntMatrix> find_isomorphism(const ZGLattice& a, const ZGLattice& b, std::uint64_t seed,
                                          int budget = 4000);

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps);

}  // namespace dokconst
