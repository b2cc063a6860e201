#pragma once

#include "dokconst/lattice.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace dokconst {

struct SampledSublattice {
    ZGLattice lattice;
    IntMatrix basis;  // columns in the coordinates of the parent lattice
    Integer index;
};

// Full-rank G-stable sublattice M with m L <= M <= L for some m in `moduli` (iterated while the index stays
// within the bound).
SampledSublattice random_stable_sublattice(const ZGLattice& l, std::mt19937_64& rng, const Integer& index_bound,
                                           const std::vector<int>& moduli);

struct Overlattice {
    // An overlattice M with L <= M <= (1/p)L, returned as the isomorphic lattice pM inside L.
    ZGLattice lattice;
    IntMatrix basis;
    int submodule_dimension = 0;
};

// All G-stable overlattices between L and (1/p)L, ordered by submodule dimension then basis.
std::vector<Overlattice> overlattices_mod_p(const ZGLattice& l, int p);

// G-stable subspaces of (Z/p)^n under the reduction of the action, as row-reduced bases.
std::vector<std::vector<std::vector<long>>> invariant_subspaces_mod_p(const ZGLattice& l, int p);

}  // namespace dokconst
