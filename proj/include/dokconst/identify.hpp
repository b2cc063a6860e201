#pragma once

#include "dokconst/ledger.hpp"
#include "dokconst/zoo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dokconst {

// Genus of an indecomposable Z[D_2p]-lattice, principal representative only.
struct GenusType {
    std::string name;     // zoo name, or ext_A_rho / ext_Aprime_rho
    std::string display;  // "A", "A'", "(A,eps)", ...
    D2pMultiplicities character;
    int constant_exponent = 0;  // C_Theta = p^constant_exponent
};
const std::vector<GenusType>& genus_types();

// Lattice for a genus; the two extension genera use extension_search witnesses (p in {3, 5}).
std::optional<ZGLattice> genus_representative(int p, const std::string& name);

struct IdentifyCandidate {
    std::vector<std::string> summands;  // genus names, sorted by genus_types() order
    std::string display;                // e.g. "A + A' + eps"
    std::optional<int> number;          // numbering of the real-quadratic table, when applicable
    Rational constant;
    bool sign_split = false;  // every eps constituent is an eps summand
};

// Multisets of genera with the given character whose constant equals `observed`.
std::vector<IdentifyCandidate> enumerate_candidates(int p, const D2pMultiplicities& m,
                                                    const std::optional<Rational>& observed);

// True when eps^(m_eps) is a direct summand of l.
bool sign_part_splits(const ZGLattice& l);

struct RefinementTrace {
    IdentifyCandidate s_candidate;
    Rational kernel_constant;
    bool kernel_sign_split = false;
    std::vector<IdentifyCandidate> kernel_matches;  // base candidates consistent with the kernel lattice
};

struct IdentifyResult {
    int p = 0;
    D2pMultiplicities character;
    Rational observed_constant;
    std::vector<IdentifyCandidate> from_h;
    std::optional<D2pMultiplicities> s_character;
    std::optional<Rational> s_observed_constant;
    std::vector<RefinementTrace> refinement;
    std::vector<IdentifyCandidate> final;
};

D2pMultiplicities multiplicities_from_ranks(const FieldFixture& f);

// Uses f.refinement when `refinement` is null and the fixture names one.
IdentifyResult identify_galois_module(const FieldFixture& f, const FieldFixture* refinement = nullptr);

}  // namespace dokconst
