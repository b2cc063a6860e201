#pragma once

#include "dokconst/burnside.hpp"
#include "dokconst/lattice.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dokconst {

enum class Method { pairing, injection };

struct DokchitserConstant {
    Rational value;
    Method method = Method::pairing;
};

// Prime factorisation of a nonzero rational, e.g. 1/3 -> {3: -1}; the sign is dropped.
std::map<long, int> factor_rational(const Rational& x);
std::string format_factored(const Rational& x);
int p_adic_order(const Rational& x, long p);
// True when x = p^k for some integer k.
bool is_power_of(const Rational& x, long p);

DokchitserConstant dok_pairing(const ZGLattice& l, const Relation& theta,
                               const std::optional<InvariantPairing>& pairing = std::nullopt);

// Disjoint union of coset spaces G/H, one summand per copy of a class.
struct PermutationSet {
    struct Summand {
        int cls = 0;
        ElementSet subgroup;
        std::vector<int> representatives;  // least element of each coset
        std::vector<int> coset_of;         // element -> coset index
        int identity_coset = 0;
        std::size_t offset = 0;
    };
    std::vector<Summand> summands;
    std::size_t dimension = 0;
};

struct InjectionTarget {
    enum class Kind { nonzero, coprime_to } kind = Kind::nonzero;
    long p = 0;
    static InjectionTarget nonzero() { return {}; }
    static InjectionTarget coprime(long prime) { return {Kind::coprime_to, prime}; }
};

struct InjectionPhi {
    Relation relation;
    PermutationSet source;  // Z[S1], positive coefficients
    PermutationSet target;  // Z[S2], negative coefficients
    IntMatrix matrix;       // target.dimension x source.dimension
    Integer determinant;
};

class InjectionSearchExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

PermutationSet permutation_set(const GroupPtr& g, const std::vector<int>& classes);
IntMatrix permutation_action(const FiniteGroup& g, const PermutationSet& s, int x);
// Z-basis of Hom_G(Z[S1], Z[S2]) from orbit sums.
std::vector<IntMatrix> hom_basis(const FiniteGroup& g, const PermutationSet& s1, const PermutationSet& s2);
bool is_g_map(const InjectionPhi& phi);

InjectionPhi find_injection(const Relation& theta, const InjectionTarget& target, std::uint64_t seed,
                            int budget = 10000);

DokchitserConstant dok_injection(const ZGLattice& l, const Relation& theta,
                                 const std::optional<InjectionPhi>& phi = std::nullopt);

enum class ZpAnswer { yes, unknown };
struct ZpResult {
    ZpAnswer answer = ZpAnswer::unknown;
    std::optional<InjectionPhi> witness;
};
ZpResult is_zp_relation(const Relation& theta, long p, std::uint64_t seed, int budget = 10000);

struct TrivialPrimeCertificate {
    GroupPtr group;
    std::map<int, int> witnesses;  // prime dividing |G| -> class index of N
    std::vector<int> uncertified;
    // Primes not dividing |G| are always certified (N = G).
    bool certifies(long p) const;
};
TrivialPrimeCertificate trivial_prime_certificate(const GroupPtr& g);
bool check_certificate_witness(const FiniteGroup& g, const SubgroupClass& n, long p);

struct DihedralSubgroups {
    ElementSet c2;
    ElementSet c2prime;
    ElementSet cp;
};
DihedralSubgroups dihedral_subgroups(const FiniteGroup& g);

Rational I_invariant(const ZGLattice& l, const Relation& theta);

}  // namespace dokconst
