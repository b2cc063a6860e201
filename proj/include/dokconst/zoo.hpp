#pragma once

#include "dokconst/dokchitser.hpp"

#include <string>
#include <vector>

namespace dokconst {

// Shared D_2p instance so zoo lattices for the same p can be combined.
GroupPtr dihedral_group(int p);

const std::vector<std::string>& zoo_names();

struct ZooEntry {
    std::string name;
    ZGLattice lattice;
    Rational expected_constant;
    Integer expected_index;
};

ZooEntry zoo_lattice(int p, const std::string& name);
ZGLattice zoo_lattice(const GroupPtr& g, const std::string& name);

Relation standard_relation(int p);
Relation standard_relation(const GroupPtr& g);

// a, b acting on A' in the basis of consecutive differences starting at b^((p-1)/2).
IntMatrix cyclotomic_a(int p);
IntMatrix cyclotomic_b(int p);
IntMatrix aprime_difference_basis(int p);

struct ZooRow {
    std::string name;
    Rational constant;
    std::optional<Integer> index;
    Rational I;
    Rational expected_constant;
    std::optional<Integer> expected_index;
    Rational expected_I;
    bool predicted_only = false;
    bool ok = true;
};

// Throws std::runtime_error on any mismatch with the expected table.
std::vector<ZooRow> zoo_table(int p);

Rational expected_I(const ZGLattice& l);

struct ExtensionWitness {
    std::string base;  // "A+rho" or "Aprime+rho"
    ZGLattice lattice;
    IntMatrix basis;
    int submodule_dimension = 0;
    Rational constant;
    Integer index;
    Rational I;
};

struct ExtensionSearchResult {
    int p = 0;
    std::size_t overlattices_a_rho = 0;
    std::size_t overlattices_aprime_rho = 0;
    std::vector<ExtensionWitness> a_rho;       // constant 1/p
    std::vector<ExtensionWitness> aprime_rho;  // constant p
    Rational split_a_rho;
    Rational split_aprime_rho;
};

// Throws std::runtime_error if either witness family is empty or fails the I identity.
ExtensionSearchResult extension_search(int p);
// Computed once per p and shared.
const ExtensionSearchResult& cached_extension_search(int p);

}  // namespace dokconst
