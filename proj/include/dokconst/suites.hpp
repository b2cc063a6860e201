#pragma once

#include "dokconst/dokchitser.hpp"
#include "dokconst/sampling.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dokconst {

struct TrialFailure {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct SuiteResult {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t passed = 0;
    std::size_t vacuous = 0;  // passed without exercising the property (e.g. no Z_(l) witness found)
    std::vector<TrialFailure> failures;  // ordered by trial index
    bool ok() const { return failures.empty() && passed == trials; }
};

const std::vector<std::string>& suite_names();

// splitmix64 of (seed, trial); independent of scheduling.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

// threads = 0 picks hardware concurrency.
SuiteResult run_suite(const std::string& name, std::size_t trials, std::uint64_t seed, unsigned threads = 0);

// Corpus groups shared by the suites and tests, built once.
GroupPtr corpus_group(const std::string& descriptor);

// Direct sums of zoo lattices (plus extension witnesses for p in {3, 5}), then a random stable
// sublattice with moduli {2, 3, p} and a random unimodular base change.
ZGLattice random_d2p_lattice(int p, std::mt19937_64& rng, std::size_t max_rank = 12);

// Sums of permutation lattices (sign-twisted for dihedral groups), sublattice, base change.
ZGLattice random_lattice(const GroupPtr& g, std::mt19937_64& rng, std::size_t max_rank = 12);

// Random nonzero combination of the relation basis; the zero relation when the rank is 0.
Relation random_relation(const GroupPtr& g, std::mt19937_64& rng);
const RelationBasis& cached_relation_basis(const GroupPtr& g);

}  // namespace dokconst
