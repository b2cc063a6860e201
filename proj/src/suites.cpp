#include "dokconst/suites.hpp"

#include "dokconst/zoo.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace dokconst {

namespace {

using Rng = std::mt19937_64;

struct TrialContext {
    Rng& rng;
    std::uint64_t seed;
    bool vacuous = false;
};

// nullopt on success, otherwise a description of the counterexample.
using TrialFn = std::function<std::optional<std::string>(TrialContext&)>;

template <class T>
const T& pick(const std::vector<T>& v, Rng& rng) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool is_dihedral(const FiniteGroup& g) {
    try {
        dihedral_parameter(g);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

ZGLattice sample_and_mix(ZGLattice l, Rng& rng, const std::vector<int>& moduli) {
    if (rng() % 2 == 0) l = random_stable_sublattice(l, rng, Integer(1000), moduli).lattice;
    if (l.rank() > 0) l = change_basis(l, random_unimodular(rng, l.rank(), 2 * static_cast<int>(l.rank())));
    return l;
}

std::string mismatch(const std::string& what, const Rational& a, const Rational& b) {
    return what + ": " + to_string(a) + " != " + to_string(b);
}

std::string describe(const Relation& t, const ZGLattice& l) {
    return " [theta = " + format_element(t.element()) + ", rank " + std::to_string(l.rank()) + ", group " +
           l.group()->descriptor() + "]";
}

Rational dok(const ZGLattice& l, const Relation& t) { return dok_pairing(l, t).value; }

const std::vector<std::string>& general_groups() {
    static const std::vector<std::string> g = {"D2q:3", "D2q:5", "D2q:15", "S:4"};
    return g;
}

ElementSet normal_core(const FiniteGroup& g, const ElementSet& h) {
    ElementSet core = h;
    for (int x = 0; x < g.order(); ++x) core &= g.conjugate_set(h, x);
    return core;
}

const Embedding& d6_in_d30() {
    static const Embedding e = [] {
        auto g = corpus_group("D2q:15");
        for (const auto& c : g->subgroup_classes())
            if (c.order == 6 && !c.is_cyclic) return subgroup_as_group(g, c.representative);
        throw std::logic_error("D30 has no D6 subgroup");
    }();
    return e;
}

// A basis relation up to sign: keeps Z[S1], Z[S2] small for repeated determinants.
Relation small_relation(const GroupPtr& g, Rng& rng) {
    const auto& basis = cached_relation_basis(g).basis;
    if (basis.empty()) return Relation::verify(BurnsideElement(g));
    return pick(basis, rng) * (rng() % 2 ? 1 : -1);
}

std::optional<std::string> multiplicativity(TrialContext& c) {
    auto g = corpus_group(pick(general_groups(), c.rng));
    auto l1 = random_lattice(g, c.rng, 8), l2 = random_lattice(g, c.rng, 8);
    auto t1 = random_relation(g, c.rng), t2 = random_relation(g, c.rng);
    Rational sum = dok(direct_sum(l1, l2), t1), prod = dok(l1, t1) * dok(l2, t1);
    if (sum != prod) return mismatch("C(L1+L2) vs C(L1)C(L2)", sum, prod) + describe(t1, l1);
    Rational comb = dok(l1, t1 + t2), split = dok(l1, t1) * dok(l1, t2);
    if (comb != split) return mismatch("C_{t1+t2} vs C_t1 C_t2", comb, split) + describe(t1, l1);
    return std::nullopt;
}

std::optional<std::string> restriction_induction(TrialContext& c) {
    const Embedding& e = d6_in_d30();
    // Res: C_Theta(Res Gamma) = C_{Ind Theta}(Gamma)
    auto gamma = random_lattice(e.ambient, c.rng, 10);
    auto th = random_relation(e.subgroup, c.rng);
    Rational lhs = dok(restrict_lattice(gamma, e), th), rhs = dok(gamma, transport_relation(th, InduceTo{e}));
    if (lhs != rhs) return mismatch("C_Theta(Res) vs C_{Ind Theta}", lhs, rhs) + describe(th, gamma);
    // Ind: C_Theta(Ind Gamma) = C_{Res Theta}(Gamma)
    auto small = random_lattice(e.subgroup, c.rng, 4);
    auto tg = random_relation(e.ambient, c.rng);
    lhs = dok(induce_lattice(small, e), tg);
    rhs = dok(small, transport_relation(tg, RestrictTo{e}));
    if (lhs != rhs) return mismatch("C_Theta(Ind) vs C_{Res Theta}", lhs, rhs) + describe(tg, small);
    return std::nullopt;
}

std::optional<std::string> fixed_support(TrialContext& c) {
    auto g = corpus_group(pick(general_groups(), c.rng));
    auto th = random_relation(g, c.rng);
    auto l = random_lattice(g, c.rng, 10);
    ElementSet h = g->all_elements();
    const auto& classes = g->subgroup_classes();
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (th.element().coefficient(static_cast<int>(i)) != 0) h &= normal_core(*g, classes[i].representative);
    Rational full = dok(l, th), fixed = dok(fixed_lattice_as_module(l, h), th);
    if (full != fixed) return mismatch("C(L) vs C(L^H)", full, fixed) + describe(th, l);
    return std::nullopt;
}

std::optional<std::string> prime_support(TrialContext& c) {
    static const std::vector<std::string> groups = {"D2q:3", "D2q:5", "D2q:15", "S:4", "prod(D2q:3,C:2)", "C:6"};
    auto g = corpus_group(pick(groups, c.rng));
    static std::mutex mu;
    static std::map<std::string, TrivialPrimeCertificate> certs;
    TrivialPrimeCertificate cert;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = certs.find(g->descriptor());
        if (it == certs.end()) it = certs.emplace(g->descriptor(), trivial_prime_certificate(g)).first;
        cert = it->second;
    }
    auto th = random_relation(g, c.rng);
    auto l = random_lattice(g, c.rng, 10);
    Rational v = dok(l, th);
    for (const auto& [ell, e] : factor_rational(v))
        if (cert.certifies(ell))
            return "certified prime " + std::to_string(ell) + " divides " + to_string(v) + describe(th, l);
    return std::nullopt;
}

int pick_p(Rng& rng, std::initializer_list<int> ps) { return pick(std::vector<int>(ps), rng); }

std::optional<std::string> power_law(TrialContext& c) {
    int p = pick_p(c.rng, {3, 5, 7});
    auto l = random_d2p_lattice(p, c.rng);
    auto th = standard_relation(p) * pick_p(c.rng, {1, -1, 2});
    Rational v = dok(l, th);
    if (!is_power_of(v, p)) return "C = " + to_string(v) + " is not a power of " + std::to_string(p) + describe(th, l);
    return std::nullopt;
}

std::optional<std::string> regconstindex(TrialContext& c) {
    int p = pick_p(c.rng, {3, 5, 7});
    auto l = random_d2p_lattice(p, c.rng);
    auto th = standard_relation(p);
    Rational got = I_invariant(l, th), want = expected_I(l);
    if (got != want) return mismatch("I(L) vs p^(m_eps+m_tau-m_1)", got, want) + describe(th, l);
    return std::nullopt;
}

std::optional<std::string> genus_stability(TrialContext& c) {
    int p = pick_p(c.rng, {3, 5, 7});
    auto l = random_d2p_lattice(p, c.rng);
    std::vector<int> moduli;
    for (int m : {2, 3, 5, 7})
        if (m != p) moduli.push_back(m);
    auto sub = random_stable_sublattice(l, c.rng, Integer(100000), moduli);
    if (sub.index % p == 0) return "sampled index " + to_string(sub.index) + " divisible by p";
    if (sub.index == 1) c.vacuous = true;
    auto th = standard_relation(p);
    Rational a = dok(l, th), b = dok(sub.lattice, th);
    if (a != b) return mismatch("C(L) vs C(L') at index " + to_string(sub.index), a, b) + describe(th, l);
    return std::nullopt;
}

std::optional<std::string> pairing_independence(TrialContext& c) {
    auto g = corpus_group(pick(general_groups(), c.rng));
    auto l = random_lattice(g, c.rng, 10);
    auto th = random_relation(g, c.rng);
    Rational a = dok_pairing(l, th).value, b = dok_pairing(l, th, averaged_pairing(l, c.seed)).value;
    if (a != b) return mismatch("default vs random pairing", a, b) + describe(th, l);
    return std::nullopt;
}

std::optional<std::string> dual_definitions(TrialContext& c) {
    std::optional<ZGLattice> l;
    std::optional<Relation> th;
    if (c.rng() % 2 == 0) {
        int p = pick_p(c.rng, {3, 5});
        l = random_d2p_lattice(p, c.rng);
        th = standard_relation(p);
    } else {
        auto g = corpus_group(pick(general_groups(), c.rng));
        l = random_lattice(g, c.rng, 10);
        th = small_relation(g, c.rng);
    }
    Rational a = dok_pairing(*l, *th).value, b = dok_injection(*l, *th).value;
    if (a != b) return mismatch("pairing vs injection", a, b) + describe(*th, *l);
    if (!th->is_zero()) {
        auto phi = find_injection(*th, InjectionTarget::nonzero(), c.seed);
        Rational d = dok_injection(*l, *th, phi).value;
        if (a != d) return mismatch("pairing vs injection with a sampled phi", a, d) + describe(*th, *l);
    }
    return std::nullopt;
}

std::optional<std::string> zp_vanishing(TrialContext& c) {
    auto g = corpus_group(pick(general_groups(), c.rng));
    auto th = small_relation(g, c.rng);
    auto primes = prime_factors(g->order());
    long ell = pick(primes, c.rng);
    auto res = is_zp_relation(th, ell, c.seed, 64);
    if (res.answer != ZpAnswer::yes) {
        c.vacuous = true;
        return std::nullopt;
    }
    if (!is_g_map(*res.witness) || res.witness->determinant % ell == 0)
        return "witness for l = " + std::to_string(ell) + " is not a G-map with det prime to l";
    auto l = random_lattice(g, c.rng, 10);
    Rational v = dok_injection(l, th, res.witness).value;
    if (p_adic_order(v, ell) != 0)
        return "ord_" + std::to_string(ell) + " of " + to_string(v) + " is nonzero" + describe(th, l);
    return std::nullopt;
}

const std::map<std::string, TrialFn>& registry() {
    static const std::map<std::string, TrialFn> r = {
        {"multiplicativity", multiplicativity},
        {"restriction-induction", restriction_induction},
        {"fixed-support", fixed_support},
        {"prime-support", prime_support},
        {"power-law", power_law},
        {"regconstindex", regconstindex},
        {"genus-stability", genus_stability},
        {"pairing-independence", pairing_independence},
        {"dual-definitions", dual_definitions},
        {"zp-vanishing", zp_vanishing},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "multiplicativity", "restriction-induction", "fixed-support",        "prime-support",    "power-law",
        "regconstindex",    "genus-stability",       "pairing-independence", "dual-definitions", "zp-vanishing"};
    return names;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

GroupPtr corpus_group(const std::string& descriptor) {
    static std::mutex mu;
    static std::map<std::string, GroupPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(descriptor);
    if (it == cache.end()) {
        auto g = build_group(descriptor);
        g->subgroup_classes();
        it = cache.emplace(descriptor, g).first;
    }
    return it->second;
}

const RelationBasis& cached_relation_basis(const GroupPtr& g) {
    static std::mutex mu;
    static std::map<const FiniteGroup*, std::pair<GroupPtr, RelationBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(g.get());
    if (it == cache.end()) it = cache.emplace(g.get(), std::make_pair(g, relation_lattice(g))).first;
    return it->second.second;
}

Relation random_relation(const GroupPtr& g, Rng& rng) {
    const auto& b = cached_relation_basis(g);
    Relation r = Relation::verify(BurnsideElement(g));
    if (b.basis.empty()) return r;
    std::uniform_int_distribution<int> coef(-2, 2);
    while (r.is_zero()) {
        r = Relation::verify(BurnsideElement(g));
        for (const auto& v : b.basis) r = r + v * coef(rng);
    }
    return r;
}

ZGLattice random_d2p_lattice(int p, Rng& rng, std::size_t max_rank) {
    auto g = dihedral_group(p);
    std::vector<ZGLattice> pool;
    for (const auto& n : zoo_names()) pool.push_back(zoo_lattice(g, n));
    if (p == 3 || p == 5) {
        const auto& ext = cached_extension_search(p);
        pool.push_back(pick(ext.a_rho, rng).lattice);
        pool.push_back(pick(ext.aprime_rho, rng).lattice);
    }
    const int summands = std::uniform_int_distribution<int>(1, 3)(rng);
    std::optional<ZGLattice> l;
    for (int k = 0; k < summands; ++k) {
        const std::size_t used = l ? l->rank() : 0;
        std::vector<const ZGLattice*> fits;
        for (const auto& x : pool)
            if (used + x.rank() <= max_rank) fits.push_back(&x);
        if (fits.empty()) break;
        const ZGLattice& x = *pick(fits, rng);
        l = l ? direct_sum(*l, x) : x;
    }
    if (!l) throw std::invalid_argument("max_rank too small for any zoo lattice");
    return sample_and_mix(*l, rng, {2, 3, p});
}

ZGLattice random_lattice(const GroupPtr& g, Rng& rng, std::size_t max_rank) {
    const auto& classes = g->subgroup_classes();
    const bool dihedral = is_dihedral(*g);
    const int summands = std::uniform_int_distribution<int>(1, 2)(rng);
    std::optional<ZGLattice> l;
    for (int k = 0; k < summands; ++k) {
        const std::size_t used = l ? l->rank() : 0;
        std::vector<const SubgroupClass*> fits;
        for (const auto& c : classes)
            if (used + static_cast<std::size_t>(g->order() / c.order) <= max_rank) fits.push_back(&c);
        if (fits.empty()) break;
        ZGLattice x = permutation_lattice(g, pick(fits, rng)->representative);
        if (dihedral && rng() % 2 == 0) x = twist_sign(x);
        l = l ? direct_sum(*l, x) : x;
    }
    if (!l) throw std::invalid_argument("max_rank too small for any permutation lattice");
    return sample_and_mix(*l, rng, {2, 3, 5});
}

SuiteResult run_suite(const std::string& name, std::size_t trials, std::uint64_t seed, unsigned threads) {
    auto it = registry().find(name);
    if (it == registry().end()) throw std::invalid_argument("unknown suite: " + name);
    const TrialFn& fn = it->second;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));

    struct Outcome {
        std::optional<std::string> failure;
        bool vacuous = false;
    };
    std::vector<Outcome> out(trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < trials; i = next++) {
            const std::uint64_t s = trial_seed(seed, i);
            Rng rng(s);
            TrialContext ctx{rng, s};
            try {
                out[i].failure = fn(ctx);
            } catch (const std::exception& e) {
                out[i].failure = std::string("exception: ") + e.what();
            }
            out[i].vacuous = ctx.vacuous;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SuiteResult r;
    r.name = name;
    r.seed = seed;
    r.trials = trials;
    for (std::size_t i = 0; i < trials; ++i) {
        if (out[i].failure) {
            r.failures.push_back({i, trial_seed(seed, i), *out[i].failure});
        } else {
            ++r.passed;
            if (out[i].vacuous) ++r.vacuous;
        }
    }
    return r;
}

}  // namespace dokconst
