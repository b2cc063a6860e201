#include "dokconst/zoo.hpp"

#include "dokconst/sampling.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace dokconst {

namespace {

void require_odd_prime(int p, int bound) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime, got " + std::to_string(p));
    if (p > bound) throw std::invalid_argument("p = " + std::to_string(p) + " exceeds the supported bound " + std::to_string(bound));
}

Rational pow_p(long p, long e) {
    Rational r = 1;
    for (long k = 0; k < (e < 0 ? -e : e); ++k) r *= p;
    return e < 0 ? Rational(1) / r : r;
}

}  // namespace

GroupPtr dihedral_group(int p) {
    static std::mutex mu;
    static std::map<int, GroupPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    GroupPtr g = dihedral(p);
    cache[p] = g;
    return g;
}

const std::vector<std::string>& zoo_names() {
    static const std::vector<std::string> names = {"triv", "eps", "rho", "A", "Aprime", "ext_Aprime_1", "ext_A_eps",
                                                   "regular"};
    return names;
}

IntMatrix aprime_difference_basis(int p) {
    require_odd_prime(p, 199);
    const int m = (p - 1) / 2;
    IntMatrix b(p, p - 1);
    for (int k = 0; k < p - 1; ++k) {
        b((m + k) % p, k) += 1;
        b((m + k + 1) % p, k) -= 1;
    }
    return b;
}

IntMatrix cyclotomic_a(int p) {
    require_odd_prime(p, 199);
    IntMatrix a(p - 1, p - 1);
    a(0, 0) = -1;
    for (int i = 0; i < p - 1; ++i) a(i, 1) = 1;
    for (int i = 2; i < p - 1; ++i) a(i, p - i) = -1;
    return a;
}

IntMatrix cyclotomic_b(int p) {
    require_odd_prime(p, 199);
    IntMatrix b(p - 1, p - 1);
    for (int k = 0; k + 1 < p - 1; ++k) b(k + 1, k) = 1;
    for (int i = 0; i < p - 1; ++i) b(i, p - 2) = -1;
    return b;
}

ZGLattice zoo_lattice(const GroupPtr& g, const std::string& name) {
    const int p = dihedral_parameter(*g);
    auto d = dihedral_subgroups(*g);
    if (name == "triv") return trivial_lattice(g);
    if (name == "eps") return sign_lattice(g);
    if (name == "rho") return permutation_lattice(g, d.cp);
    if (name == "ext_Aprime_1") return permutation_lattice(g, d.c2);
    if (name == "ext_A_eps") return twist_sign(permutation_lattice(g, d.c2));
    if (name == "regular") return permutation_lattice(g, set_of({g->identity()}));
    if (name == "Aprime") return span_sublattice(permutation_lattice(g, d.c2), aprime_difference_basis(p));
    if (name == "A") return span_sublattice(twist_sign(permutation_lattice(g, d.c2)), aprime_difference_basis(p));
    throw std::invalid_argument("unknown zoo lattice: " + name);
}

ZooEntry zoo_lattice(int p, const std::string& name) {
    require_odd_prime(p, 13);
    static const std::map<std::string, std::pair<int, int>> expected = {
        {"triv", {-1, 0}},  {"eps", {1, 0}},          {"rho", {0, 0}},       {"A", {1, 0}},
        {"Aprime", {-1, 1}}, {"ext_Aprime_1", {0, 0}}, {"ext_A_eps", {0, 1}}, {"regular", {0, 1}}};
    auto it = expected.find(name);
    if (it == expected.end()) throw std::invalid_argument("unknown zoo lattice: " + name);
    return ZooEntry{name, zoo_lattice(dihedral_group(p), name), pow_p(p, it->second.first),
                    Integer(it->second.second ? p : 1)};
}

Relation standard_relation(const GroupPtr& g) {
    const int p = dihedral_parameter(*g);
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("standard relation needs D_2p with p an odd prime");
    return Relation::verify(
        BurnsideElement::from_map(g, {{"1", 1}, {"C2", -2}, {"C" + std::to_string(p), -1}, {"G", 2}}));
}

Relation standard_relation(int p) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("standard relation needs an odd prime, got " + std::to_string(p));
    return standard_relation(dihedral_group(p));
}

Rational expected_I(const ZGLattice& l) {
    const int p = dihedral_parameter(*l.group());
    auto m = rational_multiplicities_d2p(l);
    return pow_p(p, m.meps + m.mtau - m.m1);
}

std::vector<ZooRow> zoo_table(int p) {
    require_odd_prime(p, 13);
    auto theta = standard_relation(p);
    auto g = dihedral_group(p);
    auto d = dihedral_subgroups(*g);
    std::vector<ZooRow> rows;
    for (const auto& name : zoo_names()) {
        ZooEntry e = zoo_lattice(p, name);
        ZooRow r;
        r.name = name;
        r.constant = dok_pairing(e.lattice, theta).value;
        r.index = sum_of_fixed_index(e.lattice, {d.c2, d.c2prime, d.cp});
        r.I = r.index ? r.constant * Rational(*r.index * *r.index) : Rational(0);
        r.expected_constant = e.expected_constant;
        r.expected_index = e.expected_index;
        r.expected_I = expected_I(e.lattice);
        r.ok = r.constant == r.expected_constant && r.index == r.expected_index && r.I == r.expected_I;
        if (!r.ok)
            throw std::runtime_error("zoo table mismatch for " + name + " at p=" + std::to_string(p) + ": constant " +
                                     to_string(r.constant) + " vs " + to_string(r.expected_constant));
        rows.push_back(r);
    }
    for (const auto& [name, e] : std::vector<std::pair<std::string, int>>{{"A_rho", -1}, {"Aprime_rho", 1}}) {
        ZooRow r;
        r.name = name;
        r.predicted_only = true;
        r.constant = r.expected_constant = pow_p(p, e);
        r.I = r.expected_I = Rational(p);
        rows.push_back(r);
    }
    return rows;
}

ExtensionSearchResult extension_search(int p) {
    if (p != 3 && p != 5) throw std::invalid_argument("extension_search supports p in {3, 5}");
    auto g = dihedral_group(p);
    auto theta = standard_relation(g);
    auto d = dihedral_subgroups(*g);
    ExtensionSearchResult res;
    res.p = p;
    auto rho = zoo_lattice(g, "rho");
    auto scan = [&](const std::string& base, const ZGLattice& l, const Rational& target, std::vector<ExtensionWitness>& out) {
        auto overs = overlattices_mod_p(l, p);
        for (auto& o : overs) {
            Rational c = dok_pairing(o.lattice, theta).value;
            if (c != target) continue;
            auto idx = sum_of_fixed_index(o.lattice, {d.c2, d.c2prime, d.cp});
            if (!idx) throw std::logic_error("fixed sublattices do not span an overlattice");
            Rational I = c * Rational(*idx * *idx);
            if (I != expected_I(o.lattice))
                throw std::runtime_error("extension witness over " + base + " violates the I identity");
            out.push_back(ExtensionWitness{base, o.lattice, o.basis, o.submodule_dimension, c, *idx, I});
        }
        return overs.size();
    };
    auto a_rho = direct_sum(zoo_lattice(g, "A"), rho);
    auto ap_rho = direct_sum(zoo_lattice(g, "Aprime"), rho);
    res.split_a_rho = dok_pairing(a_rho, theta).value;
    res.split_aprime_rho = dok_pairing(ap_rho, theta).value;
    res.overlattices_a_rho = scan("A+rho", a_rho, Rational(1, p), res.a_rho);
    res.overlattices_aprime_rho = scan("Aprime+rho", ap_rho, Rational(p), res.aprime_rho);
    if (res.a_rho.empty()) throw std::runtime_error("no overlattice of A+rho with constant 1/p");
    if (res.aprime_rho.empty()) throw std::runtime_error("no overlattice of Aprime+rho with constant p");
    return res;
}

const ExtensionSearchResult& cached_extension_search(int p) {
    static std::mutex mu;
    static std::map<int, ExtensionSearchResult> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, extension_search(p)).first;
    return it->second;
}

}  // namespace dokconst
