#include "dokconst/identify.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dokconst {

namespace {

std::map<std::vector<std::string>, int> real_quadratic_numbering() {
    return {{{"eps", "A", "A"}, 1},
            {{"eps", "A", "Aprime"}, 2},
            {{"eps", "Aprime", "Aprime"}, 3},
            {{"A", "ext_A_eps"}, 4},
            {{"Aprime", "ext_A_eps"}, 5}};
}

const GenusType& genus(const std::string& name) {
    for (const auto& t : genus_types())
        if (t.name == name) return t;
    throw std::invalid_argument("unknown genus " + name);
}

// eps^m or 1^m splits off iff the pairing Hom_G(l, x) x Hom_G(x, l) -> End(x) is unimodular.
bool rank_one_part_splits(const ZGLattice& l, const ZGLattice& x) {
    auto into = equivariant_maps(x, l);
    auto out = equivariant_maps(l, x);
    if (into.size() != out.size()) throw std::logic_error("Hom ranks disagree");
    if (into.empty()) return true;
    IntMatrix m(out.size(), into.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = 0; j < into.size(); ++j) m(i, j) = (out[i] * into[j])(0, 0);
    Integer d = determinant(m);
    return d == 1 || d == -1;
}

std::optional<ZGLattice> pick_witness(const std::vector<ExtensionWitness>& ws) {
    if (ws.empty()) return std::nullopt;
    for (const auto& w : ws) {
        const auto& g = w.lattice.group();
        if (!rank_one_part_splits(w.lattice, trivial_lattice(g)) && !rank_one_part_splits(w.lattice, sign_lattice(g)))
            return w.lattice;
    }
    return ws.front().lattice;
}

void enumerate(const std::vector<GenusType>& types, std::size_t from, D2pMultiplicities left,
               std::vector<std::string>& cur, std::vector<std::vector<std::string>>& out) {
    if (left.m1 == 0 && left.meps == 0 && left.mtau == 0) {
        out.push_back(cur);
        return;
    }
    for (std::size_t t = from; t < types.size(); ++t) {
        const auto& c = types[t].character;
        if (c.m1 > left.m1 || c.meps > left.meps || c.mtau > left.mtau) continue;
        cur.push_back(types[t].name);
        enumerate(types, t, {left.m1 - c.m1, left.meps - c.meps, left.mtau - c.mtau}, cur, out);
        cur.pop_back();
    }
}

std::string join_display(const std::vector<std::string>& names) {
    std::string s;
    for (const auto& n : names) {
        if (!s.empty()) s += " + ";
        s += genus(n).display;
    }
    return s;
}

Rational pow_p(long p, long e) {
    Rational r = 1;
    for (long k = 0; k < std::labs(e); ++k) r *= p;
    return e < 0 ? Rational(1) / r : r;
}

}  // namespace

const std::vector<GenusType>& genus_types() {
    static const std::vector<GenusType> types = {
        {"triv", "1", {1, 0, 0}, -1},
        {"eps", "eps", {0, 1, 0}, 1},
        {"rho", "rho", {1, 1, 0}, 0},
        {"A", "A", {0, 0, 1}, 1},
        {"Aprime", "A'", {0, 0, 1}, -1},
        {"ext_Aprime_1", "(A',1)", {1, 0, 1}, 0},
        {"ext_A_eps", "(A,eps)", {0, 1, 1}, 0},
        {"ext_A_rho", "(A,rho)", {1, 1, 1}, -1},
        {"ext_Aprime_rho", "(A',rho)", {1, 1, 1}, 1},
        {"regular", "(A+A',rho)", {1, 1, 2}, 0},
    };
    return types;
}

std::optional<ZGLattice> genus_representative(int p, const std::string& name) {
    if (name == "ext_A_rho" || name == "ext_Aprime_rho") {
        if (p != 3 && p != 5) return std::nullopt;
        const auto& ext = cached_extension_search(p);
        return pick_witness(name == "ext_A_rho" ? ext.a_rho : ext.aprime_rho);
    }
    return zoo_lattice(dihedral_group(p), name);
}

bool sign_part_splits(const ZGLattice& l) { return rank_one_part_splits(l, sign_lattice(l.group())); }

std::vector<IdentifyCandidate> enumerate_candidates(int p, const D2pMultiplicities& m,
                                                    const std::optional<Rational>& observed) {
    if (m.m1 < 0 || m.meps < 0 || m.mtau < 0) throw std::invalid_argument("negative multiplicity");
    std::vector<std::vector<std::string>> multisets;
    std::vector<std::string> cur;
    enumerate(genus_types(), 0, m, cur, multisets);
    const auto numbering = real_quadratic_numbering();
    const bool numbered = m == D2pMultiplicities{0, 1, 2};
    const Relation theta = standard_relation(p);
    std::vector<IdentifyCandidate> out;
    for (const auto& ms : multisets) {
        IdentifyCandidate c;
        c.summands = ms;
        c.display = join_display(ms);
        std::optional<ZGLattice> sum;
        bool constructible = true;
        for (const auto& n : ms) {
            auto rep = genus_representative(p, n);
            if (!rep) {
                constructible = false;
                break;
            }
            sum = sum ? direct_sum(*sum, *rep) : *rep;
        }
        if (constructible && sum) {
            c.constant = dok_pairing(*sum, theta).value;
        } else {
            // no explicit lattice for the extension genera at this p: use the table values
            long exponent = 0;
            for (const auto& n : ms) exponent += genus(n).constant_exponent;
            c.constant = pow_p(p, exponent);
        }
        if (observed && c.constant != *observed) continue;
        c.sign_split = std::count(ms.begin(), ms.end(), std::string("eps")) == m.meps;
        if (numbered) {
            auto it = numbering.find(ms);
            if (it != numbering.end()) c.number = it->second;
        }
        out.push_back(std::move(c));
    }
    return out;
}

D2pMultiplicities multiplicities_from_ranks(const FieldFixture& f) {
    if (f.kind != "d2p") throw std::invalid_argument("identify needs a d2p fixture");
    const long p = f.q;
    const long rF = f.field(f.label_F()).r_S, rK = f.field(f.label_K()).r_S, rk = f.field(f.label_k()).r_S;
    if ((rF - rK) % (p - 1) != 0 || rK < rk || rF < rK) throw FixtureError(f.name + ": ranks inconsistent with D_2p");
    return {rk, rK - rk, (rF - rK) / (p - 1)};
}

IdentifyResult identify_galois_module(const FieldFixture& f, const FieldFixture* refinement) {
    IdentifyResult r;
    r.p = f.q;
    r.character = multiplicities_from_ranks(f);
    r.observed_constant = observed_unit_constant(f);
    r.from_h = enumerate_candidates(r.p, r.character, r.observed_constant);
    if (r.from_h.empty()) throw std::runtime_error(f.name + ": no Galois module structure matches the data");

    std::optional<FieldFixture> loaded;
    if (!refinement && f.refinement) {
        loaded = load_fixture(*f.refinement);
        refinement = &*loaded;
    }
    if (!refinement) {
        r.final = r.from_h;
        return r;
    }

    const FieldFixture& s = *refinement;
    if (s.group_descriptor != f.group_descriptor) throw FixtureError("refinement fixture has a different group");
    std::set<std::pair<std::string, std::string>> base;
    for (const auto& sp : f.s_primes_of_k) base.insert({sp.label, sp.decomposition_class});
    long extra = 0;
    for (const auto& sp : s.s_primes_of_k) {
        if (base.count({sp.label, sp.decomposition_class})) continue;
        if (sp.decomposition_class != "G")
            throw std::invalid_argument("refinement supports added primes with decomposition group G only");
        ++extra;
    }
    r.s_character = multiplicities_from_ranks(s);
    r.s_observed_constant = observed_unit_constant(s);
    if (r.character.m1 != 0 || *r.s_character != D2pMultiplicities{extra, r.character.meps, r.character.mtau})
        throw std::invalid_argument("refinement needs r_S(k) = 0 and one trivial constituent per added prime");

    auto s_cands = enumerate_candidates(r.p, *r.s_character, r.s_observed_constant);
    const Relation theta = standard_relation(r.p);
    auto g = dihedral_group(r.p);
    std::set<std::string> allowed;
    for (auto& sc : s_cands) {
        std::optional<ZGLattice> m;
        for (const auto& n : sc.summands) {
            auto rep = genus_representative(r.p, n);
            if (!rep) throw std::invalid_argument("refinement needs p in {3, 5}");
            m = m ? direct_sum(*m, *rep) : *rep;
        }
        // Gamma is cut out by all G-maps to Z: S-units with trivial valuation at the added primes.
        auto maps = equivariant_maps(*m, trivial_lattice(g));
        IntMatrix psi(maps.size(), m->rank());
        for (std::size_t i = 0; i < maps.size(); ++i)
            for (std::size_t j = 0; j < m->rank(); ++j) psi(i, j) = maps[i](0, j);
        ZGLattice kernel = span_sublattice(*m, integer_kernel(psi));
        if (rational_multiplicities_d2p(kernel) != r.character) throw std::logic_error("kernel has the wrong character");
        RefinementTrace t;
        t.s_candidate = sc;
        t.kernel_constant = dok_pairing(kernel, theta).value;
        t.kernel_sign_split = sign_part_splits(kernel);
        for (auto& c : enumerate_candidates(r.p, r.character, t.kernel_constant))
            if (c.sign_split == t.kernel_sign_split) {
                allowed.insert(c.display);
                t.kernel_matches.push_back(c);
            }
        r.refinement.push_back(std::move(t));
    }
    for (const auto& c : r.from_h)
        if (allowed.count(c.display)) r.final.push_back(c);
    if (r.final.empty()) throw std::runtime_error(f.name + ": S-refinement leaves no candidate");
    return r;
}

}  // namespace dokconst
