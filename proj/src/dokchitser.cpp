#include "dokconst/dokchitser.hpp"

#include <random>
#include <stdexcept>

namespace dokconst {

namespace {

void factor_into(Integer n, int sign, std::map<long, int>& out) {
    if (n < 0) n = -n;
    for (long d = 2; n > 1; ++d) {
        if (Integer(d) * d > n) {
            if (!n.fits_slong_p()) throw std::overflow_error("prime factor exceeds long");
            out[n.get_si()] += sign;
            break;
        }
        while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d))) {
            n /= d;
            out[d] += sign;
        }
    }
}

Rational pow_rational(const Rational& x, long long e) {
    Rational r = 1;
    Rational b = e >= 0 ? x : Rational(1) / x;
    for (long long k = e >= 0 ? e : -e; k > 0; --k) r *= b;
    return r;
}

}  // namespace

std::map<long, int> factor_rational(const Rational& x) {
    if (x == 0) throw std::invalid_argument("cannot factor zero");
    std::map<long, int> out;
    factor_into(x.get_num(), 1, out);
    factor_into(x.get_den(), -1, out);
    return out;
}

std::string format_factored(const Rational& x) {
    auto f = factor_rational(x);
    std::string s = x < 0 ? "-" : "";
    if (f.empty()) return s + "1";
    bool first = true;
    for (const auto& [p, e] : f) {
        if (!first) s += "*";
        first = false;
        s += std::to_string(p);
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

int p_adic_order(const Rational& x, long p) {
    if (x == 0) throw std::invalid_argument("p-adic order of zero");
    Integer num = x.get_num(), den = x.get_den(), rest;
    Integer pp(p);
    long a = static_cast<long>(mpz_remove(rest.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t()));
    long b = static_cast<long>(mpz_remove(rest.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()));
    return static_cast<int>(a - b);
}

bool is_power_of(const Rational& x, long p) {
    if (x <= 0) return false;
    auto f = factor_rational(x);
    return f.empty() || (f.size() == 1 && f.begin()->first == p);
}

DokchitserConstant dok_pairing(const ZGLattice& l, const Relation& theta, const std::optional<InvariantPairing>& pairing) {
    if (!theta.group()->same_as(*l.group())) throw std::invalid_argument("dok_pairing: relation and lattice groups differ");
    InvariantPairing p = pairing ? *pairing : averaged_pairing(l);
    if (p.gram.rows() != l.rank()) throw std::invalid_argument("dok_pairing: pairing does not belong to the lattice");
    Rational value = 1;
    const auto& cls = l.group()->subgroup_classes();
    for (std::size_t i = 0; i < cls.size(); ++i) {
        long long c = theta.element().coefficient(static_cast<int>(i));
        if (c == 0) continue;
        Sublattice f = fixed_sublattice(l, cls[i].representative);
        Rational d = gram_determinant(p, f, Rational(1, cls[i].order));
        if (d == 0) throw std::logic_error("pairing degenerate on a fixed sublattice");
        value *= pow_rational(d, c);
    }
    return {value, Method::pairing};
}

PermutationSet permutation_set(const GroupPtr& g, const std::vector<int>& classes) {
    PermutationSet s;
    const auto& cls = g->subgroup_classes();
    for (int c : classes) {
        PermutationSet::Summand sm;
        sm.cls = c;
        sm.subgroup = cls[c].representative;
        sm.coset_of.assign(g->order(), -1);
        auto cosets = left_cosets(*g, sm.subgroup);
        for (std::size_t k = 0; k < cosets.size(); ++k) {
            sm.representatives.push_back(cosets[k].first);
            for (int x : elements_of(cosets[k].second)) sm.coset_of[x] = static_cast<int>(k);
        }
        sm.identity_coset = sm.coset_of[g->identity()];
        sm.offset = s.dimension;
        s.dimension += cosets.size();
        s.summands.push_back(std::move(sm));
    }
    return s;
}

IntMatrix permutation_action(const FiniteGroup& g, const PermutationSet& s, int x) {
    IntMatrix m(s.dimension, s.dimension);
    for (const auto& sm : s.summands)
        for (std::size_t c = 0; c < sm.representatives.size(); ++c)
            m(sm.offset + sm.coset_of[g.mul(x, sm.representatives[c])], sm.offset + c) = 1;
    return m;
}

std::vector<IntMatrix> hom_basis(const FiniteGroup& g, const PermutationSet& s1, const PermutationSet& s2) {
    std::vector<IntMatrix> basis;
    for (const auto& a : s1.summands) {
        auto hs = elements_of(a.subgroup);
        for (const auto& b : s2.summands) {
            const std::size_t nb = b.representatives.size();
            std::vector<bool> used(nb, false);
            for (std::size_t start = 0; start < nb; ++start) {
                if (used[start]) continue;
                std::vector<int> orbit;
                for (int h : hs) {
                    int c = b.coset_of[g.mul(h, b.representatives[start])];
                    if (!used[c]) {
                        used[c] = true;
                        orbit.push_back(c);
                    }
                }
                IntMatrix m(s2.dimension, s1.dimension);
                for (std::size_t c = 0; c < a.representatives.size(); ++c) {
                    int x = a.representatives[c];
                    for (int o : orbit) m(b.offset + b.coset_of[g.mul(x, b.representatives[o])], a.offset + c) += 1;
                }
                basis.push_back(std::move(m));
            }
        }
    }
    return basis;
}

bool is_g_map(const InjectionPhi& phi) {
    const auto& g = *phi.relation.group();
    for (int s : g.generators())
        if (permutation_action(g, phi.target, s) * phi.matrix != phi.matrix * permutation_action(g, phi.source, s))
            return false;
    return true;
}

namespace {

std::pair<PermutationSet, PermutationSet> relation_sets(const Relation& theta) {
    std::vector<int> pos, neg;
    const auto& c = theta.element().coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (long long k = 0; k < c[i]; ++k) pos.push_back(static_cast<int>(i));
        for (long long k = 0; k < -c[i]; ++k) neg.push_back(static_cast<int>(i));
    }
    return {permutation_set(theta.group(), pos), permutation_set(theta.group(), neg)};
}

}  // namespace

InjectionPhi find_injection(const Relation& theta, const InjectionTarget& target, std::uint64_t seed, int budget) {
    if (theta.is_zero()) throw std::invalid_argument("find_injection: relation is zero");
    auto [s1, s2] = relation_sets(theta);
    if (s1.dimension != s2.dimension) throw std::logic_error("relation sides have different degrees");
    const auto& g = *theta.group();
    auto basis = hom_basis(g, s1, s2);
    std::mt19937_64 rng(seed);
    int radius = 3;
    const int escalate = std::max(1, budget / 4);
    for (int draw = 0; draw < budget; ++draw) {
        if (draw > 0 && draw % escalate == 0) radius *= 2;
        std::uniform_int_distribution<int> coef(-radius, radius);
        IntMatrix m(s2.dimension, s1.dimension);
        for (const auto& b : basis) {
            int c = coef(rng);
            if (c != 0) m = m + b.scaled(Integer(c));
        }
        Integer det = determinant(m);
        if (det == 0) continue;
        if (target.kind == InjectionTarget::Kind::coprime_to && mpz_divisible_ui_p(det.get_mpz_t(), target.p)) continue;
        InjectionPhi phi{theta, s1, s2, std::move(m), det};
        if (!is_g_map(phi)) throw std::logic_error("hom basis produced a non-equivariant map");
        return phi;
    }
    throw InjectionSearchExhausted("find_injection: budget of " + std::to_string(budget) + " draws exhausted");
}

DokchitserConstant dok_injection(const ZGLattice& l, const Relation& theta, const std::optional<InjectionPhi>& given) {
    if (!theta.group()->same_as(*l.group())) throw std::invalid_argument("dok_injection: relation and lattice groups differ");
    if (theta.is_zero()) return {Rational(1), Method::injection};
    InjectionPhi phi = given ? *given : find_injection(theta, InjectionTarget::nonzero(), 0x5eedULL);
    if (phi.relation.element() != theta.element()) throw std::invalid_argument("dok_injection: injection belongs to another relation");
    const IntMatrix& P = phi.matrix;

    // Hom_G(Z[G/H], L) is identified with L^H via f -> f(e_H).
    struct Block {
        IntMatrix basis;
        std::size_t offset;
        LatticeSolver solver;
    };
    auto blocks_for = [&](const PermutationSet& s, std::size_t& total) {
        std::vector<Block> out;
        total = 0;
        for (const auto& sm : s.summands) {
            IntMatrix b = fixed_sublattice(l, sm.subgroup).basis;
            out.push_back(Block{b, total, LatticeSolver(b)});
            total += b.cols();
        }
        return out;
    };
    std::size_t m1 = 0, m2 = 0;
    auto b1 = blocks_for(phi.source, m1);
    auto b2 = blocks_for(phi.target, m2);
    if (m1 != m2) throw std::logic_error("Hom spaces of the two sides have different ranks");

    // phi^*: f' -> f' o phi, from Hom(S2, L) to Hom(S1, L).
    IntMatrix star(m1, m2);
    for (std::size_t j = 0; j < phi.target.summands.size(); ++j) {
        const auto& tj = phi.target.summands[j];
        for (std::size_t w = 0; w < b2[j].basis.cols(); ++w) {
            auto v = b2[j].basis.column(w);
            for (std::size_t i = 0; i < phi.source.summands.size(); ++i) {
                const auto& si = phi.source.summands[i];
                std::size_t col = si.offset + si.identity_coset;
                std::vector<Integer> value(l.rank());
                for (std::size_t c = 0; c < tj.representatives.size(); ++c) {
                    const Integer& coef = P(tj.offset + c, col);
                    if (coef == 0) continue;
                    auto img = l.action(tj.representatives[c]) * v;
                    for (std::size_t r = 0; r < value.size(); ++r) value[r] += coef * img[r];
                }
                auto coords = b1[i].solver.solve(value);
                if (!coords) throw std::logic_error("phi^* value is not fixed by the subgroup");
                for (std::size_t r = 0; r < coords->size(); ++r) star(b1[i].offset + r, b2[j].offset + w) = (*coords)[r];
            }
        }
    }
    // (phi^T)^*: f -> f o phi^T, from Hom(S1, L) to Hom(S2, L).
    IntMatrix tstar(m2, m1);
    for (std::size_t i = 0; i < phi.source.summands.size(); ++i) {
        const auto& si = phi.source.summands[i];
        for (std::size_t w = 0; w < b1[i].basis.cols(); ++w) {
            auto v = b1[i].basis.column(w);
            for (std::size_t j = 0; j < phi.target.summands.size(); ++j) {
                const auto& tj = phi.target.summands[j];
                std::size_t row = tj.offset + tj.identity_coset;
                std::vector<Integer> value(l.rank());
                for (std::size_t c = 0; c < si.representatives.size(); ++c) {
                    const Integer& coef = P(row, si.offset + c);
                    if (coef == 0) continue;
                    auto img = l.action(si.representatives[c]) * v;
                    for (std::size_t r = 0; r < value.size(); ++r) value[r] += coef * img[r];
                }
                auto coords = b2[j].solver.solve(value);
                if (!coords) throw std::logic_error("(phi^T)^* value is not fixed by the subgroup");
                for (std::size_t r = 0; r < coords->size(); ++r) tstar(b2[j].offset + r, b1[i].offset + w) = (*coords)[r];
            }
        }
    }
    Integer d1 = determinant(star);
    Integer d2 = determinant(tstar);
    if (d1 == 0) throw std::logic_error("phi^*_G is singular");
    Rational v(d2, d1);
    v.canonicalize();
    return {v, Method::injection};
}

ZpResult is_zp_relation(const Relation& theta, long p, std::uint64_t seed, int budget) {
    if (!is_prime(p)) throw std::invalid_argument("is_zp_relation: p must be prime");
    ZpResult r;
    if (theta.is_zero()) {
        auto [s1, s2] = relation_sets(theta);
        r.answer = ZpAnswer::yes;
        r.witness = InjectionPhi{theta, s1, s2, IntMatrix(0, 0), Integer(1)};
        return r;
    }
    try {
        r.witness = find_injection(theta, InjectionTarget::coprime(p), seed, budget);
        r.answer = ZpAnswer::yes;
    } catch (const InjectionSearchExhausted&) {
        r.answer = ZpAnswer::unknown;
    }
    return r;
}

bool check_certificate_witness(const FiniteGroup& g, const SubgroupClass& n, long p) {
    if (!n.is_normal() || n.order % p == 0) return false;
    const int index = g.order() / n.order;
    for (int x = 0; x < g.order(); ++x) {
        int k = 1;
        for (int y = x; !n.representative.test(y); y = g.mul(y, x)) ++k;
        if (k == index) return true;
    }
    return false;
}

bool TrivialPrimeCertificate::certifies(long p) const {
    if (group->order() % p != 0) return true;
    return witnesses.count(static_cast<int>(p)) > 0;
}

TrivialPrimeCertificate trivial_prime_certificate(const GroupPtr& g) {
    TrivialPrimeCertificate cert;
    cert.group = g;
    for (int p = 2; p <= g->order(); ++p) {
        if (!is_prime(p)) continue;
        bool found = false;
        for (const auto& n : g->subgroup_classes())
            if (check_certificate_witness(*g, n, p)) {
                if (g->order() % p == 0) cert.witnesses[p] = n.index;
                found = true;
                break;
            }
        if (!found) cert.uncertified.push_back(p);
    }
    return cert;
}

DihedralSubgroups dihedral_subgroups(const FiniteGroup& g) {
    const int q = dihedral_parameter(g);
    DihedralSubgroups d;
    d.c2 = set_of({0, dihedral_reflection(q, 0)});
    d.c2prime = set_of({0, dihedral_reflection(q, 1)});
    for (int i = 0; i < q; ++i) d.cp.set(i);
    return d;
}

Rational I_invariant(const ZGLattice& l, const Relation& theta) {
    auto d = dihedral_subgroups(*l.group());
    auto index = sum_of_fixed_index(l, {d.c2, d.c2prime, d.cp});
    if (!index) throw std::logic_error("fixed sublattices do not span the lattice");
    Rational c = dok_pairing(l, theta).value;
    return c * Rational(*index * *index);
}

}  // namespace dokconst
