#include "dokconst/lattice.hpp"

#include <deque>
#include <stdexcept>

namespace dokconst {

namespace {

bool unimodular(const IntMatrix& m) {
    Integer d = determinant(m);
    return d == 1 || d == -1;
}

}  // namespace

ZGLattice ZGLattice::from_generators(GroupPtr g, const std::vector<IntMatrix>& gens) {
    const auto& gi = g->generators();
    if (gens.size() != gi.size())
        throw std::invalid_argument("expected " + std::to_string(gi.size()) + " generator matrices, got " +
                                    std::to_string(gens.size()));
    std::size_t n = gens.empty() ? 0 : gens.front().rows();
    for (const auto& m : gens) {
        if (m.rows() != n || m.cols() != n) throw std::invalid_argument("generator matrices must be square of equal size");
        if (!unimodular(m)) throw std::invalid_argument("generator matrix is not unimodular");
    }
    if (gens.empty() && g->order() != 1) throw std::invalid_argument("missing generator matrices");
    std::vector<IntMatrix> action(g->order());
    std::vector<bool> known(g->order(), false);
    action[g->identity()] = IntMatrix::identity(n);
    known[g->identity()] = true;
    std::deque<int> queue{g->identity()};
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (std::size_t k = 0; k < gi.size(); ++k) {
            int y = g->mul(x, gi[k]);
            IntMatrix m = action[x] * gens[k];
            if (!known[y]) {
                action[y] = std::move(m);
                known[y] = true;
                queue.push_back(y);
            } else if (action[y] != m) {
                throw std::invalid_argument("generator matrices violate the group relations");
            }
        }
    }
    return ZGLattice(std::move(g), n, std::move(action));
}

ZGLattice ZGLattice::from_all(GroupPtr g, std::vector<IntMatrix> matrices) {
    if (static_cast<int>(matrices.size()) != g->order()) throw std::invalid_argument("need one matrix per element");
    std::size_t n = matrices.front().rows();
    if (!matrices[g->identity()].is_identity()) throw std::invalid_argument("identity must act trivially");
    for (const auto& m : matrices)
        if (m.rows() != n || m.cols() != n) throw std::invalid_argument("action matrices must be square of equal size");
    for (int s : g->generators())
        if (!unimodular(matrices[s])) throw std::invalid_argument("action matrix is not unimodular");
    for (int x = 0; x < g->order(); ++x)
        for (int s : g->generators())
            if (matrices[x] * matrices[s] != matrices[g->mul(x, s)])
                throw std::invalid_argument("action is not a homomorphism");
    return ZGLattice(std::move(g), n, std::move(matrices));
}

std::vector<IntMatrix> ZGLattice::generator_matrices() const {
    std::vector<IntMatrix> out;
    for (int s : group_->generators()) out.push_back(action_[s]);
    return out;
}

Integer ZGLattice::trace(int g) const {
    Integer t = 0;
    for (std::size_t i = 0; i < rank_; ++i) t += action_[g](i, i);
    return t;
}

ZGLattice trivial_lattice(const GroupPtr& g) {
    std::vector<IntMatrix> gens(g->generators().size(), IntMatrix::identity(1));
    if (g->order() == 1) return ZGLattice::from_all(g, {IntMatrix::identity(1)});
    return ZGLattice::from_generators(g, gens);
}

ZGLattice permutation_lattice(const GroupPtr& g, const ElementSet& h) {
    if (!g->is_subgroup(h)) throw std::invalid_argument("permutation_lattice: not a subgroup");
    auto cosets = left_cosets(*g, h);
    const std::size_t n = cosets.size();
    std::vector<int> coset_of(g->order());
    for (std::size_t c = 0; c < n; ++c)
        for (int x : elements_of(cosets[c].second)) coset_of[x] = static_cast<int>(c);
    std::vector<IntMatrix> action;
    for (int x = 0; x < g->order(); ++x) {
        IntMatrix m(n, n);
        for (std::size_t c = 0; c < n; ++c) m(coset_of[g->mul(x, cosets[c].first)], c) = 1;
        action.push_back(std::move(m));
    }
    return ZGLattice::from_all(g, std::move(action));
}

ZGLattice direct_sum(const ZGLattice& a, const ZGLattice& b) {
    if (!a.group()->same_as(*b.group())) throw std::invalid_argument("direct_sum: group mismatch");
    const std::size_t na = a.rank(), nb = b.rank();
    std::vector<IntMatrix> action;
    for (int x = 0; x < a.group()->order(); ++x) {
        IntMatrix m(na + nb, na + nb);
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < na; ++j) m(i, j) = a.action(x)(i, j);
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < nb; ++j) m(na + i, na + j) = b.action(x)(i, j);
        action.push_back(std::move(m));
    }
    return ZGLattice::from_all(a.group(), std::move(action));
}

ZGLattice tensor(const ZGLattice& a, const ZGLattice& b) {
    if (!a.group()->same_as(*b.group())) throw std::invalid_argument("tensor: group mismatch");
    const std::size_t na = a.rank(), nb = b.rank();
    std::vector<IntMatrix> action;
    for (int x = 0; x < a.group()->order(); ++x) {
        IntMatrix m(na * nb, na * nb);
        const IntMatrix& A = a.action(x);
        const IntMatrix& B = b.action(x);
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < na; ++j) {
                if (A(i, j) == 0) continue;
                for (std::size_t k = 0; k < nb; ++k)
                    for (std::size_t l = 0; l < nb; ++l) m(i * nb + k, j * nb + l) = A(i, j) * B(k, l);
            }
        action.push_back(std::move(m));
    }
    return ZGLattice::from_all(a.group(), std::move(action));
}

int dihedral_parameter(const FiniteGroup& g) {
    const std::string& d = g.descriptor();
    if (d.rfind("D2q:", 0) != 0 || d.find_first_not_of("0123456789", 4) != std::string::npos)
        throw std::invalid_argument("operation needs a dihedral group D2q:q, got '" + d + "'");
    return std::stoi(d.substr(4));
}

ZGLattice sign_lattice(const GroupPtr& g) {
    const int q = dihedral_parameter(*g);
    std::vector<IntMatrix> action;
    for (int x = 0; x < g->order(); ++x) action.push_back(IntMatrix::identity(1).scaled(x >= q ? -1 : 1));
    return ZGLattice::from_all(g, std::move(action));
}

ZGLattice twist_sign(const ZGLattice& a) {
    const int q = dihedral_parameter(*a.group());
    std::vector<IntMatrix> action;
    for (int x = 0; x < a.group()->order(); ++x) action.push_back(x >= q ? a.action(x).scaled(-1) : a.action(x));
    return ZGLattice::from_all(a.group(), std::move(action));
}

ZGLattice span_sublattice(const ZGLattice& l, const IntMatrix& columns, IntMatrix* basis_out) {
    if (columns.rows() != l.rank()) throw std::invalid_argument("span_sublattice: column length mismatch");
    IntMatrix basis = rank(columns) == columns.cols() ? columns : column_span_basis(columns);
    LatticeSolver solver(basis);
    std::vector<IntMatrix> gens;
    for (int s : l.group()->generators()) {
        auto x = solver.solve(l.action(s) * basis);
        if (!x) throw std::invalid_argument("span_sublattice: span is not G-stable");
        gens.push_back(std::move(*x));
    }
    if (basis_out) *basis_out = basis;
    if (l.group()->order() == 1) return ZGLattice::from_all(l.group(), {IntMatrix::identity(basis.cols())});
    return ZGLattice::from_generators(l.group(), gens);
}

ZGLattice change_basis(const ZGLattice& l, const IntMatrix& u) {
    if (!unimodular(u)) throw std::invalid_argument("change_basis: matrix is not unimodular");
    LatticeSolver solver(u);
    std::vector<IntMatrix> action;
    for (int x = 0; x < l.group()->order(); ++x) action.push_back(*solver.solve(l.action(x) * u));
    return ZGLattice::from_all(l.group(), std::move(action));
}

ZGLattice restrict_lattice(const ZGLattice& l, const Embedding& e) {
    if (!e.ambient->same_as(*l.group())) throw std::invalid_argument("restrict_lattice: group mismatch");
    std::vector<IntMatrix> action;
    for (int x : e.map) action.push_back(l.action(x));
    return ZGLattice::from_all(e.subgroup, std::move(action));
}

ZGLattice induce_lattice(const ZGLattice& l, const Embedding& e) {
    if (!e.subgroup->same_as(*l.group())) throw std::invalid_argument("induce_lattice: group mismatch");
    const GroupPtr& g = e.ambient;
    auto cosets = left_cosets(*g, e.image);
    const std::size_t nc = cosets.size(), n = l.rank();
    std::vector<int> coset_of(g->order());
    for (std::size_t c = 0; c < nc; ++c)
        for (int x : elements_of(cosets[c].second)) coset_of[x] = static_cast<int>(c);
    std::vector<int> local(g->order(), -1);
    for (std::size_t i = 0; i < e.map.size(); ++i) local[e.map[i]] = static_cast<int>(i);
    std::vector<IntMatrix> action;
    for (int x = 0; x < g->order(); ++x) {
        IntMatrix m(nc * n, nc * n);
        for (std::size_t c = 0; c < nc; ++c) {
            int y = g->mul(x, cosets[c].first);
            std::size_t d = coset_of[y];
            int h = local[g->mul(g->inv(cosets[d].first), y)];
            const IntMatrix& a = l.action(h);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(d * n + i, c * n + j) = a(i, j);
        }
        action.push_back(std::move(m));
    }
    return ZGLattice::from_all(g, std::move(action));
}

ZGLattice inflate_lattice(const ZGLattice& l, const Quotient& q, const GroupPtr& ambient) {
    if (!q.group->same_as(*l.group())) throw std::invalid_argument("inflate_lattice: group mismatch");
    std::vector<IntMatrix> action;
    for (int x = 0; x < ambient->order(); ++x) action.push_back(l.action(q.projection[x]));
    return ZGLattice::from_all(ambient, std::move(action));
}

Sublattice fixed_sublattice(const ZGLattice& l, const ElementSet& h) {
    const auto gens = l.group()->small_generating_set(h);
    const std::size_t n = l.rank();
    IntMatrix stacked(gens.size() * n, n);
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const IntMatrix& a = l.action(gens[k]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) stacked(k * n + i, j) = a(i, j) - (i == j ? 1 : 0);
    }
    return Sublattice{integer_kernel(stacked)};
}

ZGLattice fixed_lattice_as_module(const ZGLattice& l, const ElementSet& h) {
    return span_sublattice(l, fixed_sublattice(l, h).basis);
}

bool is_positive_definite(const RatMatrix& m) {
    if (!m.square()) return false;
    for (std::size_t k = 1; k <= m.rows(); ++k) {
        RatMatrix minor(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) minor(i, j) = m(i, j);
        if (determinant(minor) <= 0) return false;
    }
    return true;
}

bool is_invariant(const ZGLattice& l, const RatMatrix& gram) {
    for (int x = 0; x < l.group()->order(); ++x) {
        RatMatrix a = to_rational(l.action(x));
        if (a.transpose() * gram * a != gram) return false;
    }
    return true;
}

InvariantPairing make_pairing(const ZGLattice& l, RatMatrix gram) {
    if (gram.rows() != l.rank() || gram.cols() != l.rank()) throw std::invalid_argument("pairing size mismatch");
    if (gram.transpose() != gram) throw std::invalid_argument("pairing is not symmetric");
    if (determinant(gram) == 0) throw std::invalid_argument("pairing is degenerate");
    if (!is_invariant(l, gram)) throw std::invalid_argument("pairing is not G-invariant");
    return InvariantPairing{std::move(gram)};
}

InvariantPairing averaged_pairing(const ZGLattice& l, std::optional<std::uint64_t> seed) {
    const std::size_t n = l.rank();
    RatMatrix s = RatMatrix::identity(n);
    if (seed) {
        std::mt19937_64 rng(*seed);
        std::uniform_int_distribution<int> entry(-3, 3), den(1, 4);
        IntMatrix r(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) r(i, j) = entry(rng);
        RatMatrix rr = to_rational(r);
        s = (rr.transpose() * rr + RatMatrix::identity(n)).scaled(Rational(1, den(rng)));
    }
    RatMatrix gram(n, n);
    for (int x = 0; x < l.group()->order(); ++x) {
        RatMatrix a = to_rational(l.action(x));
        gram = gram + a.transpose() * s * a;
    }
    if (!is_positive_definite(gram)) throw std::logic_error("averaged pairing is not positive definite");
    if (!is_invariant(l, gram)) throw std::logic_error("averaged pairing is not invariant");
    return InvariantPairing{std::move(gram)};
}

InvariantPairing restrict_pairing(const InvariantPairing& p, const IntMatrix& basis) {
    RatMatrix b = to_rational(basis);
    return InvariantPairing{b.transpose() * p.gram * b};
}

Rational gram_determinant(const InvariantPairing& p, const Sublattice& b, const Rational& scale) {
    if (b.basis.rows() != p.gram.rows()) throw std::invalid_argument("gram_determinant: sublattice not in pairing's lattice");
    RatMatrix bb = to_rational(b.basis);
    return determinant((bb.transpose() * p.gram * bb).scaled(scale));
}

std::optional<Integer> sum_of_fixed_index(const ZGLattice& l, const std::vector<ElementSet>& subgroups) {
    const std::size_t n = l.rank();
    std::vector<IntMatrix> parts;
    std::size_t total = 0;
    for (const auto& h : subgroups) {
        parts.push_back(fixed_sublattice(l, h).basis);
        total += parts.back().cols();
    }
    IntMatrix all(n, total);
    std::size_t off = 0;
    for (const auto& p : parts) {
        for (std::size_t j = 0; j < p.cols(); ++j)
            for (std::size_t i = 0; i < n; ++i) all(i, off + j) = p(i, j);
        off += p.cols();
    }
    ColumnHermite ch = column_hermite(all, false);
    if (ch.rank < n) return std::nullopt;
    Integer index = 1;
    for (std::size_t c = 0; c < n; ++c) index *= ch.H(ch.pivot_rows[c], c);
    return index;
}

D2pMultiplicities rational_multiplicities_d2p(const ZGLattice& l) {
    const int p = dihedral_parameter(*l.group());
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("rational_multiplicities_d2p: needs D_2p with p an odd prime");
    Integer s1 = 0, se = 0;
    for (int x = 0; x < 2 * p; ++x) {
        Integer t = l.trace(x);
        s1 += t;
        se += x >= p ? -t : t;
    }
    if (s1 % (2 * p) != 0 || se % (2 * p) != 0) throw std::logic_error("non-integral character multiplicity");
    Integer m1 = s1 / (2 * p), me = se / (2 * p);
    Integer rest = Integer(static_cast<unsigned long>(l.rank())) - m1 - me;
    if (rest < 0 || rest % (p - 1) != 0 || m1 < 0 || me < 0) throw std::logic_error("non-integral character multiplicity");
    return {m1.get_si(), me.get_si(), Integer(rest / (p - 1)).get_si()};
}

std::vector<IntMatrix> equivariant_maps(const ZGLattice& a, const ZGLattice& b) {
    if (!a.group()->same_as(*b.group())) throw std::invalid_argument("equivariant_maps: group mismatch");
    const std::size_t na = a.rank(), nb = b.rank();
    const auto& gens = a.group()->generators();
    IntMatrix sys(gens.size() * nb * na, nb * na);
    std::size_t row = 0;
    for (int s : gens) {
        const IntMatrix& A = a.action(s);
        const IntMatrix& B = b.action(s);
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < na; ++j, ++row) {
                for (std::size_t k = 0; k < na; ++k) sys(row, i * na + k) += A(k, j);
                for (std::size_t k = 0; k < nb; ++k) sys(row, k * na + j) -= B(i, k);
            }
    }
    IntMatrix ker = gens.empty() ? IntMatrix::identity(nb * na) : integer_kernel(sys);
    std::vector<IntMatrix> out;
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        IntMatrix x(nb, na);
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < na; ++j) x(i, j) = ker(i * na + j, c);
        out.push_back(std::move(x));
    }
    return out;
}

std::optional<IntMatrix> find_isomorphism(const ZGLattice& a, const ZGLattice& b, std::uint64_t seed, int budget) {
    if (a.rank() != b.rank()) return std::nullopt;
    auto basis = equivariant_maps(a, b);
    if (basis.empty()) return a.rank() == 0 ? std::optional<IntMatrix>(IntMatrix(0, 0)) : std::nullopt;
    std::mt19937_64 rng(seed);
    int radius = 1;
    for (int t = 0; t < budget; ++t) {
        if (t > 0 && t % (budget / 4 + 1) == 0) radius *= 2;
        std::uniform_int_distribution<int> coef(-radius, radius);
        IntMatrix m(b.rank(), a.rank());
        for (const auto& x : basis) {
            int c = coef(rng);
            if (c != 0) m = m + x.scaled(Integer(c));
        }
        if (unimodular(m)) return m;
    }
    return std::nullopt;
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps) {
    IntMatrix u = IntMatrix::identity(n);
    if (n < 2) return u;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-1, 1);
    for (int k = 0; k < steps; ++k) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int c = coef(rng);
        if (c == 0) continue;
        for (std::size_t r = 0; r < n; ++r) u(r, i) += c * u(r, j);
    }
    return u;
}

}  // namespace dokconst
