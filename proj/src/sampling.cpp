#include "dokconst/sampling.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dokconst {

namespace {

using Vec = std::vector<long>;
using Space = std::vector<Vec>;  // reduced row echelon basis

long mod(long a, long p) {
    a %= p;
    return a < 0 ? a + p : a;
}

long inverse_mod(long a, long p) {
    long r = 1, b = mod(a, p), e = p - 2;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

std::size_t pivot_of(const Vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) return i;
    return v.size();
}

// Adds v to the echelon basis; returns false when v is already in the span.
bool insert(Space& s, Vec v, long p) {
    for (const auto& row : s) {
        std::size_t c = pivot_of(row);
        if (v[c] == 0) continue;
        long f = v[c];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod(v[i] - f * row[i], p);
    }
    std::size_t c = pivot_of(v);
    if (c == v.size()) return false;
    long inv = inverse_mod(v[c], p);
    for (auto& x : v) x = x * inv % p;
    for (auto& row : s) {
        if (row[c] == 0) continue;
        long f = row[c];
        for (std::size_t i = 0; i < v.size(); ++i) row[i] = mod(row[i] - f * v[i], p);
    }
    s.push_back(std::move(v));
    std::sort(s.begin(), s.end(), [](const Vec& a, const Vec& b) { return pivot_of(a) < pivot_of(b); });
    return true;
}

struct ModAction {
    std::vector<std::vector<long>> mats;  // row-major n*n per generator
    std::size_t n = 0;
    long p = 0;

    ModAction(const ZGLattice& l, long modulus) : n(l.rank()), p(modulus) {
        for (int s : l.group()->generators()) {
            std::vector<long> m(n * n);
            const IntMatrix& a = l.action(s);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    Integer r = a(i, j) % Integer(p);
                    m[i * n + j] = mod(r.get_si(), p);
                }
            mats.push_back(std::move(m));
        }
    }

    Vec apply(std::size_t k, const Vec& v) const {
        Vec w(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            long acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc = (acc + mats[k][i * n + j] * v[j]) % p;
            w[i] = acc;
        }
        return w;
    }

    Space close(Space s) const {
        std::vector<Vec> queue = s;
        while (!queue.empty()) {
            Vec v = queue.back();
            queue.pop_back();
            for (std::size_t k = 0; k < mats.size(); ++k) {
                Vec w = apply(k, v);
                if (insert(s, w, p)) queue.push_back(w);
            }
        }
        return s;
    }
};

Space sum(const Space& a, const Space& b, long p) {
    Space s = a;
    for (const auto& v : b) insert(s, v, p);
    return s;
}

IntMatrix lift_with_modulus(const Space& w, std::size_t n, long m) {
    IntMatrix gens(n, n + w.size());
    for (std::size_t i = 0; i < n; ++i) gens(i, i) = m;
    for (std::size_t j = 0; j < w.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) gens(i, n + j) = w[j][i];
    return column_span_basis(gens);
}

}  // namespace

std::vector<std::vector<std::vector<long>>> invariant_subspaces_mod_p(const ZGLattice& l, int p) {
    if (!is_prime(p)) throw std::invalid_argument("overlattices_mod_p: p must be prime");
    const std::size_t n = l.rank();
    double count = 1;
    for (std::size_t i = 0; i < n; ++i) count *= p;
    if (count > 4.0e6) throw std::invalid_argument("overlattices_mod_p: p^rank too large to enumerate");
    ModAction act(l, p);
    std::set<Space> cyclic;
    Vec v(n, 0);
    // projective representatives: first nonzero coordinate equal to 1
    for (std::size_t lead = 0; lead < n; ++lead) {
        std::fill(v.begin(), v.end(), 0);
        v[lead] = 1;
        for (;;) {
            Space s;
            insert(s, v, p);
            cyclic.insert(act.close(s));
            std::size_t k = n;
            while (k > lead + 1) {
                --k;
                if (++v[k] < p) break;
                v[k] = 0;
            }
            bool done = true;
            for (std::size_t i = lead + 1; i < n; ++i)
                if (v[i] != 0) done = false;
            if (done) break;
        }
    }
    std::set<Space> all(cyclic.begin(), cyclic.end());
    all.insert(Space{});
    std::vector<Space> frontier(all.begin(), all.end());
    while (!frontier.empty()) {
        std::vector<Space> next;
        for (const auto& a : frontier)
            for (const auto& c : cyclic) {
                Space s = sum(a, c, p);
                if (all.insert(s).second) next.push_back(s);
            }
        frontier = std::move(next);
    }
    std::vector<Space> out(all.begin(), all.end());
    std::stable_sort(out.begin(), out.end(), [](const Space& a, const Space& b) { return a.size() < b.size(); });
    return out;
}

std::vector<Overlattice> overlattices_mod_p(const ZGLattice& l, int p) {
    std::vector<Overlattice> out;
    for (const auto& w : invariant_subspaces_mod_p(l, p)) {
        IntMatrix basis = lift_with_modulus(w, l.rank(), p);
        out.push_back(Overlattice{span_sublattice(l, basis), basis, static_cast<int>(w.size())});
    }
    return out;
}

SampledSublattice random_stable_sublattice(const ZGLattice& l, std::mt19937_64& rng, const Integer& index_bound,
                                           const std::vector<int>& moduli) {
    const std::size_t n = l.rank();
    IntMatrix basis = IntMatrix::identity(n);
    ZGLattice current = l;
    Integer index = 1;
    if (n == 0 || moduli.empty()) return {current, basis, index};
    std::uniform_int_distribution<int> rounds(1, 2);
    const int r = rounds(rng);
    for (int round = 0; round < r; ++round) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            int m = moduli[rng() % moduli.size()];
            if (!is_prime(m)) throw std::invalid_argument("sampling moduli must be prime");
            ModAction act(current, m);
            std::uniform_int_distribution<long> entry(0, m - 1);
            std::uniform_int_distribution<std::size_t> nvec(1, n);
            Space s;
            for (std::size_t k = nvec(rng); k > 0; --k) {
                Vec v(n);
                for (auto& x : v) x = entry(rng);
                insert(s, v, m);
            }
            s = act.close(s);
            Integer step = 1;
            for (std::size_t i = s.size(); i < n; ++i) step *= m;
            if (step == 1 || index * step > index_bound) continue;
            IntMatrix sub = lift_with_modulus(s, n, m);
            current = span_sublattice(current, sub);
            basis = basis * sub;
            index *= step;
            break;
        }
    }
    return {current, basis, index};
}

}  // namespace dokconst
