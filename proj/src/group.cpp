#include "dokconst/group.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dokconst {

std::vector<int> elements_of(const ElementSet& s) {
    std::vector<int> out;
    for (std::size_t i = s._Find_first(); i < kElementCapacity; i = s._Find_next(i)) out.push_back(static_cast<int>(i));
    return out;
}

ElementSet set_of(const std::vector<int>& elems) {
    ElementSet s;
    for (int e : elems) s.set(static_cast<std::size_t>(e));
    return s;
}

bool lex_less(const ElementSet& a, const ElementSet& b) {
    std::size_t i = (a ^ b)._Find_first();
    if (i >= kElementCapacity) return false;
    // The sorted lists agree below i; the one lacking i is smaller only if it ends there.
    if (a.test(i)) return b._Find_next(i) < kElementCapacity;
    return a._Find_next(i) >= kElementCapacity;
}

GroupPtr FiniteGroup::from_table(const std::vector<std::vector<int>>& table, std::string descriptor,
                                 std::vector<std::string> labels, std::vector<int> generators, int order_bound) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw std::invalid_argument("empty multiplication table");
    if (n > order_bound || n > static_cast<int>(kElementCapacity))
        throw std::invalid_argument("group order " + std::to_string(n) + " exceeds bound " + std::to_string(order_bound));
    std::shared_ptr<FiniteGroup> g(new FiniteGroup());
    g->order_ = n;
    g->descriptor_ = std::move(descriptor);
    g->table_.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(table[i].size()) != n) throw std::invalid_argument("multiplication table is not square");
        std::vector<bool> seen(n, false);
        for (int j = 0; j < n; ++j) {
            int v = table[i][j];
            if (v < 0 || v >= n) throw std::invalid_argument("multiplication table entry out of range");
            if (seen[v]) throw std::invalid_argument("multiplication table row is not a permutation");
            seen[v] = true;
            g->table_[i * n + j] = v;
        }
    }
    int e = -1;
    for (int i = 0; i < n && e < 0; ++i) {
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) ok = g->mul(i, j) == j && g->mul(j, i) == j;
        if (ok) e = i;
    }
    if (e < 0) throw std::invalid_argument("multiplication table has no identity");
    g->identity_ = e;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int xy = g->mul(x, y);
            for (int z = 0; z < n; ++z)
                if (g->mul(xy, z) != g->mul(x, g->mul(y, z)))
                    throw std::invalid_argument("multiplication table is not associative");
        }
    g->inv_.assign(n, -1);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (g->mul(x, y) == e) g->inv_[x] = y;
    for (int x = 0; x < n; ++x)
        if (g->inv_[x] < 0 || g->mul(g->inv_[x], x) != e) throw std::invalid_argument("inverse table inconsistent");
    g->element_order_.resize(n);
    for (int x = 0; x < n; ++x) {
        int k = 1;
        for (int y = x; y != e; y = g->mul(y, x)) ++k;
        g->element_order_[x] = k;
    }
    if (!labels.empty() && static_cast<int>(labels.size()) != n) throw std::invalid_argument("label count mismatch");
    g->labels_ = std::move(labels);
    if (generators.empty()) {
        generators = g->small_generating_set(g->all_elements());
    } else {
        for (int s : generators)
            if (s < 0 || s >= n) throw std::invalid_argument("generator out of range");
        if (g->closure(generators) != g->all_elements()) throw std::invalid_argument("generators do not generate");
    }
    g->generators_ = std::move(generators);

    g->element_class_of_.assign(n, -1);
    std::vector<std::vector<int>> classes;
    for (int x = 0; x < n; ++x) {
        if (g->element_class_of_[x] >= 0) continue;
        std::set<int> cls;
        for (int y = 0; y < n; ++y) cls.insert(g->conjugate(x, y));
        for (int c : cls) g->element_class_of_[c] = static_cast<int>(classes.size());
        classes.emplace_back(cls.begin(), cls.end());
    }
    std::vector<int> perm(classes.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        int oa = g->element_order_[classes[a].front()], ob = g->element_order_[classes[b].front()];
        if (oa != ob) return oa < ob;
        return classes[a].front() < classes[b].front();
    });
    for (std::size_t i = 0; i < perm.size(); ++i) {
        g->element_classes_.push_back(classes[perm[i]]);
        for (int c : classes[perm[i]]) g->element_class_of_[c] = static_cast<int>(i);
    }
    return g;
}

int FiniteGroup::power(int g, long long k) const {
    long long m = element_order(g);
    k %= m;
    if (k < 0) k += m;
    int r = identity_;
    for (long long i = 0; i < k; ++i) r = mul(r, g);
    return r;
}

std::string FiniteGroup::element_label(int g) const {
    if (!labels_.empty()) return labels_[g];
    return std::to_string(g);
}

std::vector<std::vector<int>> FiniteGroup::table() const {
    std::vector<std::vector<int>> t(order_, std::vector<int>(order_));
    for (int i = 0; i < order_; ++i)
        for (int j = 0; j < order_; ++j) t[i][j] = mul(i, j);
    return t;
}

ElementSet FiniteGroup::all_elements() const {
    ElementSet s;
    for (int i = 0; i < order_; ++i) s.set(i);
    return s;
}

ElementSet FiniteGroup::closure(const std::vector<int>& gens) const {
    ElementSet s;
    s.set(identity_);
    std::deque<int> queue{identity_};
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (int g : gens) {
            int y = mul(x, g);
            if (!s.test(y)) {
                s.set(y);
                queue.push_back(y);
            }
        }
    }
    return s;
}

ElementSet FiniteGroup::conjugate_set(const ElementSet& s, int g) const {
    ElementSet out;
    for (int h : elements_of(s)) out.set(conjugate(h, g));
    return out;
}

bool FiniteGroup::is_subgroup(const ElementSet& s) const {
    if (!s.test(identity_)) return false;
    auto el = elements_of(s);
    for (int x : el) {
        if (x >= order_) return false;
        if (!s.test(inv(x))) return false;
        for (int y : el)
            if (!s.test(mul(x, y))) return false;
    }
    return true;
}

bool FiniteGroup::is_normal(const ElementSet& s) const {
    for (int g : generators_)
        if (conjugate_set(s, g) != s) return false;
    return true;
}

bool FiniteGroup::is_cyclic_set(const ElementSet& s) const {
    const int n = static_cast<int>(s.count());
    for (int x : elements_of(s))
        if (element_order(x) == n) return true;
    return false;
}

std::vector<int> FiniteGroup::small_generating_set(const ElementSet& s) const {
    std::vector<int> gens;
    ElementSet span;
    span.set(identity_);
    // Prefer high-order elements so cyclic groups get a single generator.
    auto el = elements_of(s);
    std::stable_sort(el.begin(), el.end(), [&](int a, int b) { return element_order(a) > element_order(b); });
    for (int x : el) {
        if (span.test(x)) continue;
        gens.push_back(x);
        span = closure(gens);
        if (span == s) break;
    }
    std::sort(gens.begin(), gens.end());
    return gens;
}

namespace {

bool is_dihedral_set(const FiniteGroup& g, const ElementSet& s) {
    const int n = static_cast<int>(s.count());
    if (n < 4 || n % 2 != 0 || g.is_cyclic_set(s)) return false;
    const int m = n / 2;
    for (int r : elements_of(s)) {
        if (g.element_order(r) != m) continue;
        ElementSet rot = g.closure({r});
        bool ok = true;
        for (int x : elements_of(s))
            if (!rot.test(x) && g.element_order(x) != 2) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

}  // namespace

void FiniteGroup::build_catalogue() const {
    std::set<std::vector<int>> seen;
    std::vector<ElementSet> all;
    std::deque<ElementSet> queue;
    auto add = [&](const ElementSet& s) {
        auto key = elements_of(s);
        if (seen.insert(key).second) {
            all.push_back(s);
            queue.push_back(s);
        }
    };
    for (int x = 0; x < order_; ++x) add(closure({x}));
    while (!queue.empty()) {
        ElementSet s = queue.front();
        queue.pop_front();
        auto gens = small_generating_set(s);
        for (int x = 0; x < order_; ++x) {
            if (s.test(x)) continue;
            auto g2 = gens;
            g2.push_back(x);
            add(closure(g2));
        }
    }

    std::unordered_map<ElementSet, int> raw_class;
    std::vector<std::vector<ElementSet>> members;
    for (const auto& s : all) {
        if (raw_class.count(s)) continue;
        std::vector<ElementSet> conj;
        for (int g = 0; g < order_; ++g) {
            ElementSet c = conjugate_set(s, g);
            if (std::find(conj.begin(), conj.end(), c) == conj.end()) conj.push_back(c);
        }
        for (const auto& c : conj) raw_class[c] = static_cast<int>(members.size());
        members.push_back(conj);
    }

    struct Entry {
        SubgroupClass cls;
        std::string base;
        std::vector<ElementSet> conj;
    };
    std::vector<Entry> entries;
    for (auto& conj : members) {
        Entry e;
        ElementSet rep = conj.front();
        for (const auto& c : conj)
            if (lex_less(c, rep)) rep = c;
        e.cls.representative = rep;
        e.cls.elements = elements_of(rep);
        e.cls.order = static_cast<int>(rep.count());
        e.cls.is_cyclic = is_cyclic_set(rep);
        e.cls.class_size = static_cast<int>(conj.size());
        e.cls.generators = small_generating_set(rep);
        const int o = e.cls.order;
        if (o == 1) e.base = "1";
        else if (o == order_) e.base = "G";
        else if (e.cls.is_cyclic) e.base = "C" + std::to_string(o);
        else if (is_dihedral_set(*this, rep)) e.base = "D" + std::to_string(o);
        else e.base = "H" + std::to_string(o);
        e.conj = std::move(conj);
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.cls.order != b.cls.order) return a.cls.order < b.cls.order;
        if (a.base != b.base) return a.base < b.base;
        return lex_less(a.cls.representative, b.cls.representative);
    });
    std::map<std::string, int> counts, seen_base;
    for (const auto& e : entries) counts[e.base]++;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& e = entries[i];
        e.cls.index = static_cast<int>(i);
        e.cls.label = e.base;
        if (counts[e.base] > 1) e.cls.label += "#" + std::to_string(++seen_base[e.base]);
        for (const auto& c : e.conj) class_lookup_[c] = static_cast<int>(i);
        classes_.push_back(e.cls);
    }
}

const std::vector<SubgroupClass>& FiniteGroup::subgroup_classes() const {
    std::call_once(catalogue_once_, [this] { build_catalogue(); });
    return classes_;
}

int FiniteGroup::class_of_subgroup(const ElementSet& s) const {
    subgroup_classes();
    auto it = class_lookup_.find(s);
    if (it == class_lookup_.end()) throw std::invalid_argument("element set is not a subgroup");
    return it->second;
}

const SubgroupClass& FiniteGroup::subgroup_class(const std::string& label) const {
    for (const auto& c : subgroup_classes())
        if (c.label == label) return c;
    throw std::invalid_argument("unknown subgroup label: " + label);
}

std::size_t FiniteGroup::subgroup_count() const {
    subgroup_classes();
    return class_lookup_.size();
}

GroupPtr dihedral(int q) {
    if (q < 1) throw std::invalid_argument("dihedral group needs q >= 1");
    const int n = 2 * q;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    std::vector<std::string> labels(n);
    for (int x = 0; x < n; ++x) {
        int s = x / q, i = x % q;
        std::string rot = i == 0 ? "" : (i == 1 ? "b" : "b^" + std::to_string(i));
        labels[x] = s ? "a" + rot : (rot.empty() ? "1" : rot);
        for (int y = 0; y < n; ++y) {
            int t2 = y / q, j = y % q;
            int k = ((t2 ? -i : i) + j) % q;
            if (k < 0) k += q;
            t[x][y] = ((s + t2) % 2) * q + k;
        }
    }
    std::vector<int> gens = q == 1 ? std::vector<int>{1} : std::vector<int>{q, 1};
    return FiniteGroup::from_table(t, "D2q:" + std::to_string(q), labels, gens);
}

GroupPtr cyclic(int n) {
    if (n < 1) throw std::invalid_argument("cyclic group needs n >= 1");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) t[x][y] = (x + y) % n;
    std::vector<int> gens = n == 1 ? std::vector<int>{} : std::vector<int>{1};
    return FiniteGroup::from_table(t, "C:" + std::to_string(n), {}, gens);
}

GroupPtr symmetric(int n) {
    if (n < 1 || n > 5) throw std::invalid_argument("symmetric group supported for 1 <= n <= 5");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
    const int m = static_cast<int>(perms.size());
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            std::vector<int> c(n);
            for (int k = 0; k < n; ++k) c[k] = perms[x][perms[y][k]];
            t[x][y] = index[c];
        }
    std::vector<int> gens;
    if (n >= 2) {
        std::vector<int> tr(n), cyc(n);
        std::iota(tr.begin(), tr.end(), 0);
        std::swap(tr[0], tr[1]);
        for (int k = 0; k < n; ++k) cyc[k] = (k + 1) % n;
        gens = {index[tr], index[cyc]};
        if (n == 2) gens = {index[tr]};
    }
    return FiniteGroup::from_table(t, "S:" + std::to_string(n), {}, gens);
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
    const int na = a->order(), nb = b->order();
    const int n = na * nb;
    if (n > kDefaultOrderBound) throw std::invalid_argument("direct product exceeds order bound");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) t[x][y] = a->mul(x / nb, y / nb) * nb + b->mul(x % nb, y % nb);
    std::vector<int> gens;
    for (int g : a->generators()) gens.push_back(g * nb + b->identity());
    for (int h : b->generators()) gens.push_back(a->identity() * nb + h);
    std::vector<std::string> labels;
    for (int x = 0; x < n; ++x) labels.push_back("(" + a->element_label(x / nb) + "," + b->element_label(x % nb) + ")");
    return FiniteGroup::from_table(t, "prod(" + a->descriptor() + "," + b->descriptor() + ")", labels, gens);
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

int parse_positive(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed " + what + " in group descriptor: '" + s + "'");
    }
    if (pos != s.size() || v < 1) throw std::invalid_argument("malformed " + what + " in group descriptor: '" + s + "'");
    return v;
}

}  // namespace

GroupPtr build_group(const std::string& raw) {
    const std::string d = trim(raw);
    if (d.rfind("D2q:", 0) == 0) return dihedral(parse_positive(d.substr(4), "dihedral parameter"));
    if (d.rfind("C:", 0) == 0) return cyclic(parse_positive(d.substr(2), "cyclic order"));
    if (d.rfind("S:", 0) == 0) return symmetric(parse_positive(d.substr(2), "symmetric degree"));
    if (d.rfind("table:", 0) == 0) {
        std::string path = d.substr(6);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open group table: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("group table is not valid JSON: " + std::string(e.what()));
        }
        if (!j.is_array()) throw std::invalid_argument("group table must be an array of arrays");
        std::vector<std::vector<int>> t;
        for (const auto& row : j) {
            if (!row.is_array()) throw std::invalid_argument("group table must be an array of arrays");
            std::vector<int> r;
            for (const auto& v : row) {
                if (!v.is_number_integer()) throw std::invalid_argument("group table entries must be integers");
                r.push_back(v.get<int>());
            }
            t.push_back(std::move(r));
        }
        return FiniteGroup::from_table(t, d);
    }
    if (d.rfind("prod(", 0) == 0 && d.back() == ')') {
        std::string inner = d.substr(5, d.size() - 6);
        std::vector<std::string> parts;
        int depth = 0;
        std::string cur;
        for (char c : inner) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == ',' && depth == 0) {
                parts.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(trim(cur));
        if (parts.size() < 2 || depth != 0) throw std::invalid_argument("malformed product descriptor: " + d);
        GroupPtr g = build_group(parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i) g = direct_product(g, build_group(parts[i]));
        return g;
    }
    throw std::invalid_argument("unknown group descriptor: '" + d + "'");
}

ElementSet Quotient::preimage(const ElementSet& s) const {
    ElementSet out;
    for (int c : elements_of(s)) out |= cosets[c];
    return out;
}

ElementSet Quotient::image(const ElementSet& s) const {
    ElementSet out;
    for (int g : elements_of(s)) out.set(projection[g]);
    return out;
}

Quotient quotient_by_normal(const GroupPtr& g, const ElementSet& n) {
    if (!g->is_subgroup(n)) throw std::invalid_argument("quotient: N is not a subgroup");
    if (!g->is_normal(n)) throw std::invalid_argument("quotient: N is not normal");
    Quotient q;
    q.projection.assign(g->order(), -1);
    std::vector<int> reps;
    for (int x = 0; x < g->order(); ++x) {
        if (q.projection[x] >= 0) continue;
        ElementSet c;
        for (int h : elements_of(n)) c.set(g->mul(x, h));
        for (int y : elements_of(c)) q.projection[y] = static_cast<int>(reps.size());
        reps.push_back(x);
        q.cosets.push_back(c);
    }
    const int m = static_cast<int>(reps.size());
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) t[i][j] = q.projection[g->mul(reps[i], reps[j])];
    std::vector<int> gens;
    for (int s : g->generators()) {
        int c = q.projection[s];
        if (c != q.projection[g->identity()] && std::find(gens.begin(), gens.end(), c) == gens.end()) gens.push_back(c);
    }
    std::vector<std::string> labels;
    for (int r : reps) labels.push_back(g->element_label(r) + "N");
    q.group = FiniteGroup::from_table(t, g->descriptor() + "/N", labels, gens);
    return q;
}

ElementSet Embedding::image_of(const ElementSet& s) const {
    ElementSet out;
    for (int x : elements_of(s)) out.set(map[x]);
    return out;
}

std::optional<ElementSet> Embedding::preimage_of(const ElementSet& s) const {
    if ((s & ~image).any()) return std::nullopt;
    ElementSet out;
    for (std::size_t i = 0; i < map.size(); ++i)
        if (s.test(map[i])) out.set(i);
    return out;
}

Embedding subgroup_as_group(const GroupPtr& g, const ElementSet& h) {
    if (!g->is_subgroup(h)) throw std::invalid_argument("subgroup_as_group: not a subgroup");
    Embedding e;
    e.ambient = g;
    e.image = h;
    e.map = elements_of(h);
    std::map<int, int> local;
    for (std::size_t i = 0; i < e.map.size(); ++i) local[e.map[i]] = static_cast<int>(i);
    const int m = static_cast<int>(e.map.size());
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) t[i][j] = local[g->mul(e.map[i], e.map[j])];
    std::vector<std::string> labels;
    for (int x : e.map) labels.push_back(g->element_label(x));
    std::vector<int> gens;
    for (int x : g->small_generating_set(h)) gens.push_back(local[x]);
    std::string desc = g->descriptor() + "|sub";
    e.subgroup = FiniteGroup::from_table(t, desc, labels, gens);
    return e;
}

DoubleCosetDecomposition double_cosets(const FiniteGroup& g, const ElementSet& h, const ElementSet& k) {
    DoubleCosetDecomposition d;
    ElementSet covered;
    auto hs = elements_of(h), ks = elements_of(k);
    for (int x = 0; x < g.order(); ++x) {
        if (covered.test(x)) continue;
        ElementSet block;
        for (int a : hs)
            for (int b : ks) block.set(g.mul(g.mul(a, x), b));
        covered |= block;
        d.representatives.push_back(x);
        d.block_sizes.push_back(static_cast<int>(block.count()));
        d.blocks.push_back(block);
    }
    return d;
}

DoubleCosetDecomposition double_cosets(const FiniteGroup& g, const SubgroupClass& h, const SubgroupClass& k) {
    auto d = double_cosets(g, h.representative, k.representative);
    d.left = h.index;
    d.right = k.index;
    return d;
}

std::vector<std::pair<int, ElementSet>> left_cosets(const FiniteGroup& g, const ElementSet& h) {
    std::vector<std::pair<int, ElementSet>> out;
    ElementSet covered;
    auto hs = elements_of(h);
    for (int x = 0; x < g.order(); ++x) {
        if (covered.test(x)) continue;
        ElementSet c;
        for (int y : hs) c.set(g.mul(x, y));
        covered |= c;
        out.emplace_back(x, c);
    }
    return out;
}

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<int> prime_factors(long long n) {
    std::vector<int> out;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(static_cast<int>(d));
            while (n % d == 0) n /= d;
        }
    if (n > 1) out.push_back(static_cast<int>(n));
    return out;
}

bool is_p_hypo_elementary(const FiniteGroup& g, const ElementSet& h, int p) {
    if (!is_prime(p)) throw std::invalid_argument("is_p_hypo_elementary: p must be prime");
    const int n = static_cast<int>(h.count());
    int ppart = 1;
    for (int m = n; m % p == 0; m /= p) ppart *= p;
    ElementSet P;
    for (int x : elements_of(h)) {
        int o = g.element_order(x);
        while (o % p == 0) o /= p;
        if (o == 1) P.set(x);
    }
    if (static_cast<int>(P.count()) != ppart || !g.is_subgroup(P)) return false;
    const int quotient_order = n / ppart;
    for (int x : elements_of(h)) {
        int k = 1;
        int y = x;
        while (!P.test(y)) {
            y = g.mul(y, x);
            ++k;
        }
        if (k == quotient_order) return true;
    }
    return false;
}

}  // namespace dokconst
