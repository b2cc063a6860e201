#include "dokconst/burnside.hpp"

#include "dokconst/matrix.hpp"

#include <cctype>
#include <stdexcept>

namespace dokconst {

BurnsideElement::BurnsideElement(GroupPtr g) : group_(std::move(g)) {
    coeffs_.assign(group_->subgroup_classes().size(), 0);
}

BurnsideElement::BurnsideElement(GroupPtr g, std::vector<long long> coefficients)
    : group_(std::move(g)), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != group_->subgroup_classes().size())
        throw std::invalid_argument("coefficient count does not match subgroup classes");
}

BurnsideElement BurnsideElement::from_map(GroupPtr g, const std::map<std::string, long long>& coefficients) {
    BurnsideElement x(g);
    for (const auto& [label, c] : coefficients) x.coeffs_[g->subgroup_class(label).index] += c;
    return x;
}

long long BurnsideElement::coefficient(const std::string& label) const {
    return coeffs_.at(group_->subgroup_class(label).index);
}

std::map<std::string, long long> BurnsideElement::to_map() const {
    std::map<std::string, long long> m;
    const auto& cls = group_->subgroup_classes();
    for (std::size_t i = 0; i < cls.size(); ++i) m[cls[i].label] = coeffs_[i];
    return m;
}

bool BurnsideElement::is_zero() const {
    for (auto c : coeffs_)
        if (c != 0) return false;
    return true;
}

BurnsideElement BurnsideElement::operator+(const BurnsideElement& o) const {
    if (!group_->same_as(*o.group_)) throw std::invalid_argument("Burnside elements over different groups");
    BurnsideElement r = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] += o.coeffs_[i];
    return r;
}

BurnsideElement BurnsideElement::operator-(const BurnsideElement& o) const { return *this + o * -1; }

BurnsideElement BurnsideElement::operator*(long long k) const {
    BurnsideElement r = *this;
    for (auto& c : r.coeffs_) c *= k;
    return r;
}

bool BurnsideElement::operator==(const BurnsideElement& o) const {
    return group_->same_as(*o.group_) && coeffs_ == o.coeffs_;
}

std::vector<long long> permutation_character(const FiniteGroup& g, const SubgroupClass& h) {
    std::vector<long long> chi;
    for (const auto& cls : g.element_classes()) {
        int x0 = cls.front();
        long long count = 0;
        for (int x = 0; x < g.order(); ++x)
            if (h.representative.test(g.conjugate(x0, x))) ++count;
        chi.push_back(count / h.order);
    }
    return chi;
}

std::vector<long long> virtual_character(const BurnsideElement& x) {
    const auto& g = *x.group();
    std::vector<long long> total(g.element_classes().size(), 0);
    const auto& cls = g.subgroup_classes();
    for (std::size_t i = 0; i < cls.size(); ++i) {
        if (x.coefficient(static_cast<int>(i)) == 0) continue;
        auto chi = permutation_character(g, cls[i]);
        for (std::size_t j = 0; j < chi.size(); ++j) total[j] += x.coefficient(static_cast<int>(i)) * chi[j];
    }
    return total;
}

bool is_relation(const BurnsideElement& x) {
    for (auto v : virtual_character(x))
        if (v != 0) return false;
    return true;
}

Relation Relation::verify(BurnsideElement element) {
    if (!is_relation(element)) throw std::invalid_argument("not a relation: " + format_element(element));
    return Relation(std::move(element));
}

int noncyclic_class_count(const FiniteGroup& g) {
    int n = 0;
    for (const auto& c : g.subgroup_classes()) n += !c.is_cyclic;
    return n;
}

RelationBasis relation_lattice(const GroupPtr& g) {
    const auto& cls = g->subgroup_classes();
    const std::size_t ne = g->element_classes().size();
    IntMatrix marks(ne, cls.size());
    for (std::size_t s = 0; s < cls.size(); ++s) {
        auto chi = permutation_character(*g, cls[s]);
        for (std::size_t e = 0; e < ne; ++e) marks(e, s) = static_cast<long>(chi[e]);
    }
    IntMatrix k = integer_kernel(marks);
    RelationBasis rb;
    rb.group = g;
    for (std::size_t j = 0; j < k.cols(); ++j) {
        std::vector<long long> c(cls.size());
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (!k(i, j).fits_slong_p()) throw std::overflow_error("relation coefficient overflow");
            c[i] = k(i, j).get_si();
        }
        rb.basis.push_back(Relation::verify(BurnsideElement(g, c)));
    }
    rb.rank = static_cast<int>(rb.basis.size());
    return rb;
}

std::string format_element(const BurnsideElement& x) {
    const auto& cls = x.group()->subgroup_classes();
    std::string out;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        long long c = x.coefficient(static_cast<int>(i));
        if (c == 0) continue;
        long long a = c < 0 ? -c : c;
        if (out.empty()) out += c < 0 ? "-" : "";
        else out += c < 0 ? " - " : " + ";
        if (a != 1) out += std::to_string(a) + "*";
        out += cls[i].label;
    }
    return out.empty() ? "0" : out;
}

BurnsideElement parse_element(const GroupPtr& g, const std::string& text) {
    BurnsideElement x(g);
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty relation text");
    if (s == "0") return x;
    std::size_t pos = 0;
    while (pos < s.size()) {
        long long sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (pos != 0) {
            throw std::invalid_argument("malformed relation text: " + text);
        }
        std::size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        std::string term = s.substr(pos, end - pos);
        if (term.empty()) throw std::invalid_argument("malformed relation text: " + text);
        long long coef = 1;
        std::string label = term;
        auto star = term.find('*');
        if (star != std::string::npos) {
            try {
                std::size_t used = 0;
                coef = std::stoll(term.substr(0, star), &used);
                if (used != star) throw std::invalid_argument("bad coefficient");
            } catch (const std::exception&) {
                throw std::invalid_argument("malformed coefficient in relation text: " + term);
            }
            label = term.substr(star + 1);
        }
        x = x + BurnsideElement::from_map(g, {{label, sign * coef}});
        pos = end;
    }
    return x;
}

std::vector<int> inflation_class_map(const Quotient& q, const GroupPtr& ambient) {
    std::vector<int> out;
    for (const auto& c : q.group->subgroup_classes()) out.push_back(ambient->class_of_subgroup(q.preimage(c.representative)));
    return out;
}

Relation transport_relation(const Relation& theta, const TransportMode& mode) {
    const GroupPtr& g = theta.group();
    BurnsideElement result = std::visit(
        [&](const auto& m) -> BurnsideElement {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, RestrictTo>) {
                const Embedding& e = m.embedding;
                if (!e.ambient->same_as(*g)) throw std::invalid_argument("restrict: relation is not over the ambient group");
                const GroupPtr& h = e.subgroup;
                BurnsideElement out(h);
                const auto& cls = g->subgroup_classes();
                for (std::size_t i = 0; i < cls.size(); ++i) {
                    long long c = theta.element().coefficient(static_cast<int>(i));
                    if (c == 0) continue;
                    // H-orbits on G/K_i are H g K_i with stabiliser H ∩ g K_i g^-1.
                    auto dc = double_cosets(*g, e.image, cls[i].representative);
                    for (int rep : dc.representatives) {
                        ElementSet stab = g->conjugate_set(cls[i].representative, g->inv(rep)) & e.image;
                        auto local = e.preimage_of(stab);
                        std::vector<long long> coeffs(h->subgroup_classes().size(), 0);
                        coeffs[h->class_of_subgroup(*local)] = c;
                        out = out + BurnsideElement(h, coeffs);
                    }
                }
                return out;
            } else if constexpr (std::is_same_v<M, InduceTo>) {
                const Embedding& e = m.embedding;
                if (!e.subgroup->same_as(*g)) throw std::invalid_argument("induce: relation is not over the embedded group");
                BurnsideElement out(e.ambient);
                const auto& cls = g->subgroup_classes();
                for (std::size_t i = 0; i < cls.size(); ++i) {
                    long long c = theta.element().coefficient(static_cast<int>(i));
                    if (c == 0) continue;
                    std::vector<long long> coeffs(e.ambient->subgroup_classes().size(), 0);
                    coeffs[e.ambient->class_of_subgroup(e.image_of(cls[i].representative))] = c;
                    out = out + BurnsideElement(e.ambient, coeffs);
                }
                return out;
            } else {
                if (!m.quotient.group->same_as(*g)) throw std::invalid_argument("inflate: relation is not over the quotient");
                BurnsideElement out(m.ambient);
                auto map = inflation_class_map(m.quotient, m.ambient);
                for (std::size_t i = 0; i < map.size(); ++i) {
                    long long c = theta.element().coefficient(static_cast<int>(i));
                    if (c == 0) continue;
                    std::vector<long long> coeffs(m.ambient->subgroup_classes().size(), 0);
                    coeffs[map[i]] = c;
                    out = out + BurnsideElement(m.ambient, coeffs);
                }
                return out;
            }
        },
        mode);
    if (!is_relation(result)) throw std::logic_error("transported element fails the relation test: " + format_element(result));
    return Relation::verify(result);
}

}  // namespace dokconst
