#pragma once

#include "dokconst/group.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace dokconst {

// Integer combination of conjugacy classes of subgroups, indexed like G.subgroup_classes().
class BurnsideElement {
public:
    explicit BurnsideElement(GroupPtr g);
    BurnsideElement(GroupPtr g, std::vector<long long> coefficients);
    static BurnsideElement from_map(GroupPtr g, const std::map<std::string, long long>& coefficients);

    const GroupPtr& group() const { return group_; }
    const std::vector<long long>& coefficients() const { return coeffs_; }
    long long coefficient(int cls) const { return coeffs_.at(cls); }
    long long coefficient(const std::string& label) const;
    std::map<std::string, long long> to_map() const;
    bool is_zero() const;

    BurnsideElement operator+(const BurnsideElement& o) const;
    BurnsideElement operator-(const BurnsideElement& o) const;
    BurnsideElement operator*(long long k) const;
    bool operator==(const BurnsideElement& o) const;

private:
    GroupPtr group_;
    std::vector<long long> coeffs_;
};

std::vector<long long> permutation_character(const FiniteGroup& g, const SubgroupClass& h);
std::vector<long long> virtual_character(const BurnsideElement& x);
bool is_relation(const BurnsideElement& x);

class Relation {
public:
    // Throws std::invalid_argument when the virtual permutation character is nonzero.
    static Relation verify(BurnsideElement element);
    const BurnsideElement& element() const { return element_; }
    const GroupPtr& group() const { return element_.group(); }
    bool verified() const { return true; }
    bool is_zero() const { return element_.is_zero(); }

    Relation operator+(const Relation& o) const { return Relation(element_ + o.element_); }
    Relation operator*(long long k) const { return Relation(element_ * k); }

private:
    explicit Relation(BurnsideElement e) : element_(std::move(e)) {}
    BurnsideElement element_;
};

struct RelationBasis {
    GroupPtr group;
    std::vector<Relation> basis;
    int rank = 0;
};

RelationBasis relation_lattice(const GroupPtr& g);
int noncyclic_class_count(const FiniteGroup& g);

std::string format_element(const BurnsideElement& x);
BurnsideElement parse_element(const GroupPtr& g, const std::string& text);

// Restrict a G-relation to the subgroup described by the embedding.
struct RestrictTo {
    Embedding embedding;
};
// Induce an H-relation to the ambient group of the embedding (embedding.subgroup is H).
struct InduceTo {
    Embedding embedding;
};
// Inflate a (G/N)-relation to G.
struct InflateFrom {
    Quotient quotient;
    GroupPtr ambient;
};
using TransportMode = std::variant<RestrictTo, InduceTo, InflateFrom>;

Relation transport_relation(const Relation& theta, const TransportMode& mode);

// Class correspondence G/N -> G: quotient class index -> class of the preimage.
std::vector<int> inflation_class_map(const Quotient& q, const GroupPtr& ambient);

}  // namespace dokconst
