#pragma once

#include <bitset>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dokconst {

constexpr std::size_t kElementCapacity = 256;
constexpr int kDefaultOrderBound = 200;

using ElementSet = std::bitset<kElementCapacity>;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

struct SubgroupClass {
    int index = 0;
    ElementSet representative;
    std::vector<int> elements;
    int order = 0;
    bool is_cyclic = false;
    int class_size = 0;
    std::string label;
    std::vector<int> generators;

    bool is_normal() const { return class_size == 1; }
};

class FiniteGroup {
public:
    // Generators default to a greedy generating set when empty.
    static GroupPtr from_table(const std::vector<std::vector<int>>& table, std::string descriptor = "",
                               std::vector<std::string> labels = {}, std::vector<int> generators = {},
                               int order_bound = kDefaultOrderBound);

    int order() const { return order_; }
    int identity() const { return identity_; }
    int mul(int g, int h) const { return table_[g * order_ + h]; }
    int inv(int g) const { return inv_[g]; }
    int conjugate(int h, int g) const { return mul(mul(inv(g), h), g); }
    int power(int g, long long k) const;
    int element_order(int g) const { return element_order_[g]; }
    const std::vector<int>& generators() const { return generators_; }
    const std::string& descriptor() const { return descriptor_; }
    std::string element_label(int g) const;
    const std::vector<std::vector<int>>& element_classes() const { return element_classes_; }
    int element_class_of(int g) const { return element_class_of_[g]; }
    std::vector<std::vector<int>> table() const;

    // Catalogue of conjugacy classes of subgroups, built on first use.
    const std::vector<SubgroupClass>& subgroup_classes() const;
    int class_of_subgroup(const ElementSet& s) const;
    const SubgroupClass& subgroup_class(const std::string& label) const;
    std::size_t subgroup_count() const;

    ElementSet all_elements() const;
    ElementSet closure(const std::vector<int>& gens) const;
    ElementSet conjugate_set(const ElementSet& s, int g) const;
    bool is_subgroup(const ElementSet& s) const;
    bool is_normal(const ElementSet& s) const;
    bool is_cyclic_set(const ElementSet& s) const;
    std::vector<int> small_generating_set(const ElementSet& s) const;

    bool same_as(const FiniteGroup& o) const { return this == &o || table_ == o.table_; }

private:
    FiniteGroup() = default;
    void build_catalogue() const;

    int order_ = 0;
    int identity_ = 0;
    std::vector<int> table_;
    std::vector<int> inv_;
    std::vector<int> element_order_;
    std::vector<int> generators_;
    std::vector<std::string> labels_;
    std::string descriptor_;
    std::vector<std::vector<int>> element_classes_;
    std::vector<int> element_class_of_;

    mutable std::once_flag catalogue_once_;
    mutable std::vector<SubgroupClass> classes_;
    mutable std::unordered_map<ElementSet, int> class_lookup_;
};

std::vector<int> elements_of(const ElementSet& s);
ElementSet set_of(const std::vector<int>& elems);
bool lex_less(const ElementSet& a, const ElementSet& b);

GroupPtr dihedral(int q);
GroupPtr cyclic(int n);
GroupPtr symmetric(int n);
GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);
GroupPtr build_group(const std::string& descriptor);

// Dihedral element indices: b^i -> i, a*b^i -> q + i.
inline int dihedral_rotation(int q, int i) { return ((i % q) + q) % q; }
inline int dihedral_reflection(int q, int i) { return q + ((i % q) + q) % q; }

struct Quotient {
    GroupPtr group;
    std::vector<int> projection;
    std::vector<ElementSet> cosets;
    // Subgroup of the quotient (as element set) -> preimage in G.
    ElementSet preimage(const ElementSet& s) const;
    ElementSet image(const ElementSet& s) const;
};

Quotient quotient_by_normal(const GroupPtr& g, const ElementSet& n);

struct Embedding {
    GroupPtr subgroup;
    GroupPtr ambient;
    std::vector<int> map;  // subgroup element -> ambient element
    ElementSet image;
    ElementSet image_of(const ElementSet& s) const;
    std::optional<ElementSet> preimage_of(const ElementSet& s) const;
};

Embedding subgroup_as_group(const GroupPtr& g, const ElementSet& h);

struct DoubleCosetDecomposition {
    int left = 0;
    int right = 0;
    std::vector<int> representatives;
    std::vector<int> block_sizes;
    std::vector<ElementSet> blocks;
};

DoubleCosetDecomposition double_cosets(const FiniteGroup& g, const ElementSet& h, const ElementSet& k);
DoubleCosetDecomposition double_cosets(const FiniteGroup& g, const SubgroupClass& h, const SubgroupClass& k);

// Left cosets xH ordered by least element; representative = least element.
std::vector<std::pair<int, ElementSet>> left_cosets(const FiniteGroup& g, const ElementSet& h);

bool is_prime(long long n);
std::vector<int> prime_factors(long long n);

bool is_p_hypo_elementary(const FiniteGroup& g, const ElementSet& h, int p);

}  // namespace dokconst
