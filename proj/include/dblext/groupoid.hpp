#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dblext/validation.hpp"

namespace dblext {

using Tuple = std::vector<int>;

/// A finite groupoid given by explicit tables. Objects and arrows are indexed
/// 0..n-1; index order is the canonical order used by every enumeration.
///
/// `mult` is a dense arrows x arrows table holding -1 where the product is
/// undefined. Composition follows the nerve convention: m(x, y) is defined
/// when tgt(x) == src(y) and runs from src(x) to tgt(y).
struct FiniteGroupoid {
    std::vector<Id> objects;
    std::vector<Id> arrows;
    std::vector<int> src;
    std::vector<int> tgt;
    std::vector<int> mult;
    std::vector<int> unit;  // per object
    std::vector<int> inv;   // per arrow

    std::size_t object_count() const { return objects.size(); }
    std::size_t arrow_count() const { return arrows.size(); }

    int product(int x, int y) const { return mult[static_cast<std::size_t>(x) * arrows.size() + y]; }
    int& product_entry(int x, int y) { return mult[static_cast<std::size_t>(x) * arrows.size() + y]; }
    bool composable(int x, int y) const { return tgt[x] == src[y]; }

    std::optional<int> find_object(std::string_view id) const;
    std::optional<int> find_arrow(std::string_view id) const;

    /// Throws StructuralError if a table has the wrong size or refers to a
    /// missing object/arrow.
    void check_structure() const;

    friend bool operator==(const FiniteGroupoid&, const FiniteGroupoid&) = default;
};

/// A finite group by its multiplication table (row-major, op(a, b) = a*b).
struct GroupTable {
    std::vector<Id> elements;
    std::vector<int> table;

    std::size_t order() const { return elements.size(); }
    int op(int a, int b) const { return table[static_cast<std::size_t>(a) * elements.size() + b]; }
    int identity() const;
    int inverse(int a) const;
};

GroupTable cyclic_group(int n);
GroupTable klein_four_group();
GroupTable symmetric_group(int n);
GroupTable direct_product(const GroupTable& a, const GroupTable& b);
/// Throws DomainError with a witness if the table is not a group.
void check_group(const GroupTable& g);

// Builders ------------------------------------------------------------------

FiniteGroupoid build_pair_groupoid(const std::vector<Id>& points);

/// Action groupoid of a left action; act[g * |X| + u] = g.u. Arrows are the
/// pairs (g, u) in g-major order with s(g,u) = u, t(g,u) = g.u and
/// m((g,u), (h,g.u)) = (hg, u). A one-point set yields the group itself.
FiniteGroupoid build_action_groupoid(const GroupTable& group, const std::vector<Id>& points,
                                     const std::vector<int>& act);

/// The group as a one-object groupoid (trivial action on a point).
FiniteGroupoid one_object_groupoid(const GroupTable& group);

/// Groupoid of a finite cover: objects are tagged points (alpha, x), arrows
/// are triples (alpha, beta, x) with x in U_alpha and U_beta.
FiniteGroupoid build_cech_groupoid(const std::vector<Id>& space,
                                   const std::vector<std::vector<Id>>& cover);

/// Only identity arrows.
FiniteGroupoid build_unit_groupoid(const std::vector<Id>& points);

/// Same groupoid with arrows reindexed: new arrow i is old arrow perm[i].
FiniteGroupoid permute_arrows(const FiniteGroupoid& g, const std::vector<int>& perm);

// Validation ----------------------------------------------------------------

/// Axiom ids: "composability domain", "src of product", "tgt of product",
/// "associativity", "units", "inverses".
ValidationReport validate_groupoid(const FiniteGroupoid& g);

// Nerve -----------------------------------------------------------------------

inline constexpr int kDefaultNerveCap = 6;

/// Composable p-tuples (p = 0: single objects), sorted lexicographically.
struct NerveLevel {
    int p = 0;
    std::vector<Tuple> tuples;

    std::size_t size() const { return tuples.size(); }
    std::optional<std::size_t> index_of(std::span<const int> tuple) const;
};

bool is_nerve_tuple(const FiniteGroupoid& g, int p, std::span<const int> tuple);

NerveLevel nerve(const FiniteGroupoid& g, int p, int cap = kDefaultNerveCap);

/// Face operator eps_i : N(p) -> N(p-1). For p = 1, eps_0 = tgt and eps_1 = src.
Tuple nerve_face(const FiniteGroupoid& g, int p, int i, std::span<const int> tuple);

/// Human-readable rendering of a tuple ("x|y|z", or the object id for p = 0).
std::string describe_nerve_tuple(const FiniteGroupoid& g, int p, std::span<const int> tuple);

}  // namespace dblext
