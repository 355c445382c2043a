#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dblext/groupoid.hpp"

namespace dblext {

/// A finite double groupoid. Squares form a groupoid over the arrows of the
/// vertical edge groupoid (sV, tV, mV) and a groupoid over the arrows of the
/// horizontal edge groupoid (sH, tH, mH). Both edge groupoids share the
/// object set of `vertical`.
///
/// Products use the nerve orientation everywhere: mV(x1, x2) is defined when
/// tV(x1) == sV(x2), mH(x1, x2) when tH(x1) == sH(x2).
struct DoubleGroupoid {
    FiniteGroupoid vertical;    // Gamma^V_1 over Gamma_0
    FiniteGroupoid horizontal;  // Gamma^H_1 over Gamma_0
    std::vector<Id> squares;
    std::vector<int> sV, tV, sH, tH;
    std::vector<int> mV, mH;          // squares x squares, -1 where undefined
    std::vector<int> unitV, unitH;    // per vertical / horizontal edge arrow
    std::vector<int> invV, invH;      // per square

    std::size_t square_count() const { return squares.size(); }
    int compose_v(int x1, int x2) const { return mV[static_cast<std::size_t>(x1) * squares.size() + x2]; }
    int compose_h(int x1, int x2) const { return mH[static_cast<std::size_t>(x1) * squares.size() + x2]; }
    int& compose_v_entry(int x1, int x2) { return mV[static_cast<std::size_t>(x1) * squares.size() + x2]; }
    int& compose_h_entry(int x1, int x2) { return mH[static_cast<std::size_t>(x1) * squares.size() + x2]; }

    /// Squares as a groupoid over the vertical edge arrows.
    FiniteGroupoid vertical_structure() const;
    /// Squares as a groupoid over the horizontal edge arrows.
    FiniteGroupoid horizontal_structure() const;

    void check_structure() const;

    friend bool operator==(const DoubleGroupoid&, const DoubleGroupoid&) = default;
};

struct DoubleValidationOptions {
    bool require_double_source_surjective = true;
};

/// Axiom ids: "vertical structure: <groupoid axiom>", "horizontal structure: ...",
/// "vertical edge groupoid: ...", "horizontal edge groupoid: ...",
/// "corner commutation", "functoriality", "interchange", "double-source surjectivity".
ValidationReport validate_double(const DoubleGroupoid& d, const DoubleValidationOptions& options = {});

// Builders -----------------------------------------------------------------------

/// All four corners equal M, all structure maps identities.
DoubleGroupoid build_constant_double(const std::vector<Id>& points);

/// Squares (g, h) in G x H over the one-object groupoids H (vertical) and G
/// (horizontal). Over G the squares form the conjugation action groupoid of H
/// on G, the groupoid underlying G x| H; over H they form the bundle of groups
/// G indexed by H.
DoubleGroupoid build_group_subgroup_double(const GroupTable& group, const std::vector<int>& subgroup);

/// Squares Gamma_1 x Gamma_1, vertical edges Gamma_1, horizontal edges the pair
/// groupoid on Gamma_0; mV is pair-style, mH componentwise.
DoubleGroupoid build_pair_double(const FiniteGroupoid& g);

/// A G-groupoid: `arrow_action[g * |arrows| + x]` and `object_action[g * |objects| + u]`.
struct GroupoidAction {
    std::vector<int> arrow_action;
    std::vector<int> object_action;
};

/// Squares Gamma_1 x G, vertical edges Gamma_1, horizontal edges the action
/// groupoid of G on Gamma_0. Over Gamma_1 the squares form the action groupoid
/// of G on the arrows; over Gamma_0 x G they compose componentwise.
DoubleGroupoid build_g_groupoid_double(const FiniteGroupoid& g, const GroupTable& group,
                                       const GroupoidAction& action);

struct ConstantDouble {
    std::vector<Id> points;
};
struct GroupSubgroupDouble {
    GroupTable group;
    std::vector<int> subgroup;
};
struct PairDouble {
    FiniteGroupoid base;
};
struct GGroupoidDouble {
    FiniteGroupoid base;
    GroupTable group;
    GroupoidAction action;
};
using DoubleExample = std::variant<ConstantDouble, GroupSubgroupDouble, PairDouble, GGroupoidDouble>;

DoubleGroupoid build_double_example(const DoubleExample& example);

// Bisimplicial nerve -----------------------------------------------------------

inline constexpr int kDefaultBinerveCap = 5;

enum class Axis { horizontal, vertical };

/// Cells of bidegree (p, q). For p, q >= 1 a cell is a p x q grid of squares
/// flattened row-major; rows are mV-composable downward, columns
/// mH-composable rightward. (p, 0) holds nerve(horizontal, p) tuples,
/// (0, q) holds nerve(vertical, q) tuples and (0, 0) holds objects.
struct BiNerveLevel {
    int p = 0;
    int q = 0;
    std::vector<Tuple> cells;

    std::size_t size() const { return cells.size(); }
    std::optional<std::size_t> index_of(std::span<const int> cell) const;
};

bool is_binerve_cell(const DoubleGroupoid& d, int p, int q, std::span<const int> cell);

BiNerveLevel binerve(const DoubleGroupoid& d, int p, int q, int cap = kDefaultBinerveCap);

/// Horizontal faces act on rows (p-direction) composing with mV; at p = 1
/// they are tV (i = 0) and sV (i = 1) entrywise. Vertical faces act on
/// columns (q-direction) composing with mH; at q = 1 they are tH and sH.
Tuple binerve_face(const DoubleGroupoid& d, int p, int q, Axis axis, int i, std::span<const int> cell);

/// "a|b;c|d" for grids (rows separated by ';'), tuple rendering on the boundary.
std::string describe_binerve_cell(const DoubleGroupoid& d, int p, int q, std::span<const int> cell);

}  // namespace dblext
