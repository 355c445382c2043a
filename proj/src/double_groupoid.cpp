#include "dblext/double_groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dblext/errors.hpp"
#include "dblext/parallel.hpp"

namespace dblext {

namespace {

void check_table(const std::vector<int>& v, std::size_t size, int lo, int hi, const char* name) {
    if (v.size() != size) {
        throw StructuralError(std::string("double groupoid table '") + name + "' has wrong size");
    }
    for (int x : v) {
        if (x < lo || x >= hi) {
            throw StructuralError(std::string("double groupoid table '") + name + "' refers to a missing id");
        }
    }
}

GroupTable subgroup_table(const GroupTable& group, const std::vector<int>& subgroup) {
    GroupTable h;
    for (int g : subgroup) {
        h.elements.push_back(group.elements.at(g));
    }
    const std::size_t n = subgroup.size();
    h.table.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            int prod = group.op(subgroup[a], subgroup[b]);
            auto it = std::find(subgroup.begin(), subgroup.end(), prod);
            if (it == subgroup.end()) {
                throw DomainError("subgroup is not closed under multiplication",
                                  {group.elements[subgroup[a]], group.elements[subgroup[b]]});
            }
            h.table[a * n + b] = static_cast<int>(it - subgroup.begin());
        }
    }
    return h;
}

}  // namespace

FiniteGroupoid DoubleGroupoid::vertical_structure() const {
    FiniteGroupoid g;
    g.objects = vertical.arrows;
    g.arrows = squares;
    g.src = sV;
    g.tgt = tV;
    g.mult = mV;
    g.unit = unitV;
    g.inv = invV;
    return g;
}

FiniteGroupoid DoubleGroupoid::horizontal_structure() const {
    FiniteGroupoid g;
    g.objects = horizontal.arrows;
    g.arrows = squares;
    g.src = sH;
    g.tgt = tH;
    g.mult = mH;
    g.unit = unitH;
    g.inv = invH;
    return g;
}

void DoubleGroupoid::check_structure() const {
    vertical.check_structure();
    horizontal.check_structure();
    if (vertical.objects != horizontal.objects) {
        throw StructuralError("vertical and horizontal edge groupoids have different object sets");
    }
    const std::size_t n = squares.size();
    const int nv = static_cast<int>(vertical.arrow_count());
    const int nh = static_cast<int>(horizontal.arrow_count());
    const int ns = static_cast<int>(n);
    check_table(sV, n, 0, nv, "sV");
    check_table(tV, n, 0, nv, "tV");
    check_table(sH, n, 0, nh, "sH");
    check_table(tH, n, 0, nh, "tH");
    check_table(mV, n * n, -1, ns, "mV");
    check_table(mH, n * n, -1, ns, "mH");
    check_table(unitV, vertical.arrow_count(), 0, ns, "unitV");
    check_table(unitH, horizontal.arrow_count(), 0, ns, "unitH");
    check_table(invV, n, 0, ns, "invV");
    check_table(invH, n, 0, ns, "invH");
    std::set<std::string_view> seen;
    for (const auto& id : squares) {
        if (!seen.insert(id).second) {
            throw StructuralError("duplicate square id '" + id + "'");
        }
    }
}

// Validation --------------------------------------------------------------------

ValidationReport validate_double(const DoubleGroupoid& d, const DoubleValidationOptions& options) {
    d.check_structure();
    ValidationReport report;
    report.merge(validate_groupoid(d.vertical), "vertical edge groupoid: ");
    report.merge(validate_groupoid(d.horizontal), "horizontal edge groupoid: ");
    report.merge(validate_groupoid(d.vertical_structure()), "vertical structure: ");
    report.merge(validate_groupoid(d.horizontal_structure()), "horizontal structure: ");

    const auto& V = d.vertical;
    const auto& H = d.horizontal;
    const auto& S = d.squares;
    const int n = static_cast<int>(d.square_count());

    for (int x = 0; x < n; ++x) {
        const bool ok = H.src[d.sH[x]] == V.src[d.sV[x]] && H.tgt[d.tH[x]] == V.tgt[d.tV[x]] &&
                        H.tgt[d.sH[x]] == V.src[d.tV[x]] && H.src[d.tH[x]] == V.tgt[d.sV[x]];
        if (!ok) {
            report.add("corner commutation", {S[x]});
        }
    }

    auto edge_product = [](const FiniteGroupoid& g, int a, int b) {
        return g.composable(a, b) ? g.product(a, b) : -1;
    };
    for (int x1 = 0; x1 < n; ++x1) {
        for (int x2 = 0; x2 < n; ++x2) {
            if (d.tH[x1] == d.sH[x2]) {
                const int m = d.compose_h(x1, x2);
                if (m >= 0 && (d.sV[m] != edge_product(V, d.sV[x1], d.sV[x2]) ||
                               d.tV[m] != edge_product(V, d.tV[x1], d.tV[x2]))) {
                    report.add("functoriality", {S[x1], S[x2]}, "vertical edges of an mH product");
                }
            }
            if (d.tV[x1] == d.sV[x2]) {
                const int m = d.compose_v(x1, x2);
                if (m >= 0 && (d.sH[m] != edge_product(H, d.sH[x1], d.sH[x2]) ||
                               d.tH[m] != edge_product(H, d.tH[x1], d.tH[x2]))) {
                    report.add("functoriality", {S[x1], S[x2]},
                               "horizontal edges of an mV product (tH line checked in its symmetric corrected form)");
                }
            }
        }
    }

    std::vector<std::vector<int>> out_h(H.arrow_count()), out_v(V.arrow_count());
    for (int x = 0; x < n; ++x) {
        out_h[d.sH[x]].push_back(x);
        out_v[d.sV[x]].push_back(x);
    }
    auto chunks = parallel_chunks<ValidationReport>(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
        ValidationReport local;
        for (std::size_t i = begin; i < end; ++i) {
            const int x11 = static_cast<int>(i);
            for (int x12 : out_h[d.tH[x11]]) {
                for (int x21 : out_v[d.tV[x11]]) {
                    for (int x22 : out_v[d.tV[x12]]) {
                        if (d.tH[x21] != d.sH[x22]) {
                            continue;
                        }
                        const int top = d.compose_h(x11, x12);
                        const int bottom = d.compose_h(x21, x22);
                        const int left = d.compose_v(x11, x21);
                        const int right = d.compose_v(x12, x22);
                        if (top < 0 || bottom < 0 || left < 0 || right < 0) {
                            continue;
                        }
                        const int lhs = d.tV[top] == d.sV[bottom] ? d.compose_v(top, bottom) : -1;
                        const int rhs = d.tH[left] == d.sH[right] ? d.compose_h(left, right) : -1;
                        if (lhs != rhs || lhs < 0) {
                            local.add("interchange", {S[x11], S[x12], S[x21], S[x22]});
                        }
                    }
                }
            }
        }
        return local;
    });
    for (const auto& c : chunks) {
        report.merge(c);
    }

    if (options.require_double_source_surjective) {
        std::set<std::pair<int, int>> hit;
        for (int x = 0; x < n; ++x) {
            hit.insert({d.sV[x], d.sH[x]});
        }
        for (int a = 0; a < static_cast<int>(V.arrow_count()); ++a) {
            for (int b = 0; b < static_cast<int>(H.arrow_count()); ++b) {
                if (V.src[a] == H.src[b] && !hit.count({a, b})) {
                    report.add("double-source surjectivity", {V.arrows[a], H.arrows[b]});
                }
            }
        }
    }
    return report;
}

// Builders ------------------------------------------------------------------------

DoubleGroupoid build_constant_double(const std::vector<Id>& points) {
    DoubleGroupoid d;
    d.vertical = build_unit_groupoid(points);
    d.horizontal = d.vertical;
    d.squares = points;
    const int n = static_cast<int>(points.size());
    d.mV.assign(static_cast<std::size_t>(n) * n, -1);
    d.mH = d.mV;
    for (int x = 0; x < n; ++x) {
        d.sV.push_back(x);
        d.tV.push_back(x);
        d.sH.push_back(x);
        d.tH.push_back(x);
        d.compose_v_entry(x, x) = x;
        d.compose_h_entry(x, x) = x;
        d.unitV.push_back(x);
        d.unitH.push_back(x);
        d.invV.push_back(x);
        d.invH.push_back(x);
    }
    return d;
}

DoubleGroupoid build_group_subgroup_double(const GroupTable& group, const std::vector<int>& subgroup) {
    check_group(group);
    if (subgroup.empty()) {
        throw DomainError("empty subgroup");
    }
    const GroupTable sub = subgroup_table(group, subgroup);
    check_group(sub);
    if (subgroup[sub.identity()] != group.identity()) {
        throw DomainError("subgroup does not contain the identity");
    }

    DoubleGroupoid d;
    d.vertical = one_object_groupoid(sub);
    d.horizontal = one_object_groupoid(group);
    const int ng = static_cast<int>(group.order());
    const int nh = static_cast<int>(sub.order());
    const int n = ng * nh;
    auto square = [nh](int g, int h) { return g * nh + h; };
    // groupoid products of the edge groupoids: m(a, b) = b*a in group terms
    auto conj = [&](int h, int g) {
        const int hg = subgroup[h];
        return group.op(group.op(hg, g), group.inverse(hg));
    };
    for (int g = 0; g < ng; ++g) {
        for (int h = 0; h < nh; ++h) {
            d.squares.push_back("(" + group.elements[g] + "," + sub.elements[h] + ")");
            d.sH.push_back(g);
            d.tH.push_back(conj(h, g));
            d.sV.push_back(h);
            d.tV.push_back(h);
        }
    }
    d.mV.assign(static_cast<std::size_t>(n) * n, -1);
    d.mH = d.mV;
    for (int x1 = 0; x1 < n; ++x1) {
        for (int x2 = 0; x2 < n; ++x2) {
            const int g1 = x1 / nh, h1 = x1 % nh;
            const int g2 = x2 / nh, h2 = x2 % nh;
            if (h1 == h2) {
                d.compose_v_entry(x1, x2) = square(group.op(g2, g1), h1);
            }
            if (d.tH[x1] == d.sH[x2]) {
                d.compose_h_entry(x1, x2) = square(g1, sub.op(h2, h1));
            }
        }
    }
    const int e = group.identity();
    const int eh = sub.identity();
    for (int h = 0; h < nh; ++h) {
        d.unitV.push_back(square(e, h));
    }
    for (int g = 0; g < ng; ++g) {
        d.unitH.push_back(square(g, eh));
    }
    for (int x = 0; x < n; ++x) {
        const int g = x / nh, h = x % nh;
        d.invV.push_back(square(group.inverse(g), h));
        d.invH.push_back(square(conj(h, g), sub.inverse(h)));
    }
    return d;
}

DoubleGroupoid build_pair_double(const FiniteGroupoid& g) {
    g.check_structure();
    DoubleGroupoid d;
    d.vertical = g;
    d.horizontal = build_pair_groupoid(g.objects);
    const int na = static_cast<int>(g.arrow_count());
    const int no = static_cast<int>(g.object_count());
    const int n = na * na;
    auto square = [na](int a, int b) { return a * na + b; };
    for (int a = 0; a < na; ++a) {
        for (int b = 0; b < na; ++b) {
            d.squares.push_back("(" + g.arrows[a] + "," + g.arrows[b] + ")");
            d.sV.push_back(a);
            d.tV.push_back(b);
            d.sH.push_back(g.src[a] * no + g.src[b]);
            d.tH.push_back(g.tgt[a] * no + g.tgt[b]);
        }
    }
    d.mV.assign(static_cast<std::size_t>(n) * n, -1);
    d.mH = d.mV;
    for (int x1 = 0; x1 < n; ++x1) {
        for (int x2 = 0; x2 < n; ++x2) {
            const int a1 = x1 / na, b1 = x1 % na;
            const int a2 = x2 / na, b2 = x2 % na;
            if (b1 == a2) {
                d.compose_v_entry(x1, x2) = square(a1, b2);
            }
            if (g.composable(a1, a2) && g.composable(b1, b2)) {
                d.compose_h_entry(x1, x2) = square(g.product(a1, a2), g.product(b1, b2));
            }
        }
    }
    for (int a = 0; a < na; ++a) {
        d.unitV.push_back(square(a, a));
    }
    for (int u = 0; u < no; ++u) {
        for (int v = 0; v < no; ++v) {
            d.unitH.push_back(square(g.unit[u], g.unit[v]));
        }
    }
    for (int x = 0; x < n; ++x) {
        const int a = x / na, b = x % na;
        d.invV.push_back(square(b, a));
        d.invH.push_back(square(g.inv[a], g.inv[b]));
    }
    return d;
}

DoubleGroupoid build_g_groupoid_double(const FiniteGroupoid& g, const GroupTable& group,
                                       const GroupoidAction& action) {
    g.check_structure();
    check_group(group);
    const int ng = static_cast<int>(group.order());
    const int na = static_cast<int>(g.arrow_count());
    const int no = static_cast<int>(g.object_count());
    if (action.arrow_action.size() != static_cast<std::size_t>(ng) * na ||
        action.object_action.size() != static_cast<std::size_t>(ng) * no) {
        throw StructuralError("G-groupoid action tables have wrong size");
    }
    auto act1 = [&](int k, int x) { return action.arrow_action[static_cast<std::size_t>(k) * na + x]; };
    auto act0 = [&](int k, int u) { return action.object_action[static_cast<std::size_t>(k) * no + u]; };
    for (int v : action.arrow_action) {
        if (v < 0 || v >= na) {
            throw StructuralError("arrow action refers to a missing arrow");
        }
    }
    const int e = group.identity();
    for (int k = 0; k < ng; ++k) {
        for (int x = 0; x < na; ++x) {
            if (act1(e, x) != x) {
                throw DomainError("identity does not fix an arrow", {g.arrows[x]});
            }
            for (int l = 0; l < ng; ++l) {
                if (act1(k, act1(l, x)) != act1(group.op(k, l), x)) {
                    throw DomainError("arrow action is not compatible with the group law",
                                      {group.elements[k], group.elements[l], g.arrows[x]});
                }
            }
            if (g.src[act1(k, x)] != act0(k, g.src[x]) || g.tgt[act1(k, x)] != act0(k, g.tgt[x])) {
                throw DomainError("source/target are not equivariant", {group.elements[k], g.arrows[x]});
            }
            for (int y = 0; y < na; ++y) {
                if (g.composable(x, y) && act1(k, g.product(x, y)) != g.product(act1(k, x), act1(k, y))) {
                    throw DomainError("multiplication is not equivariant",
                                      {group.elements[k], g.arrows[x], g.arrows[y]});
                }
            }
        }
        for (int u = 0; u < no; ++u) {
            if (act1(k, g.unit[u]) != g.unit[act0(k, u)]) {
                throw DomainError("units are not equivariant", {group.elements[k], g.objects[u]});
            }
        }
    }

    DoubleGroupoid d;
    d.vertical = g;
    d.horizontal = build_action_groupoid(group, g.objects, action.object_action);
    const int n = na * ng;
    auto square = [ng](int x, int k) { return x * ng + k; };
    auto edge = [no](int k, int u) { return k * no + u; };
    for (int x = 0; x < na; ++x) {
        for (int k = 0; k < ng; ++k) {
            d.squares.push_back("(" + g.arrows[x] + "," + group.elements[k] + ")");
            d.sV.push_back(x);
            d.tV.push_back(act1(k, x));
            d.sH.push_back(edge(k, g.src[x]));
            d.tH.push_back(edge(k, g.tgt[x]));
        }
    }
    d.mV.assign(static_cast<std::size_t>(n) * n, -1);
    d.mH = d.mV;
    for (int s1 = 0; s1 < n; ++s1) {
        for (int s2 = 0; s2 < n; ++s2) {
            const int x = s1 / ng, k = s1 % ng;
            const int y = s2 / ng, l = s2 % ng;
            if (y == act1(k, x)) {
                d.compose_v_entry(s1, s2) = square(x, group.op(l, k));
            }
            if (k == l && g.composable(x, y)) {
                d.compose_h_entry(s1, s2) = square(g.product(x, y), k);
            }
        }
    }
    for (int x = 0; x < na; ++x) {
        d.unitV.push_back(square(x, e));
    }
    for (int k = 0; k < ng; ++k) {
        for (int u = 0; u < no; ++u) {
            d.unitH.push_back(square(g.unit[u], k));
        }
    }
    for (int s = 0; s < n; ++s) {
        const int x = s / ng, k = s % ng;
        d.invV.push_back(square(act1(k, x), group.inverse(k)));
        d.invH.push_back(square(g.inv[x], k));
    }
    return d;
}

DoubleGroupoid build_double_example(const DoubleExample& example) {
    return std::visit(
        [](const auto& ex) -> DoubleGroupoid {
            using T = std::decay_t<decltype(ex)>;
            if constexpr (std::is_same_v<T, ConstantDouble>) {
                return build_constant_double(ex.points);
            } else if constexpr (std::is_same_v<T, GroupSubgroupDouble>) {
                return build_group_subgroup_double(ex.group, ex.subgroup);
            } else if constexpr (std::is_same_v<T, PairDouble>) {
                return build_pair_double(ex.base);
            } else {
                return build_g_groupoid_double(ex.base, ex.group, ex.action);
            }
        },
        example);
}

// Bisimplicial nerve ----------------------------------------------------------------

std::optional<std::size_t> BiNerveLevel::index_of(std::span<const int> cell) const {
    auto it = std::lower_bound(cells.begin(), cells.end(), cell, [](const Tuple& a, std::span<const int> b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    if (it == cells.end() || !std::equal(it->begin(), it->end(), cell.begin(), cell.end())) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - cells.begin());
}

bool is_binerve_cell(const DoubleGroupoid& d, int p, int q, std::span<const int> cell) {
    if (p < 0 || q < 0) {
        return false;
    }
    if (q == 0) {
        return p == 0 ? is_nerve_tuple(d.vertical, 0, cell) : is_nerve_tuple(d.horizontal, p, cell);
    }
    if (p == 0) {
        return is_nerve_tuple(d.vertical, q, cell);
    }
    if (cell.size() != static_cast<std::size_t>(p) * q) {
        return false;
    }
    const int n = static_cast<int>(d.square_count());
    for (int x : cell) {
        if (x < 0 || x >= n) {
            return false;
        }
    }
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < q; ++j) {
            const int x = cell[i * q + j];
            if (j + 1 < q && d.tH[x] != d.sH[cell[i * q + j + 1]]) {
                return false;
            }
            if (i + 1 < p && d.tV[x] != d.sV[cell[(i + 1) * q + j]]) {
                return false;
            }
        }
    }
    return true;
}

BiNerveLevel binerve(const DoubleGroupoid& d, int p, int q, int cap) {
    if (p < 0 || q < 0) {
        throw DomainError("bidegree must be nonnegative");
    }
    if (p + q > cap) {
        throw ResourceError("bidegree (" + std::to_string(p) + "," + std::to_string(q) + ") exceeds cap " +
                            std::to_string(cap));
    }
    BiNerveLevel level;
    level.p = p;
    level.q = q;
    if (q == 0) {
        level.cells = (p == 0 ? nerve(d.vertical, 0, cap) : nerve(d.horizontal, p, cap)).tuples;
        return level;
    }
    if (p == 0) {
        level.cells = nerve(d.vertical, q, cap).tuples;
        return level;
    }
    const int n = static_cast<int>(d.square_count());
    std::vector<std::vector<int>> out_h(d.horizontal.arrow_count()), out_v(d.vertical.arrow_count());
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (int x = 0; x < n; ++x) {
        out_h[d.sH[x]].push_back(x);
        out_v[d.sV[x]].push_back(x);
    }
    Tuple grid(static_cast<std::size_t>(p) * q, -1);
    auto fill = [&](auto&& self, int pos) -> void {
        if (pos == p * q) {
            level.cells.push_back(grid);
            return;
        }
        const int i = pos / q, j = pos % q;
        const std::vector<int>* candidates = &all;
        if (j > 0) {
            candidates = &out_h[d.tH[grid[pos - 1]]];
        } else if (i > 0) {
            candidates = &out_v[d.tV[grid[pos - q]]];
        }
        for (int x : *candidates) {
            if (i > 0 && d.sV[x] != d.tV[grid[pos - q]]) {
                continue;
            }
            grid[pos] = x;
            self(self, pos + 1);
        }
    };
    fill(fill, 0);
    return level;
}

Tuple binerve_face(const DoubleGroupoid& d, int p, int q, Axis axis, int i, std::span<const int> cell) {
    const int range = axis == Axis::horizontal ? p : q;
    if (range < 1 || i < 0 || i > range) {
        throw DomainError("face index " + std::to_string(i) + " out of range for bidegree (" + std::to_string(p) +
                          "," + std::to_string(q) + ")");
    }
    if (!is_binerve_cell(d, p, q, cell)) {
        throw DomainError("cell is not in the bisimplicial nerve level (" + std::to_string(p) + "," +
                          std::to_string(q) + ")");
    }
    if (axis == Axis::horizontal) {
        if (q == 0) {
            return nerve_face(d.horizontal, p, i, cell);
        }
        Tuple out;
        if (p == 1) {
            for (int x : cell) {
                out.push_back(i == 0 ? d.tV[x] : d.sV[x]);
            }
            return out;
        }
        out.reserve(static_cast<std::size_t>(p - 1) * q);
        for (int r = 0; r < p; ++r) {
            if ((i == 0 && r == 0) || (i == p && r == p - 1) || (i > 0 && i < p && r == i)) {
                continue;
            }
            for (int j = 0; j < q; ++j) {
                if (i > 0 && i < p && r == i - 1) {
                    out.push_back(d.compose_v(cell[r * q + j], cell[(r + 1) * q + j]));
                } else {
                    out.push_back(cell[r * q + j]);
                }
            }
        }
        return out;
    }
    if (p == 0) {
        return nerve_face(d.vertical, q, i, cell);
    }
    Tuple out;
    if (q == 1) {
        for (int x : cell) {
            out.push_back(i == 0 ? d.tH[x] : d.sH[x]);
        }
        return out;
    }
    out.reserve(static_cast<std::size_t>(p) * (q - 1));
    for (int r = 0; r < p; ++r) {
        for (int j = 0; j < q; ++j) {
            if ((i == 0 && j == 0) || (i == q && j == q - 1) || (i > 0 && i < q && j == i)) {
                continue;
            }
            if (i > 0 && i < q && j == i - 1) {
                out.push_back(d.compose_h(cell[r * q + j], cell[r * q + j + 1]));
            } else {
                out.push_back(cell[r * q + j]);
            }
        }
    }
    return out;
}

std::string describe_binerve_cell(const DoubleGroupoid& d, int p, int q, std::span<const int> cell) {
    if (q == 0) {
        return p == 0 ? describe_nerve_tuple(d.vertical, 0, cell) : describe_nerve_tuple(d.horizontal, p, cell);
    }
    if (p == 0) {
        return describe_nerve_tuple(d.vertical, q, cell);
    }
    std::string s;
    for (int i = 0; i < p; ++i) {
        if (i) {
            s += ";";
        }
        for (int j = 0; j < q; ++j) {
            if (j) {
                s += "|";
            }
            s += d.squares.at(cell[i * q + j]);
        }
    }
    return s;
}

}  // namespace dblext
