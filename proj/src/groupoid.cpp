#include "dblext/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dblext/errors.hpp"
#include "dblext/parallel.hpp"

namespace dblext {

namespace {

std::optional<int> find_id(const std::vector<Id>& ids, std::string_view id) {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) {
        return std::nullopt;
    }
    return static_cast<int>(it - ids.begin());
}

void check_unique(const std::vector<Id>& ids, const char* what) {
    std::set<std::string_view> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw StructuralError(std::string("duplicate ") + what + " id '" + id + "'");
        }
    }
}

void check_range(const std::vector<int>& v, std::size_t expected_size, int lo, int hi, const char* table) {
    if (v.size() != expected_size) {
        throw StructuralError(std::string("table '") + table + "' has size " + std::to_string(v.size()) +
                              ", expected " + std::to_string(expected_size));
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < lo || v[i] >= hi) {
            throw StructuralError(std::string("table '") + table + "' entry " + std::to_string(i) +
                                  " refers to missing id " + std::to_string(v[i]));
        }
    }
}

}  // namespace

std::optional<int> FiniteGroupoid::find_object(std::string_view id) const { return find_id(objects, id); }

std::optional<int> FiniteGroupoid::find_arrow(std::string_view id) const { return find_id(arrows, id); }

void FiniteGroupoid::check_structure() const {
    check_unique(objects, "object");
    check_unique(arrows, "arrow");
    const int n_obj = static_cast<int>(objects.size());
    const int n_arr = static_cast<int>(arrows.size());
    check_range(src, arrows.size(), 0, n_obj, "src");
    check_range(tgt, arrows.size(), 0, n_obj, "tgt");
    check_range(mult, arrows.size() * arrows.size(), -1, n_arr, "mult");
    check_range(unit, objects.size(), 0, n_arr, "unit");
    check_range(inv, arrows.size(), 0, n_arr, "inv");
}

// Groups ----------------------------------------------------------------------

int GroupTable::identity() const {
    for (int e = 0; e < static_cast<int>(order()); ++e) {
        bool ok = true;
        for (int a = 0; a < static_cast<int>(order()) && ok; ++a) {
            ok = op(e, a) == a && op(a, e) == a;
        }
        if (ok) {
            return e;
        }
    }
    throw DomainError("group table has no identity");
}

int GroupTable::inverse(int a) const {
    const int e = identity();
    for (int b = 0; b < static_cast<int>(order()); ++b) {
        if (op(a, b) == e && op(b, a) == e) {
            return b;
        }
    }
    throw DomainError("group element '" + elements[a] + "' has no inverse", {elements[a]});
}

GroupTable cyclic_group(int n) {
    if (n < 1) {
        throw DomainError("cyclic group needs positive order");
    }
    GroupTable g;
    for (int i = 0; i < n; ++i) {
        g.elements.push_back(std::to_string(i));
    }
    g.table.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            g.table[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
        }
    }
    return g;
}

GroupTable klein_four_group() {
    GroupTable g = direct_product(cyclic_group(2), cyclic_group(2));
    return g;
}

GroupTable direct_product(const GroupTable& a, const GroupTable& b) {
    GroupTable g;
    const int na = static_cast<int>(a.order());
    const int nb = static_cast<int>(b.order());
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            g.elements.push_back(a.elements[i] + b.elements[j]);
        }
    }
    const int n = na * nb;
    g.table.resize(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            int i = a.op(x / nb, y / nb);
            int j = b.op(x % nb, y % nb);
            g.table[static_cast<std::size_t>(x) * n + y] = i * nb + j;
        }
    }
    return g;
}

GroupTable symmetric_group(int n) {
    if (n < 1 || n > 5) {
        throw DomainError("symmetric_group supports 1 <= n <= 5");
    }
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    GroupTable g;
    for (const auto& q : perms) {
        std::string name;
        for (int v : q) {
            name += std::to_string(v);
        }
        g.elements.push_back(name);
    }
    const std::size_t order = perms.size();
    g.table.resize(order * order);
    for (std::size_t a = 0; a < order; ++a) {
        for (std::size_t b = 0; b < order; ++b) {
            // (a*b)(i) = a(b(i))
            std::vector<int> c(n);
            for (int i = 0; i < n; ++i) {
                c[i] = perms[a][perms[b][i]];
            }
            auto it = std::find(perms.begin(), perms.end(), c);
            g.table[a * order + b] = static_cast<int>(it - perms.begin());
        }
    }
    return g;
}

void check_group(const GroupTable& g) {
    const int n = static_cast<int>(g.order());
    if (n == 0 || g.table.size() != static_cast<std::size_t>(n) * n) {
        throw StructuralError("group table has wrong size");
    }
    for (int v : g.table) {
        if (v < 0 || v >= n) {
            throw StructuralError("group table refers to missing element");
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                if (g.op(g.op(a, b), c) != g.op(a, g.op(b, c))) {
                    throw DomainError("group table is not associative",
                                      {g.elements[a], g.elements[b], g.elements[c]});
                }
            }
        }
    }
    for (int a = 0; a < n; ++a) {
        (void)g.inverse(a);
    }
}

// Builders --------------------------------------------------------------------

FiniteGroupoid build_pair_groupoid(const std::vector<Id>& points) {
    if (points.empty()) {
        throw DomainError("pair groupoid of the empty set");
    }
    const int n = static_cast<int>(points.size());
    FiniteGroupoid g;
    g.objects = points;
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            g.arrows.push_back("(" + points[u] + "," + points[v] + ")");
            g.src.push_back(u);
            g.tgt.push_back(v);
        }
    }
    const int arrows = n * n;
    g.mult.assign(static_cast<std::size_t>(arrows) * arrows, -1);
    for (int x = 0; x < arrows; ++x) {
        for (int y = 0; y < arrows; ++y) {
            if (g.tgt[x] == g.src[y]) {
                g.product_entry(x, y) = g.src[x] * n + g.tgt[y];
            }
        }
    }
    for (int u = 0; u < n; ++u) {
        g.unit.push_back(u * n + u);
    }
    for (int x = 0; x < arrows; ++x) {
        g.inv.push_back(g.tgt[x] * n + g.src[x]);
    }
    return g;
}

FiniteGroupoid build_action_groupoid(const GroupTable& group, const std::vector<Id>& points,
                                     const std::vector<int>& act) {
    check_group(group);
    if (points.empty()) {
        throw DomainError("action groupoid over the empty set");
    }
    const int ng = static_cast<int>(group.order());
    const int nx = static_cast<int>(points.size());
    if (act.size() != static_cast<std::size_t>(ng) * nx) {
        throw StructuralError("action table has wrong size");
    }
    for (int v : act) {
        if (v < 0 || v >= nx) {
            throw StructuralError("action table refers to a missing point");
        }
    }
    auto acts = [&](int g, int u) { return act[static_cast<std::size_t>(g) * nx + u]; };
    const int e = group.identity();
    for (int u = 0; u < nx; ++u) {
        if (acts(e, u) != u) {
            throw DomainError("identity does not act trivially", {group.elements[e], points[u]});
        }
    }
    for (int g = 0; g < ng; ++g) {
        for (int h = 0; h < ng; ++h) {
            for (int u = 0; u < nx; ++u) {
                if (acts(g, acts(h, u)) != acts(group.op(g, h), u)) {
                    throw DomainError("action is not compatible with the group law",
                                      {group.elements[g], group.elements[h], points[u]});
                }
            }
        }
    }

    FiniteGroupoid out;
    out.objects = points;
    for (int g = 0; g < ng; ++g) {
        for (int u = 0; u < nx; ++u) {
            out.arrows.push_back(nx == 1 ? group.elements[g] : group.elements[g] + "@" + points[u]);
            out.src.push_back(u);
            out.tgt.push_back(acts(g, u));
        }
    }
    const int arrows = ng * nx;
    out.mult.assign(static_cast<std::size_t>(arrows) * arrows, -1);
    for (int x = 0; x < arrows; ++x) {
        for (int y = 0; y < arrows; ++y) {
            if (out.tgt[x] == out.src[y]) {
                int g = x / nx;
                int h = y / nx;
                out.product_entry(x, y) = group.op(h, g) * nx + out.src[x];
            }
        }
    }
    for (int u = 0; u < nx; ++u) {
        out.unit.push_back(e * nx + u);
    }
    for (int x = 0; x < arrows; ++x) {
        out.inv.push_back(group.inverse(x / nx) * nx + out.tgt[x]);
    }
    return out;
}

FiniteGroupoid one_object_groupoid(const GroupTable& group) {
    return build_action_groupoid(group, {"*"}, std::vector<int>(group.order(), 0));
}

FiniteGroupoid build_cech_groupoid(const std::vector<Id>& space,
                                   const std::vector<std::vector<Id>>& cover) {
    if (space.empty()) {
        throw DomainError("Cech groupoid of the empty space");
    }
    std::vector<std::vector<bool>> member(cover.size(), std::vector<bool>(space.size(), false));
    std::vector<bool> covered(space.size(), false);
    for (std::size_t a = 0; a < cover.size(); ++a) {
        for (const auto& x : cover[a]) {
            auto it = std::find(space.begin(), space.end(), x);
            if (it == space.end()) {
                throw DomainError("cover element contains '" + x + "' which is not in the space", {x});
            }
            member[a][it - space.begin()] = true;
            covered[it - space.begin()] = true;
        }
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!covered[i]) {
            throw DomainError("point '" + space[i] + "' is not covered", {space[i]});
        }
    }

    FiniteGroupoid g;
    // object index of (alpha, x)
    std::vector<std::vector<int>> obj(cover.size(), std::vector<int>(space.size(), -1));
    for (std::size_t a = 0; a < cover.size(); ++a) {
        for (std::size_t i = 0; i < space.size(); ++i) {
            if (member[a][i]) {
                obj[a][i] = static_cast<int>(g.objects.size());
                g.objects.push_back(space[i] + "@" + std::to_string(a));
            }
        }
    }
    struct Chart {
        std::size_t a, b, x;
    };
    std::vector<Chart> charts;
    for (std::size_t a = 0; a < cover.size(); ++a) {
        for (std::size_t b = 0; b < cover.size(); ++b) {
            for (std::size_t i = 0; i < space.size(); ++i) {
                if (member[a][i] && member[b][i]) {
                    charts.push_back({a, b, i});
                    g.arrows.push_back(space[i] + "@" + std::to_string(a) + "-" + std::to_string(b));
                    g.src.push_back(obj[a][i]);
                    g.tgt.push_back(obj[b][i]);
                }
            }
        }
    }
    auto find_chart = [&](std::size_t a, std::size_t b, std::size_t x) {
        for (std::size_t k = 0; k < charts.size(); ++k) {
            if (charts[k].a == a && charts[k].b == b && charts[k].x == x) {
                return static_cast<int>(k);
            }
        }
        return -1;
    };
    const std::size_t n = charts.size();
    g.mult.assign(n * n, -1);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (g.tgt[x] == g.src[y]) {
                g.mult[x * n + y] = find_chart(charts[x].a, charts[y].b, charts[x].x);
            }
        }
    }
    g.unit.assign(g.objects.size(), -1);
    for (std::size_t a = 0; a < cover.size(); ++a) {
        for (std::size_t i = 0; i < space.size(); ++i) {
            if (member[a][i]) {
                g.unit[obj[a][i]] = find_chart(a, a, i);
            }
        }
    }
    for (const auto& c : charts) {
        g.inv.push_back(find_chart(c.b, c.a, c.x));
    }
    return g;
}

FiniteGroupoid build_unit_groupoid(const std::vector<Id>& points) {
    if (points.empty()) {
        throw DomainError("unit groupoid of the empty set");
    }
    FiniteGroupoid g;
    g.objects = points;
    g.arrows = points;
    const int n = static_cast<int>(points.size());
    g.mult.assign(static_cast<std::size_t>(n) * n, -1);
    for (int u = 0; u < n; ++u) {
        g.src.push_back(u);
        g.tgt.push_back(u);
        g.unit.push_back(u);
        g.inv.push_back(u);
        g.product_entry(u, u) = u;
    }
    return g;
}

FiniteGroupoid permute_arrows(const FiniteGroupoid& g, const std::vector<int>& perm) {
    const std::size_t n = g.arrow_count();
    if (perm.size() != n) {
        throw DomainError("permutation has wrong length");
    }
    std::vector<int> where(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        where.at(perm[i]) = static_cast<int>(i);
    }
    FiniteGroupoid out;
    out.objects = g.objects;
    out.mult.assign(n * n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        out.arrows.push_back(g.arrows[perm[i]]);
        out.src.push_back(g.src[perm[i]]);
        out.tgt.push_back(g.tgt[perm[i]]);
        out.inv.push_back(where[g.inv[perm[i]]]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            int m = g.product(perm[i], perm[j]);
            out.mult[i * n + j] = m < 0 ? -1 : where[m];
        }
    }
    for (int u : g.unit) {
        out.unit.push_back(where[u]);
    }
    return out;
}

// Validation ------------------------------------------------------------------

ValidationReport validate_groupoid(const FiniteGroupoid& g) {
    g.check_structure();
    const int n = static_cast<int>(g.arrow_count());
    const auto& A = g.arrows;
    ValidationReport report;

    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            const int m = g.product(x, y);
            const bool comp = g.composable(x, y);
            if ((m >= 0) != comp) {
                report.add("composability domain", {A[x], A[y]},
                           comp ? "product undefined on a composable pair" : "product defined on a non-composable pair");
                continue;
            }
            if (m < 0) {
                continue;
            }
            if (g.src[m] != g.src[x]) {
                report.add("src of product", {A[x], A[y]});
            }
            if (g.tgt[m] != g.tgt[y]) {
                report.add("tgt of product", {A[x], A[y]});
            }
        }
    }

    // associativity over composable triples, partitioned by first entry
    auto chunks = parallel_chunks<ValidationReport>(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
        ValidationReport local;
        for (std::size_t xi = begin; xi < end; ++xi) {
            const int x = static_cast<int>(xi);
            for (int y = 0; y < n; ++y) {
                if (!g.composable(x, y)) {
                    continue;
                }
                for (int z = 0; z < n; ++z) {
                    if (!g.composable(y, z)) {
                        continue;
                    }
                    const int xy = g.product(x, y);
                    const int yz = g.product(y, z);
                    const int lhs = xy >= 0 && g.composable(xy, z) ? g.product(xy, z) : -1;
                    const int rhs = yz >= 0 && g.composable(x, yz) ? g.product(x, yz) : -1;
                    if (lhs != rhs) {
                        local.add("associativity", {A[x], A[y], A[z]});
                    }
                }
            }
        }
        return local;
    });
    for (const auto& c : chunks) {
        report.merge(c);
    }

    for (int o = 0; o < static_cast<int>(g.object_count()); ++o) {
        const int e = g.unit[o];
        if (g.src[e] != o || g.tgt[e] != o) {
            report.add("units", {g.objects[o], A[e]}, "unit arrow is not a loop at its object");
        }
    }
    for (int x = 0; x < n; ++x) {
        const int el = g.unit[g.src[x]];
        const int er = g.unit[g.tgt[x]];
        if (!g.composable(el, x) || g.product(el, x) != x || !g.composable(x, er) || g.product(x, er) != x) {
            report.add("units", {A[x]});
        }
    }
    for (int x = 0; x < n; ++x) {
        const int y = g.inv[x];
        const bool ok = g.composable(x, y) && g.composable(y, x) && g.product(x, y) == g.unit[g.src[x]] &&
                        g.product(y, x) == g.unit[g.tgt[x]];
        if (!ok) {
            report.add("inverses", {A[x], A[y]});
        }
    }
    return report;
}

// Nerve -------------------------------------------------------------------------

std::optional<std::size_t> NerveLevel::index_of(std::span<const int> tuple) const {
    auto it = std::lower_bound(tuples.begin(), tuples.end(), tuple, [](const Tuple& a, std::span<const int> b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    if (it == tuples.end() || !std::equal(it->begin(), it->end(), tuple.begin(), tuple.end())) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - tuples.begin());
}

bool is_nerve_tuple(const FiniteGroupoid& g, int p, std::span<const int> tuple) {
    if (p == 0) {
        return tuple.size() == 1 && tuple[0] >= 0 && tuple[0] < static_cast<int>(g.object_count());
    }
    if (tuple.size() != static_cast<std::size_t>(p)) {
        return false;
    }
    for (int x : tuple) {
        if (x < 0 || x >= static_cast<int>(g.arrow_count())) {
            return false;
        }
    }
    for (int j = 0; j + 1 < p; ++j) {
        if (!g.composable(tuple[j], tuple[j + 1])) {
            return false;
        }
    }
    return true;
}

NerveLevel nerve(const FiniteGroupoid& g, int p, int cap) {
    if (p < 0) {
        throw DomainError("nerve level must be nonnegative");
    }
    if (p > cap) {
        throw ResourceError("nerve level " + std::to_string(p) + " exceeds cap " + std::to_string(cap));
    }
    NerveLevel level;
    level.p = p;
    if (p == 0) {
        for (int o = 0; o < static_cast<int>(g.object_count()); ++o) {
            level.tuples.push_back({o});
        }
        return level;
    }
    std::vector<std::vector<int>> outgoing(g.object_count());
    for (int x = 0; x < static_cast<int>(g.arrow_count()); ++x) {
        outgoing[g.src[x]].push_back(x);
    }
    Tuple current;
    current.reserve(p);
    auto extend = [&](auto&& self) -> void {
        if (static_cast<int>(current.size()) == p) {
            level.tuples.push_back(current);
            return;
        }
        const std::vector<int>* candidates = nullptr;
        std::vector<int> all;
        if (current.empty()) {
            all.resize(g.arrow_count());
            std::iota(all.begin(), all.end(), 0);
            candidates = &all;
        } else {
            candidates = &outgoing[g.tgt[current.back()]];
        }
        for (int x : *candidates) {
            current.push_back(x);
            self(self);
            current.pop_back();
        }
    };
    extend(extend);
    return level;
}

Tuple nerve_face(const FiniteGroupoid& g, int p, int i, std::span<const int> tuple) {
    if (p < 1 || i < 0 || i > p) {
        throw DomainError("face index " + std::to_string(i) + " out of range for level " + std::to_string(p));
    }
    if (!is_nerve_tuple(g, p, tuple)) {
        throw DomainError("tuple is not in nerve level " + std::to_string(p));
    }
    if (p == 1) {
        return {i == 0 ? g.tgt[tuple[0]] : g.src[tuple[0]]};
    }
    Tuple out;
    out.reserve(p - 1);
    if (i == 0) {
        out.assign(tuple.begin() + 1, tuple.end());
    } else if (i == p) {
        out.assign(tuple.begin(), tuple.end() - 1);
    } else {
        out.assign(tuple.begin(), tuple.begin() + (i - 1));
        out.push_back(g.product(tuple[i - 1], tuple[i]));
        out.insert(out.end(), tuple.begin() + (i + 1), tuple.end());
    }
    return out;
}

std::string describe_nerve_tuple(const FiniteGroupoid& g, int p, std::span<const int> tuple) {
    if (p == 0) {
        return g.objects.at(tuple[0]);
    }
    std::string s;
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        if (j) {
            s += "|";
        }
        s += g.arrows.at(tuple[j]);
    }
    return s;
}

}  // namespace dblext
