#include "dblext/extensions.hpp"

#include <set>

#include "dblext/errors.hpp"
#include "dblext/parallel.hpp"

namespace dblext {

namespace {

std::int64_t mod_n(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

std::vector<std::int64_t> cochain_units(const NerveComplex& complex, const Cochain& c, std::int64_t n) {
    if (c.values.size() != complex.level(c.p).size()) {
        throw DomainError("cochain does not match nerve level " + std::to_string(c.p));
    }
    std::vector<std::int64_t> out(c.values.size());
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        auto k = c.values[i].in_units_of(n);
        if (!k) {
            throw DomainError("value " + c.values[i].to_string() + " does not lie in the fiber (1/" +
                                  std::to_string(n) + ")Z/Z",
                              {complex.describe_cell(c.p, i)});
        }
        out[i] = *k;
    }
    return out;
}

// First simplex where d'c != 0, described.
std::optional<std::vector<Id>> first_nonclosed(const NerveComplex& complex, const Cochain& c) {
    const Cochain dc = differential(complex, c);
    for (std::size_t i = 0; i < dc.values.size(); ++i) {
        if (!dc.values[i].is_zero()) {
            return std::vector<Id>{complex.describe_cell(dc.p, i), dc.values[i].to_string()};
        }
    }
    return std::nullopt;
}

}  // namespace

void CentralExtension::check_structure() const {
    base.check_structure();
    total.check_structure();
    if (fiber_order < 1) {
        throw StructuralError("fiber order must be at least 1");
    }
    if (proj.size() != total.arrow_count()) {
        throw StructuralError("projection table has wrong size");
    }
    for (int x : proj) {
        if (x < 0 || x >= static_cast<int>(base.arrow_count())) {
            throw StructuralError("projection refers to a missing base arrow");
        }
    }
    if (act.size() != total.arrow_count() * static_cast<std::size_t>(fiber_order)) {
        throw StructuralError("fiber action table has wrong size");
    }
    for (int y : act) {
        if (y < 0 || y >= static_cast<int>(total.arrow_count())) {
            throw StructuralError("fiber action refers to a missing total arrow");
        }
    }
}

ValidationReport validate_extension(const CentralExtension& e) {
    e.check_structure();
    ValidationReport report;
    report.merge(validate_groupoid(e.total), "total groupoid: ");
    if (e.total.objects != e.base.objects) {
        report.add("object identity", {}, "total and base groupoids have different object lists");
        return report;
    }
    const auto& B = e.base;
    const auto& T = e.total;
    const int nt = static_cast<int>(T.arrow_count());
    const std::int64_t n = e.fiber_order;

    for (int y = 0; y < nt; ++y) {
        if (B.src[e.proj[y]] != T.src[y] || B.tgt[e.proj[y]] != T.tgt[y]) {
            report.add("projection morphism", {T.arrows[y]}, "source/target");
        }
    }
    for (int o = 0; o < static_cast<int>(T.object_count()); ++o) {
        if (e.proj[T.unit[o]] != B.unit[o]) {
            report.add("projection morphism", {T.objects[o]}, "units");
        }
    }
    for (int y1 = 0; y1 < nt; ++y1) {
        for (int y2 = 0; y2 < nt; ++y2) {
            if (!T.composable(y1, y2) || T.product(y1, y2) < 0) {
                continue;
            }
            const int x1 = e.proj[y1], x2 = e.proj[y2];
            if (!B.composable(x1, x2) || e.proj[T.product(y1, y2)] != B.product(x1, x2)) {
                report.add("projection morphism", {T.arrows[y1], T.arrows[y2]}, "products");
            }
        }
    }
    for (int y = 0; y < nt; ++y) {
        for (std::int64_t k = 0; k < n; ++k) {
            const int yk = e.acted(y, k);
            if (e.proj[yk] != e.proj[y]) {
                report.add("fiber action", {T.arrows[y], e.fiber_value(k).to_string()}, "leaves the fiber");
            } else if (k == 0 && yk != y) {
                report.add("fiber action", {T.arrows[y], "0/1"}, "zero does not act trivially");
            } else {
                for (std::int64_t j = 0; j < n; ++j) {
                    if (e.acted(yk, j) != e.acted(y, (k + j) % n)) {
                        report.add("fiber action", {T.arrows[y], e.fiber_value(k).to_string(),
                                                    e.fiber_value(j).to_string()},
                                   "not compatible with addition");
                        break;
                    }
                }
            }
            if (k != 0 && yk == y) {
                report.add("fiber freeness", {T.arrows[y], e.fiber_value(k).to_string()});
            }
        }
    }
    for (int x = 0; x < static_cast<int>(B.arrow_count()); ++x) {
        std::set<int> fiber, orbit;
        for (int y = 0; y < nt; ++y) {
            if (e.proj[y] == x) fiber.insert(y);
        }
        if (!fiber.empty()) {
            for (std::int64_t k = 0; k < n; ++k) orbit.insert(e.acted(*fiber.begin(), k));
        }
        if (fiber.empty() || orbit != fiber) {
            report.add("fiber transitivity", {B.arrows[x]});
        }
    }
    auto chunks = parallel_chunks<ValidationReport>(static_cast<std::size_t>(nt), [&](std::size_t b, std::size_t end) {
        ValidationReport local;
        for (std::size_t i = b; i < end; ++i) {
            const int y1 = static_cast<int>(i);
            for (int y2 = 0; y2 < nt; ++y2) {
                if (!T.composable(y1, y2) || T.product(y1, y2) < 0) {
                    continue;
                }
                const int p = T.product(y1, y2);
                for (std::int64_t a1 = 0; a1 < n; ++a1) {
                    for (std::int64_t a2 = 0; a2 < n; ++a2) {
                        const int z1 = e.acted(y1, a1), z2 = e.acted(y2, a2);
                        const int lhs = T.composable(z1, z2) ? T.product(z1, z2) : -1;
                        if (lhs != e.acted(p, (a1 + a2) % n)) {
                            local.add("centrality", {T.arrows[y1], T.arrows[y2], e.fiber_value(a1).to_string(),
                                                     e.fiber_value(a2).to_string()});
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
    return report;
}

Section canonical_section(const CentralExtension& e) {
    Section s(e.base.arrow_count(), -1);
    for (int y = static_cast<int>(e.total.arrow_count()) - 1; y >= 0; --y) {
        s[e.proj[y]] = y;
    }
    for (std::size_t x = 0; x < s.size(); ++x) {
        if (s[x] < 0) {
            throw DomainError("empty fiber", {e.base.arrows[x]});
        }
    }
    return s;
}

void check_section(const CentralExtension& e, const Section& s) {
    if (s.size() != e.base.arrow_count()) {
        throw DomainError("section has wrong size");
    }
    for (std::size_t x = 0; x < s.size(); ++x) {
        if (s[x] < 0 || s[x] >= static_cast<int>(e.total.arrow_count()) || e.proj[s[x]] != static_cast<int>(x)) {
            throw DomainError("section does not lie over its arrow", {e.base.arrows[x]});
        }
    }
}

std::vector<std::int64_t> fiber_offsets(const CentralExtension& e, const Section& s) {
    check_section(e, s);
    std::vector<std::int64_t> off(e.total.arrow_count(), -1);
    for (std::size_t x = 0; x < s.size(); ++x) {
        for (std::int64_t k = 0; k < e.fiber_order; ++k) {
            const int y = e.acted(s[x], k);
            if (off[y] >= 0) {
                throw DomainError("fiber action is not free", {e.total.arrows[y]});
            }
            off[y] = k;
        }
    }
    for (std::size_t y = 0; y < off.size(); ++y) {
        if (off[y] < 0) {
            throw DomainError("fiber action is not transitive", {e.total.arrows[y]});
        }
    }
    return off;
}

CocyclePresentation curvature(const CentralExtension& e, const Section& s) {
    const auto off = fiber_offsets(e, s);
    NerveComplex complex(e.base);
    const auto& lvl = complex.level(2);
    CocyclePresentation out;
    out.fiber_order = e.fiber_order;
    out.sigma.p = 2;
    out.sigma.values.reserve(lvl.size());
    for (const auto& t : lvl.tuples) {
        const int a = s[t[0]], b = s[t[1]];
        const int prod = e.total.composable(a, b) ? e.total.product(a, b) : -1;
        const int x = e.base.product(t[0], t[1]);
        if (prod < 0 || e.proj[prod] != x) {
            throw DomainError("lifted product does not lie over the product",
                              {e.base.arrows[t[0]], e.base.arrows[t[1]]});
        }
        out.sigma.values.push_back(e.fiber_value(mod_n(off[prod] - off[s[x]], e.fiber_order)));
    }
    return out;
}

TorsorTensor natural_section_tensor(const CentralExtension& e, int x1hat, int x2hat, int bundle) {
    const int prod = e.total.composable(x1hat, x2hat) ? e.total.product(x1hat, x2hat) : -1;
    if (prod < 0) {
        throw DomainError("lifts are not composable", {e.total.arrows[x1hat], e.total.arrows[x2hat]});
    }
    TorsorTensor t;
    t.add(bundle, e.proj[x2hat], x2hat, 1);
    t.add(bundle, e.proj[prod], prod, -1);
    t.add(bundle, e.proj[x1hat], x1hat, 1);
    return t;
}

NaturalSectionReport natural_section_encoding(const CentralExtension& e, const Section& s,
                                              const std::vector<int>* lifts) {
    const auto off = fiber_offsets(e, s);
    const std::vector<int>& lift = lifts ? *lifts : s;
    check_section(e, lift);
    NerveComplex complex(e.base);
    auto offset = [&](int, int y) { return e.fiber_value(off[y]); };

    NaturalSectionReport out;
    out.encoding.p = 2;
    for (const auto& t : complex.level(2).tuples) {
        out.encoding.values.push_back(natural_section_tensor(e, lift[t[0]], lift[t[1]]).encode(offset));
    }
    const auto failing = first_nonclosed(complex, out.encoding);
    out.closed = !failing.has_value();

    out.trivialization = true;
    const auto& g = e.base;
    for (const auto& t : complex.level(3).tuples) {
        TorsorTensor delta;
        for (int i = 0; i <= 3; ++i) {
            const Tuple f = nerve_face(g, 3, i, t);
            delta.add(natural_section_tensor(e, lift[f[0]], lift[f[1]]), i % 2 == 0 ? 1 : -1);
        }
        if (!delta.cancels() || !delta.encode(offset).is_zero()) {
            out.trivialization = false;
            out.witness = {describe_nerve_tuple(g, 3, t)};
            break;
        }
    }
    if (failing && out.witness.empty()) {
        out.witness = *failing;
    }
    return out;
}

CentralExtension extension_from_cocycle(const FiniteGroupoid& base, std::int64_t n, const Cochain& sigma) {
    if (n < 1) {
        throw DomainError("fiber order must be at least 1");
    }
    if (sigma.p != 2) {
        throw DomainError("a cocycle presentation needs a 2-cochain");
    }
    NerveComplex complex(base);
    const auto units = cochain_units(complex, sigma, n);
    if (auto failing = first_nonclosed(complex, sigma)) {
        throw PreconditionError("cocycle is not closed", *failing);
    }
    const auto& lvl = complex.level(2);
    const int na = static_cast<int>(base.arrow_count());
    auto sig = [&](int x1, int x2) -> std::int64_t {
        const Tuple t{x1, x2};
        return units[*lvl.index_of(t)];
    };
    auto arrow = [n](int x, std::int64_t k) { return static_cast<int>(x * n + mod_n(k, n)); };

    CentralExtension e;
    e.base = base;
    e.fiber_order = n;
    e.total.objects = base.objects;
    for (int x = 0; x < na; ++x) {
        for (std::int64_t k = 0; k < n; ++k) {
            e.total.arrows.push_back(base.arrows[x] + "#" + std::to_string(k));
            e.total.src.push_back(base.src[x]);
            e.total.tgt.push_back(base.tgt[x]);
            e.proj.push_back(x);
            for (std::int64_t j = 0; j < n; ++j) {
                e.act.push_back(arrow(x, k + j));
            }
        }
    }
    const std::size_t nt = e.total.arrows.size();
    e.total.mult.assign(nt * nt, -1);
    for (int x1 = 0; x1 < na; ++x1) {
        for (int x2 = 0; x2 < na; ++x2) {
            if (!base.composable(x1, x2)) {
                continue;
            }
            const int x = base.product(x1, x2);
            const std::int64_t s = sig(x1, x2);
            for (std::int64_t a1 = 0; a1 < n; ++a1) {
                for (std::int64_t a2 = 0; a2 < n; ++a2) {
                    e.total.product_entry(arrow(x1, a1), arrow(x2, a2)) = arrow(x, a1 + a2 + s);
                }
            }
        }
    }
    for (int o = 0; o < static_cast<int>(base.object_count()); ++o) {
        const int u = base.unit[o];
        e.total.unit.push_back(arrow(u, -sig(u, u)));
    }
    for (int x = 0; x < na; ++x) {
        const int u = base.unit[base.src[x]];
        for (std::int64_t a = 0; a < n; ++a) {
            e.total.inv.push_back(arrow(base.inv[x], -a - sig(x, base.inv[x]) - sig(u, u)));
        }
    }
    return e;
}

NormalizedCocycle normalize_cocycle(const FiniteGroupoid& base, const Cochain& sigma) {
    NerveComplex complex(base);
    if (sigma.p != 2 || sigma.values.size() != complex.level(2).size()) {
        throw DomainError("normalization needs a 2-cochain on the nerve");
    }
    const auto& lvl = complex.level(2);
    NormalizedCocycle out;
    out.lambda = zero_cochain(complex, 1);
    for (int o = 0; o < static_cast<int>(base.object_count()); ++o) {
        const int u = base.unit[o];
        const Tuple t{u, u};
        out.lambda.values[u] = -sigma.values[*lvl.index_of(t)];
    }
    const Cochain shift = differential(complex, out.lambda);
    out.sigma = sigma;
    for (std::size_t i = 0; i < shift.values.size(); ++i) {
        out.sigma.values[i] += shift.values[i];
    }
    return out;
}

std::optional<EquivalenceWitness> are_equivalent(const CentralExtension& e1, const CentralExtension& e2) {
    if (!(e1.base == e2.base)) {
        throw DomainError("extensions have different bases");
    }
    if (e1.fiber_order != e2.fiber_order) {
        throw DomainError("extensions have different fiber orders");
    }
    const Section s1 = canonical_section(e1), s2 = canonical_section(e2);
    const Cochain sigma1 = curvature(e1, s1).sigma, sigma2 = curvature(e2, s2).sigma;
    std::vector<CircleValue> diff(sigma1.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = sigma1.values[i] - sigma2.values[i];
    }
    NerveComplex complex(e1.base);
    const auto r = solve_coboundary(complex, 2, diff, e1.fiber_order);
    if (!r.solvable) {
        return std::nullopt;
    }
    EquivalenceWitness w;
    w.lambda = Cochain{1, r.witness};
    const auto off1 = fiber_offsets(e1, s1);
    for (int y = 0; y < static_cast<int>(e1.total.arrow_count()); ++y) {
        const int x = e1.proj[y];
        const std::int64_t shift = *w.lambda.values[x].in_units_of(e1.fiber_order);
        w.isomorphism.push_back(e2.acted(s2[x], (off1[y] + shift) % e1.fiber_order));
    }
    return w;
}

// Bundle gerbes ---------------------------------------------------------------------

FiniteGroupoid fiber_product_groupoid(const Surjection& phi) {
    if (phi.phi.size() != phi.cover.size()) {
        throw StructuralError("surjection table has wrong size");
    }
    std::vector<bool> hit(phi.base.size(), false);
    for (int m : phi.phi) {
        if (m < 0 || m >= static_cast<int>(phi.base.size())) {
            throw StructuralError("surjection refers to a missing point");
        }
        hit[m] = true;
    }
    for (std::size_t m = 0; m < hit.size(); ++m) {
        if (!hit[m]) {
            throw DomainError("map is not surjective", {phi.base[m]});
        }
    }
    const int ny = static_cast<int>(phi.cover.size());
    FiniteGroupoid g;
    g.objects = phi.cover;
    std::vector<int> index(static_cast<std::size_t>(ny) * ny, -1);
    for (int y1 = 0; y1 < ny; ++y1) {
        for (int y2 = 0; y2 < ny; ++y2) {
            if (phi.phi[y1] != phi.phi[y2]) {
                continue;
            }
            index[y1 * ny + y2] = static_cast<int>(g.arrows.size());
            g.arrows.push_back("(" + phi.cover[y1] + "," + phi.cover[y2] + ")");
            g.src.push_back(y2);
            g.tgt.push_back(y1);
        }
    }
    const std::size_t na = g.arrows.size();
    g.mult.assign(na * na, -1);
    for (int a = 0; a < static_cast<int>(na); ++a) {
        for (int b = 0; b < static_cast<int>(na); ++b) {
            if (g.tgt[a] == g.src[b]) {
                g.product_entry(a, b) = index[g.tgt[b] * ny + g.src[a]];
            }
        }
    }
    for (int y = 0; y < ny; ++y) {
        g.unit.push_back(index[y * ny + y]);
    }
    for (int a = 0; a < static_cast<int>(na); ++a) {
        g.inv.push_back(index[g.src[a] * ny + g.tgt[a]]);
    }
    return g;
}

GerbeRecord bundle_gerbe(const Surjection& phi, const CentralExtension& extension) {
    GerbeRecord r;
    r.surjection = phi;
    r.groupoid = fiber_product_groupoid(phi);
    if (!(extension.base == r.groupoid)) {
        throw DomainError("extension is not over the fiber product groupoid");
    }
    r.extension = extension;
    const Section s = canonical_section(extension);
    const NaturalSectionReport nat = natural_section_encoding(extension, s);
    if (!nat.closed || !nat.trivialization) {
        throw GerbeConditionError("the natural section does not satisfy delta(s) = 1", nat.witness);
    }
    r.section_encoding = nat.encoding;
    r.delta_trivial = true;
    NerveComplex complex(r.groupoid);
    r.class_order = class_order(complex, 2, curvature(extension, s).sigma.values, extension.fiber_order);
    return r;
}

GerbeRecord bundle_gerbe(const Surjection& phi, std::int64_t n, const Cochain& section_encoding) {
    GerbeRecord r;
    r.surjection = phi;
    r.groupoid = fiber_product_groupoid(phi);
    NerveComplex complex(r.groupoid);
    if (section_encoding.p != 2) {
        throw DomainError("a gerbe section lives on the 2-simplices");
    }
    cochain_units(complex, section_encoding, n);
    if (auto failing = first_nonclosed(complex, section_encoding)) {
        throw GerbeConditionError("section does not satisfy delta(s) = 1", *failing);
    }
    Cochain sigma = section_encoding;
    for (auto& v : sigma.values) {
        v = -v;
    }
    r.extension = extension_from_cocycle(r.groupoid, n, sigma);
    r.section_encoding = section_encoding;
    r.delta_trivial = true;
    r.class_order = class_order(complex, 2, sigma.values, n);
    return r;
}

}  // namespace dblext
