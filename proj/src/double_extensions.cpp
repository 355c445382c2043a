#include "dblext/double_extensions.hpp"

#include <random>

#include "dblext/errors.hpp"

namespace dblext {

namespace {

std::vector<CircleValue> pair_table(const FiniteGroupoid& g, const Cochain& sigma) {
    const std::size_t n = g.arrow_count();
    std::vector<CircleValue> table(n * n);
    const NerveLevel lvl = nerve(g, 2);
    for (std::size_t i = 0; i < lvl.size(); ++i) {
        table[lvl.tuples[i][0] * n + lvl.tuples[i][1]] = sigma.values.at(i);
    }
    return table;
}

std::int64_t units_or_throw(const CircleValue& v, std::int64_t m, const std::string& where) {
    auto k = v.in_units_of(m);
    if (!k) {
        throw DomainError("value " + v.to_string() + " is not a multiple of 1/" + std::to_string(m), {where});
    }
    return *k;
}

std::int64_t lambda_units(const CentralExtension& e, const Cochain& lambda, const FiniteGroupoid& g, int x) {
    return units_or_throw(lambda.values[x], e.fiber_order, g.arrows[x]);
}

}  // namespace

DoubleExtension make_double_extension(DoubleGroupoid d, CentralExtension ev, CentralExtension eh,
                                      std::vector<CircleValue> ebar, std::optional<Section> ref_v,
                                      std::optional<Section> ref_h) {
    d.check_structure();
    ev.check_structure();
    eh.check_structure();
    if (!(ev.base == d.vertical)) {
        throw StructuralError("vertical extension is not over the vertical edge groupoid");
    }
    if (!(eh.base == d.horizontal)) {
        throw StructuralError("horizontal extension is not over the horizontal edge groupoid");
    }
    if (ev.fiber_order != eh.fiber_order) {
        throw StructuralError("edge extensions have different fiber orders (" + std::to_string(ev.fiber_order) +
                              " and " + std::to_string(eh.fiber_order) + ")");
    }
    if (ebar.size() != d.square_count()) {
        throw StructuralError("ebar must have one value per square");
    }
    DoubleExtension de;
    de.ref_v = ref_v ? *ref_v : canonical_section(ev);
    de.ref_h = ref_h ? *ref_h : canonical_section(eh);
    de.sigma_v = curvature(ev, de.ref_v).sigma;
    de.sigma_h = curvature(eh, de.ref_h).sigma;
    de.sigma_v_table = pair_table(d.vertical, de.sigma_v);
    de.sigma_h_table = pair_table(d.horizontal, de.sigma_h);
    de.d = std::move(d);
    de.ev = std::move(ev);
    de.eh = std::move(eh);
    de.ebar = std::move(ebar);
    return de;
}

CircleValue horizontal_residual(const DoubleExtension& de, int x1, int x2) {
    const auto& d = de.d;
    if (d.tV[x1] != d.sV[x2]) {
        throw DomainError("squares are not vertically composable", {d.squares[x1], d.squares[x2]});
    }
    const int m = d.compose_v(x1, x2);
    return de.ebar[x1] - de.ebar[m] + de.ebar[x2] - de.sigma_h_at(d.sH[x1], d.sH[x2]) +
           de.sigma_h_at(d.tH[x1], d.tH[x2]);
}

CircleValue vertical_residual(const DoubleExtension& de, int x1, int x2) {
    const auto& d = de.d;
    if (d.tH[x1] != d.sH[x2]) {
        throw DomainError("squares are not horizontally composable", {d.squares[x1], d.squares[x2]});
    }
    const int m = d.compose_h(x1, x2);
    return de.ebar[x1] - de.ebar[m] + de.ebar[x2] - de.sigma_v_at(d.tV[x1], d.tV[x2]) +
           de.sigma_v_at(d.sV[x1], d.sV[x2]);
}

ValidationReport validate_double_extension(const DoubleExtension& de) {
    ValidationReport report;
    const auto& d = de.d;
    for (const auto& cell : binerve(d, 2, 1).cells) {
        const CircleValue r = horizontal_residual(de, cell[0], cell[1]);
        if (!r.is_zero()) {
            report.add("horizontal compatibility", {describe_binerve_cell(d, 2, 1, cell), r.to_string()});
        }
    }
    for (const auto& cell : binerve(d, 1, 2).cells) {
        const CircleValue r = vertical_residual(de, cell[0], cell[1]);
        if (!r.is_zero()) {
            report.add("vertical compatibility", {describe_binerve_cell(d, 1, 2, cell), r.to_string()});
        }
    }
    return report;
}

// Solver ----------------------------------------------------------------------------------

SectionSolution solve_compatible_section(const DoubleGroupoid& d, const CentralExtension& ev,
                                         const CentralExtension& eh, std::int64_t m) {
    const std::vector<CircleValue> zero(d.square_count());
    const DoubleExtension de = make_double_extension(d, ev, eh, zero);
    const std::int64_t n = ev.fiber_order;
    if (m == 0) {
        m = 2 * n;
    }
    if (m < 1 || m % n != 0) {
        throw DomainError("modulus " + std::to_string(m) + " is not a multiple of the fiber order " +
                          std::to_string(n));
    }
    const auto h_cells = binerve(d, 2, 1).cells;
    const auto v_cells = binerve(d, 1, 2).cells;
    const std::size_t ns = d.square_count();
    IntMatrix a(h_cells.size() + v_cells.size(), ns);
    std::vector<std::int64_t> b;
    SectionSolution out;
    out.modulus = m;
    std::size_t row = 0;
    for (const auto& cell : h_cells) {
        const int x1 = cell[0], x2 = cell[1];
        a(row, x1) += 1;
        a(row, d.compose_v(x1, x2)) -= 1;
        a(row, x2) += 1;
        const CircleValue rhs = de.sigma_h_at(d.sH[x1], d.sH[x2]) - de.sigma_h_at(d.tH[x1], d.tH[x2]);
        b.push_back(units_or_throw(rhs, m, "rhs"));
        out.equations.push_back("H " + describe_binerve_cell(d, 2, 1, cell));
        ++row;
    }
    for (const auto& cell : v_cells) {
        const int x1 = cell[0], x2 = cell[1];
        a(row, x1) += 1;
        a(row, d.compose_h(x1, x2)) -= 1;
        a(row, x2) += 1;
        const CircleValue rhs = de.sigma_v_at(d.tV[x1], d.tV[x2]) - de.sigma_v_at(d.sV[x1], d.sV[x2]);
        b.push_back(units_or_throw(rhs, m, "rhs"));
        out.equations.push_back("V " + describe_binerve_cell(d, 1, 2, cell));
        ++row;
    }
    const ModSolution sol = solve_mod(a, b, m);
    out.solvable = sol.solvable;
    out.count = sol.count;
    out.certificate = sol.certificate;
    out.tried_moduli = {m};
    auto to_values = [m](const std::vector<std::int64_t>& v) {
        std::vector<CircleValue> out;
        for (std::int64_t k : v) out.push_back(CircleValue::units(k, m));
        return out;
    };
    if (sol.solvable) {
        out.particular = to_values(sol.particular);
        for (const auto& k : sol.kernel) {
            out.kernel.push_back(to_values(k));
        }
    }
    return out;
}

SectionSolution solve_compatible_section_escalating(const DoubleGroupoid& d, const CentralExtension& ev,
                                                    const CentralExtension& eh, std::int64_t m,
                                                    std::int64_t max_modulus) {
    if (m == 0) {
        m = 2 * ev.fiber_order;
    }
    std::vector<std::int64_t> tried;
    for (;;) {
        SectionSolution s = solve_compatible_section(d, ev, eh, m);
        tried.push_back(m);
        if (s.solvable || 2 * m > max_modulus) {
            s.tried_moduli = tried;
            return s;
        }
        m *= 2;
    }
}

void for_each_solution(const SectionSolution& s, const std::function<void(const std::vector<CircleValue>&)>& fn) {
    if (!s.solvable) {
        return;
    }
    const std::int64_t m = s.modulus;
    auto units = [m](const std::vector<CircleValue>& v) {
        std::vector<std::int64_t> out;
        for (const auto& c : v) out.push_back(*c.in_units_of(m));
        return out;
    };
    std::vector<std::vector<std::int64_t>> gens;
    for (const auto& k : s.kernel) gens.push_back(units(k));
    const ModLattice lattice(m, s.particular.size(), gens);
    lattice.for_each_coset_element(units(s.particular), [&](const std::vector<std::int64_t>& x) {
        std::vector<CircleValue> v;
        for (std::int64_t k : x) v.push_back(CircleValue::units(k, m));
        fn(v);
    });
}

// The 3-cocycle ---------------------------------------------------------------------------

BiCochain assemble_double_cocycle(const DoubleExtension& de) {
    const ValidationReport report = validate_double_extension(de);
    if (!report.valid()) {
        const auto& v = report.violations().front();
        throw DomainError("double extension violates " + v.axiom, v.witness);
    }
    BiCochain c;
    c.components[{2, 0}] = de.sigma_h.values;
    c.components[{1, 1}] = de.ebar;
    c.components[{0, 2}] = de.sigma_v.values;
    return c;
}

std::vector<BidegreeResidual> verify_double_cocycle(const TotalComplex& complex, const BiCochain& cocycle) {
    const BiCochain dc = total_differential(complex, cocycle);
    std::vector<BidegreeResidual> out;
    for (int p = 3; p >= 0; --p) {
        BidegreeResidual r;
        r.p = p;
        r.q = 3 - p;
        const auto& lvl = complex.level(r.p, r.q);
        r.cells = lvl.size();
        if (const auto* comp = dc.component(r.p, r.q)) {
            for (std::size_t i = 0; i < comp->size(); ++i) {
                if (!(*comp)[i].is_zero()) {
                    if (r.nonzero++ == 0) {
                        r.witness = describe_binerve_cell(complex.double_groupoid(), r.p, r.q, lvl.cells[i]) +
                                    " -> " + (*comp)[i].to_string();
                    }
                }
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

DoubleClassResult double_class(const TotalComplex& complex, const DoubleExtension& de, std::int64_t m) {
    if (!(complex.double_groupoid() == de.d)) {
        throw DomainError("total complex was built over a different double groupoid");
    }
    const BiCochain cocycle = assemble_double_cocycle(de);
    const std::vector<CircleValue> flat = flatten(complex, 2, cocycle);
    DoubleClassResult out;
    out.modulus = m;
    const CoboundaryResult r = solve_coboundary(complex, 2, flat, m);
    out.coboundary = r.solvable;
    out.certificate = r.certificate;
    if (r.solvable) {
        out.primitive = unflatten(complex, 1, r.witness);
    }
    out.order = class_order(complex, 2, flat, m);
    out.bockstein = bockstein(complex, 2, flat);
    out.horizontal_alt = antisymmetry_witness(NerveComplex(de.d.horizontal), de.sigma_h);
    out.vertical_alt = antisymmetry_witness(NerveComplex(de.d.vertical), de.sigma_v);
    return out;
}

DoubleExtension regauge(const DoubleExtension& de, const Cochain& lambda_v, const Cochain& lambda_h) {
    const auto& d = de.d;
    if (lambda_v.p != 1 || lambda_v.values.size() != d.vertical.arrow_count() || lambda_h.p != 1 ||
        lambda_h.values.size() != d.horizontal.arrow_count()) {
        throw DomainError("gauge parameters must be 1-cochains on the edge groupoids");
    }
    Section rv = de.ref_v, rh = de.ref_h;
    for (std::size_t x = 0; x < rv.size(); ++x) {
        rv[x] = de.ev.acted(rv[x], lambda_units(de.ev, lambda_v, d.vertical, static_cast<int>(x)));
    }
    for (std::size_t x = 0; x < rh.size(); ++x) {
        rh[x] = de.eh.acted(rh[x], lambda_units(de.eh, lambda_h, d.horizontal, static_cast<int>(x)));
    }
    std::vector<CircleValue> ebar = de.ebar;
    for (std::size_t x = 0; x < ebar.size(); ++x) {
        ebar[x] += lambda_v.values[d.tV[x]] - lambda_v.values[d.sV[x]] + lambda_h.values[d.sH[x]] -
                   lambda_h.values[d.tH[x]];
    }
    return make_double_extension(d, de.ev, de.eh, std::move(ebar), rv, rh);
}

CompatibilityAudit audit_compatibility(const DoubleExtension& de, std::uint64_t seed) {
    const auto& d = de.d;
    const auto off_v = fiber_offsets(de.ev, de.ref_v);
    const auto off_h = fiber_offsets(de.eh, de.ref_h);
    std::mt19937_64 rng(seed);
    auto lift = [&](const CentralExtension& e, const Section& ref, int x) {
        std::uniform_int_distribution<std::int64_t> k(0, e.fiber_order - 1);
        return e.acted(ref[x], k(rng));
    };
    auto offset = [&](int bundle, int y) {
        return bundle == kVerticalBundle ? de.ev.fiber_value(off_v[y]) : de.eh.fiber_value(off_h[y]);
    };
    // s-bar(x) as a raw element: random points of the four fibers and the scalar fixing its encoding.
    auto raw_section = [&](int x) {
        TorsorTensor t;
        t.add(kVerticalBundle, d.sV[x], lift(de.ev, de.ref_v, d.sV[x]), 1);
        t.add(kVerticalBundle, d.tV[x], lift(de.ev, de.ref_v, d.tV[x]), -1);
        t.add(kHorizontalBundle, d.sH[x], lift(de.eh, de.ref_h, d.sH[x]), -1);
        t.add(kHorizontalBundle, d.tH[x], lift(de.eh, de.ref_h, d.tH[x]), 1);
        t.scale(de.ebar[x] - t.encode(offset));
        return t;
    };
    auto natural = [&](const CentralExtension& e, const Section& ref, int bundle, int a, int b) {
        return natural_section_tensor(e, lift(e, ref, a), lift(e, ref, b), bundle);
    };
    auto only_bundle = [](const TorsorTensor& t, int bundle) {
        std::map<std::pair<int, int>, int> out;
        for (const auto& [key, e] : t.exponents()) {
            if (key.first == bundle) out[key] = e;
        }
        return out;
    };

    CompatibilityAudit audit;
    auto check = [&](const TorsorTensor& lhs, const TorsorTensor& rhs, int cancelled_bundle, const CircleValue& encoded,
                     const std::string& label) {
        ++audit.cells;
        TorsorTensor diff = lhs;
        diff.add(rhs, -1);
        const bool cancels = only_bundle(lhs, cancelled_bundle).empty() && diff.cancels();
        const bool agrees = diff.encode(offset) == encoded;
        if ((!cancels || !agrees) && audit.witness.empty()) {
            audit.witness = {label};
        }
        audit.cancellations = audit.cancellations && cancels;
        audit.agreement = audit.agreement && agrees;
    };

    for (const auto& cell : binerve(d, 2, 1).cells) {
        const int x1 = cell[0], x2 = cell[1];
        TorsorTensor lhs;
        lhs.add(raw_section(x2)).add(raw_section(d.compose_v(x1, x2)), -1).add(raw_section(x1));
        TorsorTensor rhs;
        rhs.add(natural(de.eh, de.ref_h, kHorizontalBundle, d.sH[x1], d.sH[x2]), -1);
        rhs.add(natural(de.eh, de.ref_h, kHorizontalBundle, d.tH[x1], d.tH[x2]), 1);
        check(lhs, rhs, kVerticalBundle, horizontal_residual(de, x1, x2), "H " + describe_binerve_cell(d, 2, 1, cell));
    }
    for (const auto& cell : binerve(d, 1, 2).cells) {
        const int x1 = cell[0], x2 = cell[1];
        TorsorTensor lhs;
        lhs.add(raw_section(x2)).add(raw_section(d.compose_h(x1, x2)), -1).add(raw_section(x1));
        TorsorTensor rhs;
        rhs.add(natural(de.ev, de.ref_v, kVerticalBundle, d.sV[x1], d.sV[x2]), 1);
        rhs.add(natural(de.ev, de.ref_v, kVerticalBundle, d.tV[x1], d.tV[x2]), -1);
        check(lhs, rhs, kHorizontalBundle, vertical_residual(de, x1, x2), "V " + describe_binerve_cell(d, 1, 2, cell));
    }
    return audit;
}

}  // namespace dblext
