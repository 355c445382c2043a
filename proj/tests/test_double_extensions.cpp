#include <doctest.h>

#include <algorithm>
#include <random>

#include "dblext/errors.hpp"
#include "support.hpp"

using namespace dblext;

namespace {

int square(const DoubleGroupoid& d, const std::string& id) {
    const auto it = std::find(d.squares.begin(), d.squares.end(), id);
    REQUIRE(it != d.squares.end());
    return static_cast<int>(it - d.squares.begin());
}

DoubleExtension with_ebar(const DoubleExtensionFile& f, std::vector<CircleValue> ebar) {
    return make_double_extension(f.d, f.ev, f.eh, std::move(ebar));
}

/// Every ebar in ((1/m)Z/Z)^squares passing the validator.
std::vector<std::vector<CircleValue>> exhaustive_sections(const DoubleGroupoid& d, const CentralExtension& ev,
                                                          const CentralExtension& eh, std::int64_t m) {
    DoubleExtension de = make_double_extension(d, ev, eh, std::vector<CircleValue>(d.square_count()));
    const support::CompatibilityOracle oracle(d);
    std::vector<std::vector<CircleValue>> out;
    support::for_each_vector(d.square_count(), m, [&](const std::vector<CircleValue>& v) {
        de.ebar = v;
        if (oracle.compatible(de)) out.push_back(v);
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<CircleValue>> solver_sections(const SectionSolution& s) {
    std::vector<std::vector<CircleValue>> out;
    for_each_solution(s, [&](const std::vector<CircleValue>& v) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    return out;
}

bool all_residuals_zero(const std::vector<BidegreeResidual>& r) {
    return std::all_of(r.begin(), r.end(), [](const BidegreeResidual& b) { return b.nonzero == 0; });
}

}  // namespace

TEST_SUITE("double_extensions") {
    TEST_CASE("GK flagship validates; a flipped ebar is named") {
        const DoubleExtension de = zoo::gk_flagship();
        CHECK(validate_double_extension(de).valid());
        std::vector<CircleValue> ebar = de.ebar;
        ebar[square(de.d, "(*,01)")] = CircleValue::fraction(1, 2);
        const ValidationReport r = validate_double_extension(make_double_extension(de.d, de.ev, de.eh, ebar));
        CHECK(r.has("vertical compatibility"));
        CHECK_THROWS_AS(assemble_double_cocycle(make_double_extension(de.d, de.ev, de.eh, ebar)), DomainError);
    }

    TEST_CASE("PD2 with vertical E2: no section over Z/2") {
        const DoubleExtensionFile f = zoo::pd2_e2();
        const SectionSolution s = solve_compatible_section(f.d, f.ev, f.eh, 2);
        CHECK_FALSE(s.solvable);
        CHECK(s.count == 0);
        // the certificate kills the system and not the right-hand side
        REQUIRE(s.certificate.size() == s.equations.size());
        CHECK(std::any_of(s.certificate.begin(), s.certificate.end(), [](std::int64_t w) { return w % 2 != 0; }));
        CHECK(exhaustive_sections(f.d, f.ev, f.eh, 2).empty());
        std::size_t candidates = 0;
        support::for_each_vector(4, 2, [&](const std::vector<CircleValue>&) { ++candidates; });
        CHECK(candidates == 16);
    }

    TEST_CASE("PD2 with vertical E2: sections over Z/4 are q(h) - q(g)") {
        const DoubleExtensionFile f = zoo::pd2_e2();
        const SectionSolution s = solve_compatible_section(f.d, f.ev, f.eh, 4);
        REQUIRE(s.solvable);
        CHECK(s.count == 2);
        // q(0) = 0, q(1) = 1/4
        std::vector<CircleValue> closed_form(4);
        for (int g = 0; g < 2; ++g) {
            for (int h = 0; h < 2; ++h) {
                const auto q = [](int k) { return CircleValue::fraction(k, 4); };
                closed_form[square(f.d, "(" + std::to_string(g) + "," + std::to_string(h) + ")")] = q(h) - q(g);
            }
        }
        CHECK(s.particular == closed_form);
        CHECK(solver_sections(s) == exhaustive_sections(f.d, f.ev, f.eh, 4));
        const DoubleExtension de = with_ebar(f, closed_form);
        CHECK(validate_double_extension(de).valid());
        const TotalComplex total(f.d);
        CHECK(all_residuals_zero(verify_double_cocycle(total, assemble_double_cocycle(de))));
    }

    TEST_CASE("the cell-by-cell oracle agrees with the validator") {
        const DoubleExtensionFile f = zoo::pd2_e2();
        DoubleExtension de = with_ebar(f, std::vector<CircleValue>(4));
        const support::CompatibilityOracle oracle(f.d);
        std::size_t agreeing = 0;
        support::for_each_vector(4, 4, [&](const std::vector<CircleValue>& v) {
            de.ebar = v;
            agreeing += oracle.compatible(de) == validate_double_extension(de).valid();
        });
        CHECK(agreeing == 256);
    }

    TEST_CASE("GK forces ebar = 0") {
        const DoubleExtension de = zoo::gk_flagship();
        for (std::int64_t m : {2, 4}) {
            const SectionSolution s = solve_compatible_section(de.d, de.ev, de.eh, m);
            REQUIRE(s.solvable);
            CHECK(s.count == 1);
            CHECK(support::all_zero(s.particular));
            CHECK(exhaustive_sections(de.d, de.ev, de.eh, m).size() == 1);
        }
    }

    TEST_CASE("solver agrees with exhaustive search") {
        std::mt19937_64 rng(21);
        std::size_t compared = 0;
        for (const auto& [name, d] : support::double_pool()) {
            for (std::int64_t n : {2, 3}) {
                const std::int64_t m = 2 * n;
                double space = 1;
                for (std::size_t i = 0; i < d.square_count(); ++i) space *= static_cast<double>(m);
                if (space > 65536) continue;
                CAPTURE(name);
                CAPTURE(n);
                const CentralExtension ev =
                    extension_from_cocycle(d.vertical, n, support::random_closed_cochain(rng, d.vertical, n));
                const CentralExtension eh =
                    extension_from_cocycle(d.horizontal, n, support::random_closed_cochain(rng, d.horizontal, n));
                const SectionSolution s = solve_compatible_section(d, ev, eh, m);
                const auto brute = exhaustive_sections(d, ev, eh, m);
                CHECK(s.solvable == !brute.empty());
                CHECK(s.count == brute.size());
                if (s.solvable) {
                    CHECK(s.particular == brute.front());
                    CHECK(solver_sections(s) == brute);
                }
                ++compared;
            }
        }
        CHECK(compared >= 6);
    }

    TEST_CASE("solver-produced double extensions assemble to closed cocycles") {
        std::mt19937_64 rng(22);
        const auto pool = support::double_pool();
        std::size_t closed = 0;
        for (int attempt = 0; attempt < 200 && closed < 25; ++attempt) {
            const auto r = support::random_double_extension(rng, pool);
            if (!r) continue;
            CAPTURE(r->name);
            REQUIRE(r->de.d.square_count() <= 16);
            CHECK(validate_double_extension(r->de).valid());
            const TotalComplex total(r->de.d);
            CHECK(all_residuals_zero(verify_double_cocycle(total, assemble_double_cocycle(r->de))));
            ++closed;
        }
        CHECK(closed >= 20);
    }

    TEST_CASE("the class does not depend on the references") {
        std::mt19937_64 rng(23);
        const auto pool = support::double_pool();
        int trials = 0;
        for (int attempt = 0; attempt < 100 && trials < 10; ++attempt) {
            const auto r = support::random_double_extension(rng, pool);
            if (!r) continue;
            ++trials;
            const DoubleExtension& de = r->de;
            const std::int64_t n = de.ev.fiber_order;
            const Cochain lv{1, support::random_units(rng, de.d.vertical.arrow_count(), n)};
            const Cochain lh{1, support::random_units(rng, de.d.horizontal.arrow_count(), n)};
            const DoubleExtension moved = regauge(de, lv, lh);
            CHECK(validate_double_extension(moved).valid());
            const TotalComplex total(de.d);
            const BiCochain a = assemble_double_cocycle(de);
            const BiCochain b = assemble_double_cocycle(moved);
            std::vector<CircleValue> diff = flatten(total, 2, b);
            const std::vector<CircleValue> fa = flatten(total, 2, a);
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= fa[i];
            CHECK(is_coboundary(total, 2, unflatten(total, 2, diff), r->modulus).has_value());
            CHECK(double_class(total, de, r->modulus).order == double_class(total, moved, r->modulus).order);
        }
        CHECK(trials >= 5);
    }

    TEST_CASE("raw torsor audit agrees with the encoded residuals") {
        std::mt19937_64 rng(24);
        const auto pool = support::double_pool();
        int audited = 0;
        const CompatibilityAudit flagship = audit_compatibility(zoo::gk_flagship(), 1);
        CHECK(flagship.cancellations);
        CHECK(flagship.agreement);
        for (int attempt = 0; attempt < 60 && audited < 10; ++attempt) {
            const auto r = support::random_double_extension(rng, pool);
            if (!r) continue;
            ++audited;
            const CompatibilityAudit a = audit_compatibility(r->de, rng());
            CHECK(a.cells > 0);
            CHECK(a.cancellations);
            CHECK(a.agreement);
        }
    }

    TEST_CASE("GK flagship class has order 2 by three routes") {
        const DoubleExtension de = zoo::gk_flagship();
        const TotalComplex total(de.d);
        const BiCochain cocycle = assemble_double_cocycle(de);
        CHECK(all_residuals_zero(verify_double_cocycle(total, cocycle)));
        const std::vector<CircleValue> flat = flatten(total, 2, cocycle);
        REQUIRE(total.dimension(1) == 5);
        // exhaustive search over all degree-1 cochains
        for (std::int64_t m : {2, 4}) {
            CHECK_FALSE(support::enumerated_primitive(total, 2, flat, m).has_value());
            std::vector<CircleValue> twice = flat;
            for (auto& v : twice) v += v;
            CHECK(support::enumerated_primitive(total, 2, twice, m).has_value());
            const DoubleClassResult r = double_class(total, de, m);
            CHECK(r.order == 2);
            CHECK_FALSE(r.coboundary);
            // w D_1 = 0 and w . cocycle != 0
            REQUIRE(r.certificate.size() == total.dimension(2));
            const IntMatrix d1 = total.coboundary(1);
            for (std::size_t j = 0; j < d1.cols; ++j) {
                std::int64_t s = 0;
                for (std::size_t i = 0; i < d1.rows; ++i) s += r.certificate[i] * d1(i, j);
                CHECK(mod_floor(s, m) == 0);
            }
            std::int64_t pairing = 0;
            for (std::size_t i = 0; i < flat.size(); ++i) pairing += r.certificate[i] * *flat[i].in_units_of(m);
            CHECK(mod_floor(pairing, m) != 0);
        }
        // bicharacter on the horizontal part
        const NerveComplex k4(de.d.horizontal);
        const auto alt = antisymmetry_witness(k4, de.sigma_h);
        REQUIRE(alt.has_value());
        CHECK(alt->value == CircleValue::fraction(1, 2));
        CHECK(antisymmetry_nondegenerate(k4, de.sigma_h, 0));
        // integral Bockstein
        const BocksteinResult b = bockstein(total, 2, flat);
        CHECK_FALSE(b.is_coboundary);
        CHECK(b.order == 2);
        const DoubleClassResult r = double_class(total, de, 2);
        CHECK(r.bockstein.order == 2);
        CHECK(r.horizontal_alt.has_value());
    }

    TEST_CASE("PD2/E2 class is trivial") {
        const DoubleExtensionFile f = zoo::pd2_e2();
        const SectionSolution s = solve_compatible_section(f.d, f.ev, f.eh, 4);
        const DoubleExtension de = with_ebar(f, s.particular);
        const TotalComplex total(f.d);
        const DoubleClassResult r = double_class(total, de, 4);
        CHECK(r.coboundary);
        CHECK(r.order == 1);
        REQUIRE(r.primitive.has_value());
        const BiCochain db = total_differential(total, *r.primitive);
        CHECK(flatten(total, 2, db) == flatten(total, 2, assemble_double_cocycle(de)));
    }

    TEST_CASE("errors") {
        const DoubleGroupoid d = zoo::gk();
        CHECK_THROWS_AS(make_double_extension(d, zoo::trivial_extension(d.vertical, 2),
                                              zoo::trivial_extension(d.horizontal, 3),
                                              std::vector<CircleValue>(d.square_count())),
                        StructuralError);
        CHECK_THROWS_AS(make_double_extension(d, zoo::trivial_extension(d.horizontal, 2),
                                              zoo::trivial_extension(d.horizontal, 2),
                                              std::vector<CircleValue>(d.square_count())),
                        StructuralError);
        CHECK_THROWS_AS(make_double_extension(d, zoo::trivial_extension(d.vertical, 2),
                                              zoo::trivial_extension(d.horizontal, 2), std::vector<CircleValue>(3)),
                        StructuralError);
        const DoubleExtension de = zoo::gk_flagship();
        CHECK_THROWS_AS(solve_compatible_section(de.d, de.ev, de.eh, 3), DomainError);
        CHECK(solve_compatible_section(de.d, de.ev, de.eh).modulus == 4);
    }

    TEST_CASE("escalation records the moduli tried") {
        const DoubleExtensionFile f = zoo::pd2_e2();
        const SectionSolution s = solve_compatible_section_escalating(f.d, f.ev, f.eh, 2, 16);
        CHECK(s.solvable);
        CHECK(s.modulus == 4);
        CHECK(s.tried_moduli == std::vector<std::int64_t>{2, 4});
    }
}
