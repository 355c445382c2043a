#include <doctest.h>

#include <random>

#include "dblext/errors.hpp"
#include "support.hpp"

using namespace dblext;

namespace {

// Order of a loop arrow in a groupoid, by repeated multiplication.
int loop_order(const FiniteGroupoid& g, int x) {
    int y = x;
    for (int k = 1; k <= static_cast<int>(g.arrow_count()); ++k) {
        if (y == g.unit[g.src[x]]) return k;
        y = g.product(y, x);
    }
    return -1;
}

Section random_section(std::mt19937_64& rng, const CentralExtension& e) {
    Section s = canonical_section(e);
    std::uniform_int_distribution<std::int64_t> k(0, e.fiber_order - 1);
    for (auto& y : s) y = e.acted(y, k(rng));
    return s;
}

}  // namespace

TEST_SUITE("extensions") {
    TEST_CASE("trivial extensions validate with zero curvature") {
        for (const FiniteGroupoid& g : {zoo::z2(), zoo::p3(), zoo::cech()}) {
            const CentralExtension e = zoo::trivial_extension(g, 3);
            CHECK(validate_extension(e).valid());
            CHECK(support::all_zero(curvature(e, canonical_section(e)).sigma.values));
            CHECK(support::all_zero(natural_section_encoding(e, canonical_section(e)).encoding.values));
        }
    }

    TEST_CASE("E2 = Z4 over Z2") {
        const CentralExtension e = zoo::e2();
        CHECK(validate_extension(e).valid());
        const Section s = canonical_section(e);
        CHECK(e.total.arrows[s[0]] == "0");
        CHECK(e.total.arrows[s[1]] == "1");
        const Cochain sigma = curvature(e, s).sigma;
        const NerveLevel l2 = nerve(e.base, 2);
        for (std::size_t i = 0; i < l2.size(); ++i) {
            const bool one_one = l2.tuples[i] == Tuple{1, 1};
            CHECK(sigma.values[i] == (one_one ? CircleValue::fraction(1, 2) : CircleValue()));
        }
        const NaturalSectionReport ns = natural_section_encoding(e, s);
        CHECK(ns.closed);
        CHECK(ns.trivialization);
        CHECK(ns.encoding.values[*l2.index_of(Tuple{1, 1})] == CircleValue::fraction(1, 2));
    }

    TEST_CASE("non-free action is named") {
        CentralExtension e = zoo::e2();
        e.act[1 * 2 + 1] = 1;
        const ValidationReport r = validate_extension(e);
        REQUIRE(r.has("fiber freeness"));
        CHECK(r.find("fiber freeness")->witness.front() == "1");
    }

    TEST_CASE("natural section encoding is minus the curvature and closed") {
        std::mt19937_64 rng(1);
        for (const auto& [name, g] : zoo::groupoids()) {
            CAPTURE(name);
            for (std::int64_t n : {2, 3, 4}) {
                const CentralExtension e = extension_from_cocycle(g, n, support::random_closed_cochain(rng, g, n));
                const Section s = random_section(rng, e);
                std::vector<int> lifts(e.base.arrow_count());
                for (std::size_t x = 0; x < lifts.size(); ++x) {
                    lifts[x] = e.acted(s[x], std::uniform_int_distribution<std::int64_t>(0, n - 1)(rng));
                }
                const NaturalSectionReport ns = natural_section_encoding(e, s, &lifts);
                const Cochain sigma = curvature(e, s).sigma;
                CHECK(ns.closed);
                CHECK(ns.trivialization);
                for (std::size_t i = 0; i < sigma.values.size(); ++i) CHECK(ns.encoding.values[i] == -sigma.values[i]);
                CHECK(support::all_zero(differential(g, sigma).values));
            }
        }
    }

    TEST_CASE("extension from sigma2 is Z4") {
        const FiniteGroupoid g = zoo::z2();
        const CentralExtension e = extension_from_cocycle(g, 2, zoo::sigma2(g));
        CHECK(validate_extension(e).valid());
        CHECK(e.total.arrow_count() == 4);
        CHECK(loop_order(e.total, *e.total.find_arrow("1#0")) == 4);
        const CentralExtension trivial = zoo::trivial_extension(g, 2);
        for (std::size_t x = 0; x < 4; ++x) CHECK(loop_order(trivial.total, static_cast<int>(x)) <= 2);
    }

    TEST_CASE("extension from sigma_K is nonabelian of order 8") {
        const FiniteGroupoid g = zoo::k4();
        const CentralExtension e = extension_from_cocycle(g, 2, zoo::sigma_k(g));
        CHECK(validate_extension(e).valid());
        CHECK(e.total.arrow_count() == 8);
        const int a = *e.total.find_arrow("01#0");
        const int b = *e.total.find_arrow("10#0");
        CHECK(e.total.product(a, b) != e.total.product(b, a));
        // the commutator is the central 1/2
        const int comm = e.total.product(e.total.product(a, b), e.total.product(e.total.inv[a], e.total.inv[b]));
        CHECK(e.total.arrows[comm] == "00#1");
    }

    TEST_CASE("non-closed sigma is refused") {
        const FiniteGroupoid g = zoo::z2();
        Cochain bad{2, std::vector<CircleValue>(4)};
        bad.values[1] = CircleValue::fraction(1, 2);
        CHECK_THROWS_AS(extension_from_cocycle(g, 2, bad), PreconditionError);
    }

    TEST_CASE("round trip for random closed cocycles") {
        std::mt19937_64 rng(2);
        for (const auto& [name, g] : zoo::groupoids()) {
            CAPTURE(name);
            for (int trial = 0; trial < 50; ++trial) {
                const std::int64_t n = 2 + trial % 3;
                const Cochain sigma = support::random_closed_cochain(rng, g, n);
                const CentralExtension e = extension_from_cocycle(g, n, sigma);
                CHECK(curvature(e, canonical_section(e)).sigma == sigma);
            }
        }
    }

    TEST_CASE("changing the section shifts curvature by d' of the offsets") {
        std::mt19937_64 rng(3);
        for (const FiniteGroupoid& g : {zoo::z2(), zoo::p3(), zoo::k4()}) {
            const CentralExtension e = extension_from_cocycle(g, 4, support::random_closed_cochain(rng, g, 4));
            for (int trial = 0; trial < 10; ++trial) {
                const Section s1 = random_section(rng, e);
                const Section s2 = random_section(rng, e);
                const auto off = fiber_offsets(e, s1);
                Cochain lambda{1, {}};
                for (std::size_t x = 0; x < s2.size(); ++x) lambda.values.push_back(e.fiber_value(off[s2[x]]));
                const Cochain dl = differential(g, lambda);
                const Cochain c1 = curvature(e, s1).sigma;
                const Cochain c2 = curvature(e, s2).sigma;
                for (std::size_t i = 0; i < c1.values.size(); ++i) CHECK(c2.values[i] == c1.values[i] + dl.values[i]);
                CHECK(are_equivalent(e, e).has_value());
            }
        }
    }

    TEST_CASE("normalization kills unit values") {
        std::mt19937_64 rng(4);
        const FiniteGroupoid g = zoo::p3();
        const Cochain sigma = support::random_closed_cochain(rng, g, 4);
        const NormalizedCocycle nc = normalize_cocycle(g, sigma);
        const NerveLevel l2 = nerve(g, 2);
        const Cochain dl = differential(g, nc.lambda);
        for (std::size_t i = 0; i < l2.size(); ++i) {
            const auto& t = l2.tuples[i];
            const bool unit = t[0] == g.unit[g.src[t[0]]] || t[1] == g.unit[g.src[t[1]]];
            if (unit) CHECK(nc.sigma.values[i].is_zero());
            CHECK(nc.sigma.values[i] == sigma.values[i] + dl.values[i]);
        }
    }

    TEST_CASE("equivalence") {
        const FiniteGroupoid g = zoo::z2();
        CHECK_FALSE(are_equivalent(zoo::e2(), zoo::trivial_extension(g, 2)).has_value());
        const auto w = are_equivalent(zoo::e2(), extension_from_cocycle(g, 2, zoo::sigma2(g)));
        REQUIRE(w.has_value());
        // the witness is an isomorphism over the base, compatible with products
        const CentralExtension e1 = zoo::e2();
        const CentralExtension e2 = extension_from_cocycle(g, 2, zoo::sigma2(g));
        for (std::size_t x = 0; x < 4; ++x) {
            CHECK(e2.proj[w->isomorphism[x]] == e1.proj[x]);
            for (std::size_t y = 0; y < 4; ++y) {
                CHECK(w->isomorphism[e1.total.product(x, y)] ==
                      e2.total.product(w->isomorphism[x], w->isomorphism[y]));
            }
        }
        std::mt19937_64 rng(5);
        for (const FiniteGroupoid& base : {zoo::p3(), zoo::k4(), zoo::cech()}) {
            const Cochain sigma = support::random_closed_cochain(rng, base, 3);
            Cochain shifted = sigma;
            const Cochain dl = differential(base, Cochain{1, support::random_units(rng, base.arrow_count(), 3)});
            for (std::size_t i = 0; i < shifted.values.size(); ++i) shifted.values[i] += dl.values[i];
            CHECK(are_equivalent(extension_from_cocycle(base, 3, sigma), extension_from_cocycle(base, 3, shifted))
                      .has_value());
        }
        CHECK_THROWS_AS(are_equivalent(zoo::e2(), zoo::trivial_extension(g, 3)), DomainError);
    }

    TEST_CASE("exhaustive equivalence oracle on Z2") {
        // E2 vs trivial: no lambda in (1/2)Z/Z^2 with sigma2 = d'lambda.
        const NerveComplex c(zoo::z2());
        CHECK_FALSE(support::enumerated_primitive(c, 2, zoo::sigma2(zoo::z2()).values, 2).has_value());
    }

    TEST_CASE("centrality makes curvature independent of lifts") {
        std::mt19937_64 rng(6);
        const FiniteGroupoid g = zoo::k4();
        const CentralExtension e = extension_from_cocycle(g, 4, support::random_closed_cochain(rng, g, 4));
        const Section s = canonical_section(e);
        const auto off = fiber_offsets(e, s);
        const NerveLevel l2 = nerve(g, 2);
        const Cochain sigma = curvature(e, s).sigma;
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t i = std::uniform_int_distribution<std::size_t>(0, l2.size() - 1)(rng);
            const int x1 = l2.tuples[i][0], x2 = l2.tuples[i][1];
            const std::int64_t a1 = std::uniform_int_distribution<std::int64_t>(0, 3)(rng);
            const std::int64_t a2 = std::uniform_int_distribution<std::int64_t>(0, 3)(rng);
            const int prod = e.total.product(e.acted(s[x1], a1), e.acted(s[x2], a2));
            CHECK(e.fiber_value(off[prod]) == sigma.values[i] + e.fiber_value(a1) + e.fiber_value(a2));
        }
    }

    TEST_CASE("gerbes") {
        const Surjection two{{"*"}, {"1", "2"}, {0, 0}};
        const FiniteGroupoid y2 = fiber_product_groupoid(two);
        CHECK(y2.arrow_count() == 4);
        CHECK(validate_groupoid(y2).valid());
        const int a = *y2.find_arrow("(1,2)");
        CHECK(y2.objects[y2.src[a]] == "2");
        CHECK(y2.objects[y2.tgt[a]] == "1");
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 5; ++trial) {
            const Cochain sigma = support::random_closed_cochain(rng, y2, 2);
            const GerbeRecord r = bundle_gerbe(two, extension_from_cocycle(y2, 2, sigma));
            CHECK(r.delta_trivial);
            CHECK(r.class_order == 1);
            const GerbeRecord from_section = bundle_gerbe(two, 2, r.section_encoding);
            CHECK(validate_extension(from_section.extension).valid());
            CHECK(from_section.section_encoding == r.section_encoding);
        }
        const Surjection id{{"a", "b"}, {"a", "b"}, {0, 1}};
        const FiniteGroupoid unit = fiber_product_groupoid(id);
        CHECK(unit.arrow_count() == 2);
        CHECK(bundle_gerbe(id, 2, Cochain{2, std::vector<CircleValue>(nerve(unit, 2).size())}).class_order == 1);
        Cochain bad{2, std::vector<CircleValue>(nerve(y2, 2).size())};
        bad.values[0] = CircleValue::fraction(1, 2);
        CHECK_THROWS_AS(bundle_gerbe(two, 2, bad), GerbeConditionError);
        try {
            bundle_gerbe(two, 2, bad);
        } catch (const GerbeConditionError& e) {
            CHECK(e.witness().size() >= 1);
        }
    }
}
