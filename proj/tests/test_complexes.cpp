#include <doctest.h>

#include <random>

#include "dblext/errors.hpp"
#include "support.hpp"

using namespace dblext;

namespace {

BiCochain random_bicochain(std::mt19937_64& rng, const TotalComplex& c, int n) {
    BiCochain b;
    for (int p = n; p >= 0; --p) b.components[{p, n - p}] = support::random_values(rng, c.level(p, n - p).size());
    return b;
}

bool bicochain_zero(const BiCochain& b) { return b.is_zero(); }

}  // namespace

TEST_SUITE("complexes") {
    TEST_CASE("d' squares to zero on random cochains") {
        std::mt19937_64 rng(1);
        for (const auto& [name, g] : zoo::groupoids()) {
            CAPTURE(name);
            const NerveComplex c(g);
            for (int trial = 0; trial < 100; ++trial) {
                const int p = trial % 3;
                const Cochain x{p, support::random_values(rng, c.dimension(p))};
                CHECK(support::all_zero(differential(c, differential(c, x)).values));
            }
        }
    }

    TEST_CASE("sigma2 is closed on all 8 triples") {
        const NerveComplex c(zoo::z2());
        const Cochain d = differential(c, zoo::sigma2(zoo::z2()));
        CHECK(d.values.size() == 8);
        CHECK(support::all_zero(d.values));
    }

    TEST_CASE("coboundary matrix agrees with the cochain differential") {
        std::mt19937_64 rng(2);
        for (const auto& [name, g] : zoo::groupoids()) {
            const NerveComplex c(g);
            for (int p = 0; p <= 2; ++p) {
                const Cochain x{p, support::random_values(rng, c.dimension(p))};
                CHECK(apply_coboundary(c, p, x.values) == differential(c, x).values);
            }
        }
    }

    TEST_CASE("bicomplex identities on random bicochains") {
        std::mt19937_64 rng(3);
        for (const auto& [name, d] : zoo::doubles()) {
            CAPTURE(name);
            const TotalComplex c(d);
            for (int trial = 0; trial < 100; ++trial) {
                const int n = trial % 3;
                const BiCochain x = random_bicochain(rng, c, n);
                const BiCochain dh = bidifferential(c, x, Axis::horizontal);
                const BiCochain dv = bidifferential(c, x, Axis::vertical);
                CHECK(bicochain_zero(bidifferential(c, dh, Axis::horizontal)));
                CHECK(bicochain_zero(bidifferential(c, dv, Axis::vertical)));
                BiCochain anti = bidifferential(c, dh, Axis::vertical);
                const BiCochain other = bidifferential(c, dv, Axis::horizontal);
                for (auto& [pq, values] : anti.components) {
                    const auto* o = other.component(pq.first, pq.second);
                    REQUIRE(o);
                    for (std::size_t i = 0; i < values.size(); ++i) values[i] += (*o)[i];
                }
                CHECK(bicochain_zero(anti));
                CHECK(bicochain_zero(total_differential(c, total_differential(c, x))));
                const auto flat = flatten(c, n, x);
                CHECK(apply_coboundary(c, n, flat) == flatten(c, n + 1, total_differential(c, x)));
            }
        }
    }

    TEST_CASE("horizontal part of the total differential restricts to the edge groupoid") {
        // On (p,0) the horizontal differential is d' of the horizontal edge groupoid.
        std::mt19937_64 rng(4);
        const DoubleGroupoid d = zoo::gk();
        const TotalComplex c(d);
        const NerveComplex h(d.horizontal);
        const Cochain x{2, support::random_values(rng, h.dimension(2))};
        BiCochain b;
        b.components[{2, 0}] = x.values;
        const BiCochain db = bidifferential(c, b, Axis::horizontal);
        CHECK(*db.component(3, 0) == differential(h, x).values);
    }

    TEST_CASE("cohomology oracles") {
        const NerveComplex z2(zoo::z2());
        const NerveComplex p3(zoo::p3());
        const NerveComplex cech(zoo::cech());
        CHECK(cohomology(z2, 2, Coefficients::mod(2)).order() == 2);
        CHECK(support::enumerated_cohomology_order(z2, 2, 2) == 2);
        CHECK(cohomology(p3, 2, Coefficients::mod(2)).trivial());
        CHECK(support::gf2_cohomology_dimension(p3, 2) == 0);
        CHECK(cohomology(cech, 0, Coefficients::mod(2)).order() == 8);
        CHECK(support::enumerated_cohomology_order(cech, 0, 2) == 8);
    }

    TEST_CASE("cohomology agrees with enumeration and GF(2) ranks") {
        for (const auto& [name, g] : zoo::groupoids()) {
            CAPTURE(name);
            const NerveComplex c(g);
            for (int n = 0; n <= 2; ++n) {
                CAPTURE(n);
                const CohomologyResult r = cohomology(c, n, Coefficients::mod(2));
                CHECK(r.order() == BigInt(1) << support::gf2_cohomology_dimension(c, n));
                const std::size_t work = c.dimension(n) + (n ? c.dimension(n - 1) : 0);
                if (work <= 14) {
                    CHECK(r.order() == support::enumerated_cohomology_order(c, n, 2));
                    if (c.dimension(n) <= 6 && (n == 0 || c.dimension(n - 1) <= 6)) {
                        CHECK(cohomology(c, n, Coefficients::mod(3)).order() ==
                              support::enumerated_cohomology_order(c, n, 3));
                    }
                }
            }
        }
    }

    TEST_CASE("representatives are cocycles spanning the group") {
        const NerveComplex k4(zoo::k4());
        const CohomologyResult r = cohomology(k4, 2, Coefficients::mod(2));
        CHECK(r.order() == 8);
        CHECK(r.representatives.size() == r.invariant_factors.size());
        for (const auto& rep : r.representatives) {
            CHECK(support::all_zero(apply_coboundary(k4, 2, rep)));
            CHECK_FALSE(is_coboundary(k4, Cochain{2, rep}, 2).has_value());
        }
    }

    TEST_CASE("integral cohomology of cyclic groups") {
        // H^even(Z/n; Z) = Z/n for even > 0, H^odd = 0, H^0 = Z.
        for (int n : {2, 3, 4}) {
            const NerveComplex c(one_object_groupoid(cyclic_group(n)));
            const CohomologyResult h0 = cohomology(c, 0, Coefficients::integral());
            CHECK(h0.free_rank == 1);
            CHECK(cohomology(c, 1, Coefficients::integral()).trivial());
            const CohomologyResult h2 = cohomology(c, 2, Coefficients::integral());
            REQUIRE(h2.invariant_factors.size() == 1);
            CHECK(h2.invariant_factors[0] == n);
            CHECK(h2.free_rank == 0);
        }
    }

    TEST_CASE("sigma2 is a coboundary over Z/4 but not Z/2") {
        const FiniteGroupoid g = zoo::z2();
        const NerveComplex c(g);
        const Cochain s = zoo::sigma2(g);
        CHECK_FALSE(is_coboundary(c, s, 2).has_value());
        CHECK_FALSE(support::enumerated_primitive(c, 2, s.values, 2).has_value());
        const auto w = is_coboundary(c, s, 4);
        REQUIRE(w.has_value());
        CHECK(differential(c, *w) == s);
        CHECK(w->values[*g.find_arrow("0")] == CircleValue());
        CHECK(w->values[*g.find_arrow("1")] == CircleValue::fraction(1, 4));
        CHECK(support::enumerated_primitive(c, 2, s.values, 4).has_value());
        const CoboundaryResult r = solve_coboundary(c, 2, s.values, 2);
        REQUIRE_FALSE(r.solvable);
        // w D = 0 and w c != 0 mod 2
        const IntMatrix d1 = c.coboundary(1);
        for (std::size_t j = 0; j < d1.cols; ++j) {
            std::int64_t sum = 0;
            for (std::size_t i = 0; i < d1.rows; ++i) sum += r.certificate[i] * d1(i, j);
            CHECK(mod_floor(sum, 2) == 0);
        }
        std::int64_t pairing = 0;
        for (std::size_t i = 0; i < s.values.size(); ++i) pairing += r.certificate[i] * *s.values[i].in_units_of(2);
        CHECK(mod_floor(pairing, 2) != 0);
    }

    TEST_CASE("solve_coboundary preconditions") {
        const NerveComplex c(zoo::z2());
        std::vector<CircleValue> bad(4);
        bad[1] = CircleValue::fraction(1, 2);
        CHECK_THROWS_AS(solve_coboundary(c, 2, bad, 2), PreconditionError);
        CHECK_THROWS_AS(solve_coboundary(c, 2, zoo::sigma2(zoo::z2()).values, 3), DomainError);
    }

    TEST_CASE("solution counts match enumeration") {
        std::mt19937_64 rng(5);
        for (const auto& [name, g] : zoo::groupoids()) {
            const NerveComplex c(g);
            if (c.dimension(1) > 6) continue;
            for (std::int64_t m : {2, 4}) {
                const Cochain lambda{1, support::random_units(rng, c.dimension(1), m)};
                const Cochain target = differential(c, lambda);
                const CoboundaryResult r = solve_coboundary(c, 2, target.values, m);
                REQUIRE(r.solvable);
                CHECK(apply_coboundary(c, 1, r.witness) == target.values);
                std::uint64_t count = 0;
                support::for_each_vector(c.dimension(1), m, [&](const std::vector<CircleValue>& v) {
                    if (apply_coboundary(c, 1, v) == target.values) ++count;
                });
                CHECK(r.solution_count == count);
            }
        }
    }

    TEST_CASE("bockstein of sigma2 is an integral coboundary") {
        const NerveComplex c(zoo::z2());
        const BocksteinResult b = bockstein(c, 2, zoo::sigma2(zoo::z2()).values);
        CHECK(b.degree == 3);
        CHECK(b.is_coboundary);
        // D_2 witness == cocycle over Z
        const IntMatrix d2 = c.coboundary(2);
        for (std::size_t i = 0; i < d2.rows; ++i) {
            BigInt sum = 0;
            for (std::size_t j = 0; j < d2.cols; ++j) sum += b.witness[j] * d2(i, j);
            CHECK(sum == b.cocycle[i]);
        }
    }

    TEST_CASE("bockstein of sigma_K is not an integral coboundary") {
        const FiniteGroupoid k4 = zoo::k4();
        const NerveComplex c(k4);
        const Cochain s = zoo::sigma_k(k4);
        const BocksteinResult b = bockstein(c, 2, s.values);
        CHECK_FALSE(b.is_coboundary);
        CHECK(b.order == 2);
        const auto alt = antisymmetry_witness(c, s);
        REQUIRE(alt.has_value());
        CHECK(alt->value == CircleValue::fraction(1, 2));
        CHECK(antisymmetry_nondegenerate(c, s, 0));
        // deterministic
        const BocksteinResult again = bockstein(c, 2, s.values);
        CHECK(again.cocycle == b.cocycle);
        CHECK(again.order == b.order);
    }

    TEST_CASE("antisymmetrization is invariant under coboundaries") {
        std::mt19937_64 rng(6);
        const FiniteGroupoid k4 = zoo::k4();
        const NerveComplex c(k4);
        const Cochain s = zoo::sigma_k(k4);
        for (int trial = 0; trial < 20; ++trial) {
            const Cochain lambda{1, support::random_values(rng, 4)};
            Cochain t = s;
            const Cochain dl = differential(c, lambda);
            for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] += dl.values[i];
            const auto a = antisymmetry_witness(c, s);
            const auto b = antisymmetry_witness(c, t);
            REQUIRE(b.has_value());
            CHECK(a->value == b->value);
            CHECK(a->x == b->x);
        }
    }

    TEST_CASE("total cohomology agrees with enumeration") {
        for (const auto& [name, d] : zoo::doubles()) {
            CAPTURE(name);
            const TotalComplex c(d);
            for (int n = 0; n <= 2; ++n) {
                CAPTURE(n);
                const CohomologyResult r = cohomology(c, n, Coefficients::mod(2));
                CHECK(r.order() == BigInt(1) << support::gf2_cohomology_dimension(c, n));
                if (c.dimension(n) + (n ? c.dimension(n - 1) : 0) <= 16) {
                    CHECK(r.order() == support::enumerated_cohomology_order(c, n, 2));
                }
            }
        }
    }

    TEST_CASE("flatten and unflatten are inverse") {
        std::mt19937_64 rng(7);
        const TotalComplex c(zoo::gh42());
        for (int n = 0; n <= 3; ++n) {
            const BiCochain b = random_bicochain(rng, c, n);
            const auto flat = flatten(c, n, b);
            CHECK(flat.size() == c.dimension(n));
            CHECK(flatten(c, n, unflatten(c, n, flat)) == flat);
        }
    }
}
