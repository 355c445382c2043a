#pragma once

// Random instance generators and independent oracles shared by the suites.
// The oracles never go through Smith normal form: they enumerate, or row
// reduce over GF(2).

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "dblext/complexes.hpp"
#include "dblext/double_extensions.hpp"
#include "dblext/zoo.hpp"

namespace support {

using namespace dblext;

inline CircleValue random_circle(std::mt19937_64& rng, std::int64_t max_den = 12) {
    std::uniform_int_distribution<std::int64_t> den(1, max_den);
    const std::int64_t d = den(rng);
    std::uniform_int_distribution<std::int64_t> num(0, d - 1);
    return CircleValue::fraction(num(rng), d);
}

inline std::vector<CircleValue> random_values(std::mt19937_64& rng, std::size_t n, std::int64_t max_den = 12) {
    std::vector<CircleValue> v(n);
    for (auto& x : v) x = random_circle(rng, max_den);
    return v;
}

inline std::vector<CircleValue> random_units(std::mt19937_64& rng, std::size_t n, std::int64_t m) {
    std::uniform_int_distribution<std::int64_t> k(0, m - 1);
    std::vector<CircleValue> v(n);
    for (auto& x : v) x = CircleValue::units(k(rng), m);
    return v;
}

inline bool all_zero(const std::vector<CircleValue>& v) {
    for (const auto& x : v) {
        if (!x.is_zero()) return false;
    }
    return true;
}

/// A random closed 2-cochain with values in (1/n)Z/Z: a random combination
/// of cohomology representatives shifted by a random coboundary.
inline Cochain random_closed_cochain(std::mt19937_64& rng, const FiniteGroupoid& g, std::int64_t n) {
    const NerveComplex c(g);
    const CohomologyResult h = cohomology(c, 2, Coefficients::mod(n));
    std::vector<CircleValue> sigma(c.dimension(2));
    std::uniform_int_distribution<std::int64_t> k(0, n - 1);
    for (const auto& rep : h.representatives) {
        const std::int64_t a = k(rng);
        for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] += a * rep[i];
    }
    const Cochain lambda{1, random_units(rng, c.dimension(1), n)};
    const Cochain dl = differential(c, lambda);
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] += dl.values[i];
    return {2, sigma};
}

/// Calls fn on every vector in (Z/m)^k (as k/m values).
inline void for_each_vector(std::size_t k, std::int64_t m, const std::function<void(const std::vector<CircleValue>&)>& fn) {
    std::vector<std::int64_t> digits(k, 0);
    std::vector<CircleValue> v(k);
    for (;;) {
        for (std::size_t i = 0; i < k; ++i) v[i] = CircleValue::units(digits[i], m);
        fn(v);
        std::size_t i = 0;
        while (i < k && ++digits[i] == m) digits[i++] = 0;
        if (i == k) return;
    }
}

/// |H^n(complex; Z/m)| by enumerating cocycles and coboundaries.
inline std::uint64_t enumerated_cohomology_order(const CochainComplex& c, int n, std::int64_t m) {
    std::uint64_t cocycles = 0;
    for_each_vector(c.dimension(n), m, [&](const std::vector<CircleValue>& v) {
        if (all_zero(apply_coboundary(c, n, v))) ++cocycles;
    });
    std::set<std::vector<CircleValue>> boundaries;
    if (n == 0) {
        boundaries.insert(std::vector<CircleValue>(c.dimension(0)));
    } else {
        for_each_vector(c.dimension(n - 1), m,
                        [&](const std::vector<CircleValue>& v) { boundaries.insert(apply_coboundary(c, n - 1, v)); });
    }
    return cocycles / boundaries.size();
}

/// Rank over GF(2) by Gaussian elimination.
inline std::size_t gf2_rank(const IntMatrix& a) {
    std::vector<std::vector<std::uint8_t>> rows(a.rows, std::vector<std::uint8_t>(a.cols));
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) rows[i][j] = static_cast<std::uint8_t>(((a(i, j) % 2) + 2) % 2);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < a.cols && rank < a.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < a.rows && !rows[pivot][col]) ++pivot;
        if (pivot == a.rows) continue;
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t i = 0; i < a.rows; ++i) {
            if (i != rank && rows[i][col]) {
                for (std::size_t j = col; j < a.cols; ++j) rows[i][j] ^= rows[rank][j];
            }
        }
        ++rank;
    }
    return rank;
}

/// log2 |H^n(complex; Z/2)| from GF(2) ranks.
inline std::size_t gf2_cohomology_dimension(const CochainComplex& c, int n) {
    const std::size_t dn = gf2_rank(c.coboundary(n));
    const std::size_t dprev = n == 0 ? 0 : gf2_rank(c.coboundary(n - 1));
    return c.dimension(n) - dn - dprev;
}

/// Exhaustive search for lambda with D_{n-1} lambda = c over Z/m.
inline std::optional<std::vector<CircleValue>> enumerated_primitive(const CochainComplex& complex, int n,
                                                                    const std::vector<CircleValue>& c, std::int64_t m) {
    std::optional<std::vector<CircleValue>> found;
    for_each_vector(complex.dimension(n - 1), m, [&](const std::vector<CircleValue>& v) {
        if (!found && apply_coboundary(complex, n - 1, v) == c) found = v;
    });
    return found;
}

/// Both compatibility conditions for de.ebar, checked cell by cell on
/// precomputed binerve levels (the validator recomputes them on every call).
class CompatibilityOracle {
public:
    explicit CompatibilityOracle(const DoubleGroupoid& d) : h_(binerve(d, 2, 1)), v_(binerve(d, 1, 2)) {}

    bool compatible(const DoubleExtension& de) const {
        for (const auto& c : h_.cells)
            if (!horizontal_residual(de, c[0], c[1]).is_zero()) return false;
        for (const auto& c : v_.cells)
            if (!vertical_residual(de, c[0], c[1]).is_zero()) return false;
        return true;
    }

private:
    BiNerveLevel h_, v_;
};

// Random double extensions ---------------------------------------------------------------

inline std::vector<zoo::NamedDouble> double_pool() {
    std::vector<zoo::NamedDouble> pool = zoo::doubles();
    pool.push_back({"constant", build_constant_double({"a", "b"})});
    pool.push_back({"pair(Z3)", build_pair_double(one_object_groupoid(cyclic_group(3)))});
    pool.push_back({"pair(P2)", build_pair_double(build_pair_groupoid({"u", "v"}))});
    pool.push_back({"S3/Z2", build_group_subgroup_double(symmetric_group(3), {0, 1})});
    pool.push_back({"K4/Z2", build_group_subgroup_double(klein_four_group(), {0, 1})});
    pool.push_back({"Z4/Z4", build_group_subgroup_double(cyclic_group(4), {0, 1, 2, 3})});
    pool.push_back({"G(Z2,Z2)", build_g_groupoid_double(one_object_groupoid(cyclic_group(2)), cyclic_group(2),
                                                        GroupoidAction{{0, 1, 0, 1}, {0, 0}})});
    pool.push_back({"G(P2,Z2)", build_g_groupoid_double(build_pair_groupoid({"u", "v"}), cyclic_group(2),
                                                        GroupoidAction{{0, 1, 2, 3, 3, 2, 1, 0}, {0, 1, 1, 0}})});
    return pool;
}

struct RandomDoubleExtension {
    std::string name;
    DoubleExtension de;
    std::int64_t modulus = 0;
};

/// Picks a double, a fiber order in {2, 3, 4}, random closed curvatures on both
/// edges, solves for a compatible section (doubling the modulus as needed)
/// and returns a random member of the solution set; nullopt if unsolvable.
inline std::optional<RandomDoubleExtension> random_double_extension(std::mt19937_64& rng,
                                                                    const std::vector<zoo::NamedDouble>& pool) {
    const auto& pick = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(2, 4)(rng);
    const DoubleGroupoid& d = pick.d;
    CentralExtension ev = extension_from_cocycle(d.vertical, n, random_closed_cochain(rng, d.vertical, n));
    CentralExtension eh = extension_from_cocycle(d.horizontal, n, random_closed_cochain(rng, d.horizontal, n));
    const SectionSolution s = solve_compatible_section_escalating(d, ev, eh, 2 * n, 16 * n);
    if (!s.solvable) return std::nullopt;
    std::vector<CircleValue> ebar = s.particular;
    std::uniform_int_distribution<std::int64_t> k(0, s.modulus - 1);
    for (const auto& gen : s.kernel) {
        const std::int64_t a = k(rng);
        for (std::size_t i = 0; i < ebar.size(); ++i) ebar[i] += a * gen[i];
    }
    return RandomDoubleExtension{pick.name, make_double_extension(d, std::move(ev), std::move(eh), std::move(ebar)),
                                 s.modulus};
}

}  // namespace support
