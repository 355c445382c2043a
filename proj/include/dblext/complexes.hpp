#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dblext/circle.hpp"
#include "dblext/double_groupoid.hpp"
#include "dblext/groupoid.hpp"
#include "dblext/linalg.hpp"

namespace dblext {

/// A cochain complex of free abelian groups with a distinguished basis of
/// cells in each degree. Degrees below 0 are zero.
///
/// Nerve levels of a finite groupoid are 0-dimensional, so the exterior
/// (de Rham) direction of the smooth theory vanishes identically; the
/// complexes here are the form-degree-0 slice, with Q/Z-valued cochains in
/// place of U(1)-valued functions.
class CochainComplex {
public:
    virtual ~CochainComplex() = default;
    virtual std::size_t dimension(int n) const = 0;
    /// D_n : C^n -> C^{n+1} as a dimension(n+1) x dimension(n) matrix.
    virtual IntMatrix coboundary(int n) const = 0;
    virtual std::string describe_cell(int n, std::size_t index) const = 0;
};

/// Cochains on the nerve of a groupoid with d' = sum (-1)^i eps_i^*.
class NerveComplex : public CochainComplex {
public:
    explicit NerveComplex(FiniteGroupoid g, int cap = kDefaultNerveCap);

    const FiniteGroupoid& groupoid() const { return g_; }
    int cap() const { return cap_; }
    /// Cached nerve level; throws ResourceError past the cap.
    const NerveLevel& level(int p) const;

    std::size_t dimension(int n) const override;
    IntMatrix coboundary(int n) const override;
    std::string describe_cell(int n, std::size_t index) const override;

private:
    FiniteGroupoid g_;
    int cap_;
    mutable std::map<int, NerveLevel> cache_;
    mutable std::mutex mutex_;
};

/// Total complex of the bisimplicial nerve: C^n = sum_{p+q=n} C^{p,q}, blocks
/// ordered (n,0), (n-1,1), ..., (0,n). D = d' + d'' with d'' carrying (-1)^p.
class TotalComplex : public CochainComplex {
public:
    explicit TotalComplex(DoubleGroupoid d, int cap = kDefaultBinerveCap);

    const DoubleGroupoid& double_groupoid() const { return d_; }
    int cap() const { return cap_; }
    const BiNerveLevel& level(int p, int q) const;
    /// Offset of block (p, q) inside C^{p+q}.
    std::size_t offset(int p, int q) const;

    std::size_t dimension(int n) const override;
    IntMatrix coboundary(int n) const override;
    std::string describe_cell(int n, std::size_t index) const override;

private:
    DoubleGroupoid d_;
    int cap_;
    mutable std::map<std::pair<int, int>, BiNerveLevel> cache_;
    mutable std::mutex mutex_;
};

// Cochains --------------------------------------------------------------------------

/// Values aligned with nerve(G, p).tuples.
struct Cochain {
    int p = 0;
    std::vector<CircleValue> values;

    friend bool operator==(const Cochain&, const Cochain&) = default;
};

/// Components keyed by bidegree (p, q), each aligned with binerve(D, p, q).cells.
/// Missing bidegrees are zero.
struct BiCochain {
    std::map<std::pair<int, int>, std::vector<CircleValue>> components;

    const std::vector<CircleValue>* component(int p, int q) const;
    /// True when every stored value is zero.
    bool is_zero() const;
};

Cochain zero_cochain(const NerveComplex& c, int p);

/// (d'c)(x) = sum_{i=0}^{p+1} (-1)^i c(eps_i x).
Cochain differential(const NerveComplex& complex, const Cochain& c);
Cochain differential(const FiniteGroupoid& g, const Cochain& c);

/// Horizontal: raises p, no twist. Vertical: raises q, multiplied by (-1)^p.
BiCochain bidifferential(const TotalComplex& complex, const BiCochain& c, Axis axis);
/// d' + d'' componentwise.
BiCochain total_differential(const TotalComplex& complex, const BiCochain& c);

/// Concatenation of the components of total degree n in block order.
std::vector<CircleValue> flatten(const TotalComplex& complex, int n, const BiCochain& c);
BiCochain unflatten(const TotalComplex& complex, int n, const std::vector<CircleValue>& values);

/// D_n applied to a flat Q/Z-valued cochain of degree n.
std::vector<CircleValue> apply_coboundary(const CochainComplex& complex, int n, const std::vector<CircleValue>& c);

// Cohomology ------------------------------------------------------------------------

struct Coefficients {
    std::int64_t modulus = 0;  // 0: integral

    static Coefficients integral() { return {}; }
    static Coefficients mod(std::int64_t m);
    bool is_integral() const { return modulus == 0; }
};

struct CohomologyResult {
    int degree = 0;
    std::int64_t modulus = 0;  // 0: integral coefficients
    std::vector<BigInt> invariant_factors;
    std::size_t free_rank = 0;
    /// Mod-m only: one cocycle per invariant factor, as flat values in (1/m)Z/Z.
    std::vector<std::vector<CircleValue>> representatives;

    /// Order of the group; 0 when there is a free part.
    BigInt order() const;
    bool trivial() const { return free_rank == 0 && invariant_factors.empty(); }
};

CohomologyResult cohomology(const CochainComplex& complex, int n, Coefficients coefficients);

/// Result of solving D_{n-1} lambda = c over Z/m.
struct CoboundaryResult {
    std::int64_t modulus = 1;
    bool solvable = false;
    /// Lexicographically smallest lambda (flat, degree n-1).
    std::vector<CircleValue> witness;
    /// When unsolvable: w over the cells of degree n with w D_{n-1} = 0 and w c != 0 (mod m).
    std::vector<std::int64_t> certificate;
    BigInt solution_count;
};

/// Throws PreconditionError naming a failing cell when c is not closed and
/// DomainError when a value does not lie in (1/m)Z/Z.
CoboundaryResult solve_coboundary(const CochainComplex& complex, int n, const std::vector<CircleValue>& c,
                                  std::int64_t m);

std::optional<Cochain> is_coboundary(const NerveComplex& complex, const Cochain& c, std::int64_t m);
std::optional<BiCochain> is_coboundary(const TotalComplex& complex, int n, const BiCochain& c, std::int64_t m);

/// Order of the class of the closed cochain c in H^n(complex; Z/m).
std::int64_t class_order(const CochainComplex& complex, int n, const std::vector<CircleValue>& c, std::int64_t m);

/// Lift of a closed Q/Z-valued cochain to [0,1)-valued rationals, followed by D_n.
struct BocksteinResult {
    int degree = 0;  // n + 1
    std::vector<BigInt> cocycle;
    bool is_coboundary = false;
    /// Order of the integral class; 0 if infinite.
    BigInt order;
    /// Integral cochain of degree n with D_n w = cocycle, when is_coboundary.
    std::vector<BigInt> witness;
};

BocksteinResult bockstein(const CochainComplex& complex, int n, const std::vector<CircleValue>& c);

/// For 2-cochains: alt(x, y) = c(x, y) - c(y, x) on commuting loops x, y at
/// one object. Unchanged by adding d'lambda, so a nonzero value certifies
/// that c is not a coboundary for any coefficients.
struct AntisymmetryWitness {
    int x = -1;
    int y = -1;
    CircleValue value;
};

std::optional<AntisymmetryWitness> antisymmetry_witness(const NerveComplex& complex, const Cochain& c);

/// True when alt is nondegenerate on the loops at object `object`: every
/// non-unit loop pairs nontrivially with some commuting loop.
bool antisymmetry_nondegenerate(const NerveComplex& complex, const Cochain& c, int object);

}  // namespace dblext
