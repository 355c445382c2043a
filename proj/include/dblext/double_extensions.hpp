#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dblext/complexes.hpp"
#include "dblext/double_groupoid.hpp"
#include "dblext/extensions.hpp"

namespace dblext {

/// Bundle tags used in raw torsor bookkeeping.
inline constexpr int kVerticalBundle = 0;
inline constexpr int kHorizontalBundle = 1;

/// A double groupoid with extensions of both edge groupoids and the section
/// s-bar of the bundle sV*EV (x) tV*EV^-1 (x) sH*EH^-1 (x) tH*EH over the
/// squares, encoded as ebar against the reference sections ref_v, ref_h.
struct DoubleExtension {
    DoubleGroupoid d;
    CentralExtension ev;  // over d.vertical
    CentralExtension eh;  // over d.horizontal
    Section ref_v, ref_h;
    Cochain sigma_v, sigma_h;      // curvatures of the references
    std::vector<CircleValue> ebar;  // per square

    // sigma by arrow pair (arrows x arrows, zero off the composable pairs)
    std::vector<CircleValue> sigma_v_table, sigma_h_table;
    const CircleValue& sigma_v_at(int a, int b) const { return sigma_v_table[a * d.vertical.arrow_count() + b]; }
    const CircleValue& sigma_h_at(int a, int b) const { return sigma_h_table[a * d.horizontal.arrow_count() + b]; }
};

/// Checks that the extensions sit over the edge groupoids with equal fiber
/// orders (StructuralError otherwise) and computes the curvatures. References
/// default to the canonical sections.
DoubleExtension make_double_extension(DoubleGroupoid d, CentralExtension ev, CentralExtension eh,
                                      std::vector<CircleValue> ebar, std::optional<Section> ref_v = std::nullopt,
                                      std::optional<Section> ref_h = std::nullopt);

/// Residual of the horizontal condition at a cell (x1 over x2) of binerve(2,1):
/// ebar(x1) - ebar(mV(x1,x2)) + ebar(x2) - sigmaH(sH pair) + sigmaH(tH pair).
CircleValue horizontal_residual(const DoubleExtension& de, int x1, int x2);
/// Residual of the vertical condition at a cell (x1, x2) of binerve(1,2):
/// ebar(x1) - ebar(mH(x1,x2)) + ebar(x2) - sigmaV(tV pair) + sigmaV(sV pair).
CircleValue vertical_residual(const DoubleExtension& de, int x1, int x2);

/// Axiom ids: "horizontal compatibility", "vertical compatibility".
ValidationReport validate_double_extension(const DoubleExtension& de);

// Solver --------------------------------------------------------------------------------

struct SectionSolution {
    std::int64_t modulus = 1;
    bool solvable = false;
    std::vector<CircleValue> particular;              // lexicographically smallest ebar
    std::vector<std::vector<CircleValue>> kernel;     // Howell basis of the homogeneous solutions
    BigInt count;                                     // number of solutions
    std::vector<std::string> equations;               // one label per equation row
    std::vector<std::int64_t> certificate;            // weights with w A = 0, w b != 0 (mod m)
    std::vector<std::int64_t> tried_moduli;           // escalation history
};

/// Both compatibility conditions as a linear system over Z/m in the unknowns
/// ebar(x). `m` must be a multiple of the fiber order; 0 picks 2 x fiber order.
SectionSolution solve_compatible_section(const DoubleGroupoid& d, const CentralExtension& ev,
                                         const CentralExtension& eh, std::int64_t m = 0);
/// Doubles m from `m` until solvable or beyond `max_modulus`.
SectionSolution solve_compatible_section_escalating(const DoubleGroupoid& d, const CentralExtension& ev,
                                                    const CentralExtension& eh, std::int64_t m,
                                                    std::int64_t max_modulus);

/// Calls fn(ebar) for every solution, in a fixed order.
void for_each_solution(const SectionSolution& s, const std::function<void(const std::vector<CircleValue>&)>& fn);

// The 3-cocycle -----------------------------------------------------------------------

/// Components sigmaH at (2,0), ebar at (1,1), sigmaV at (0,2). Throws
/// DomainError with the validator's witness when de is not compatible.
BiCochain assemble_double_cocycle(const DoubleExtension& de);

struct BidegreeResidual {
    int p = 0;
    int q = 0;
    std::size_t cells = 0;
    std::size_t nonzero = 0;
    std::string witness;  // first nonzero cell
};

/// Total differential of a total-degree-2 bicochain, bidegree by bidegree
/// ((3,0), (2,1), (1,2), (0,3)).
std::vector<BidegreeResidual> verify_double_cocycle(const TotalComplex& complex, const BiCochain& cocycle);

struct DoubleClassResult {
    std::int64_t modulus = 1;
    bool coboundary = false;
    /// Order of the class in H^2(Tot; Z/m).
    std::int64_t order = 1;
    /// b at (1,0), (0,1) with D b = cocycle, when coboundary.
    std::optional<BiCochain> primitive;
    std::vector<std::int64_t> certificate;
    BocksteinResult bockstein;
    /// Coboundary-invariant antisymmetrizations of the (2,0) and (0,2) parts.
    std::optional<AntisymmetryWitness> horizontal_alt;
    std::optional<AntisymmetryWitness> vertical_alt;
};

DoubleClassResult double_class(const TotalComplex& complex, const DoubleExtension& de, std::int64_t m);

/// Moves the references to ref_v . lambda_v and ref_h . lambda_h (lambda
/// values in the fiber). The curvatures change by d'lambda and ebar by
/// -lambda_v(sV x) + lambda_v(tV x) + lambda_h(sH x) - lambda_h(tH x); the raw
/// section s-bar is unchanged.
DoubleExtension regauge(const DoubleExtension& de, const Cochain& lambda_v, const Cochain& lambda_h);

/// Re-derives both conditions through raw torsor elements with random lifts
/// and compares with the encoded residuals.
struct CompatibilityAudit {
    std::size_t cells = 0;
    bool cancellations = true;  // edge factors pair off as predicted
    bool agreement = true;      // raw value == encoded residual everywhere
    std::vector<Id> witness;
};

CompatibilityAudit audit_compatibility(const DoubleExtension& de, std::uint64_t seed);

}  // namespace dblext
