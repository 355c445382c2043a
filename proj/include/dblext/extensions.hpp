#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dblext/circle.hpp"
#include "dblext/complexes.hpp"
#include "dblext/groupoid.hpp"
#include "dblext/torsor.hpp"

namespace dblext {

/// A central extension of `base` by A = (1/n)Z/Z, n = fiber_order. The fiber
/// element k stands for k/n; act[x * n + k] is x . (k/n).
struct CentralExtension {
    FiniteGroupoid base;
    std::int64_t fiber_order = 1;
    FiniteGroupoid total;
    std::vector<int> proj;  // total arrow -> base arrow
    std::vector<int> act;   // total arrows x fiber_order

    int acted(int x, std::int64_t k) const {
        return act[static_cast<std::size_t>(x) * fiber_order + static_cast<std::size_t>(k)];
    }
    CircleValue fiber_value(std::int64_t k) const { return CircleValue::units(k, fiber_order); }

    /// Throws StructuralError on malformed tables.
    void check_structure() const;

    friend bool operator==(const CentralExtension&, const CentralExtension&) = default;
};

/// Axiom ids: "total groupoid: <groupoid axiom>", "object identity",
/// "projection morphism", "fiber action", "fiber freeness",
/// "fiber transitivity", "centrality".
ValidationReport validate_extension(const CentralExtension& e);

/// base arrow -> total arrow over it.
using Section = std::vector<int>;

/// The smallest-index total arrow in each fiber.
Section canonical_section(const CentralExtension& e);
/// Throws DomainError if proj(s(x)) != x somewhere.
void check_section(const CentralExtension& e, const Section& s);
/// For every total arrow y: the k with y = s(proj y) . (k/n).
std::vector<std::int64_t> fiber_offsets(const CentralExtension& e, const Section& s);

struct CocyclePresentation {
    std::int64_t fiber_order = 1;
    Cochain sigma;  // on nerve(base, 2)
};

/// sigma(x1, x2) is the a with m^(s x1, s x2) = s(x1 x2) . a.
CocyclePresentation curvature(const CentralExtension& e, const Section& s);

/// The natural section s_nt(x1, x2) = [x2^, m^(x1^, x2^)^-1, x1^] of the
/// delta-bundle, encoded against s, and the check delta(s_nt) = 1.
struct NaturalSectionReport {
    Cochain encoding;  // equals -curvature
    bool closed = false;         // d'(encoding) == 0
    bool trivialization = false;  // raw delta(s_nt) cancels and is 1 at every 3-simplex
    std::vector<Id> witness;      // first failing 3-simplex, if any
};

/// `lifts` optionally picks the total arrows used for x1^, x2^ (any arrows in
/// the right fibers); by centrality the result does not depend on it.
NaturalSectionReport natural_section_encoding(const CentralExtension& e, const Section& s,
                                              const std::vector<int>* lifts = nullptr);

/// Raw torsor tensor of s_nt at the 2-simplex (x1, x2) with the given lifts.
TorsorTensor natural_section_tensor(const CentralExtension& e, int x1hat, int x2hat, int bundle = 0);

/// Total arrows (x, k) named "x#k"; m^((x1,a1),(x2,a2)) = (x1 x2, a1 + a2 + sigma(x1,x2)).
/// Units and inverses are solved for, so sigma need not be normalized and
/// curvature(result, canonical_section(result)) == sigma exactly.
/// Throws PreconditionError (a DomainError) with a failing triple if d'sigma != 0.
CentralExtension extension_from_cocycle(const FiniteGroupoid& base, std::int64_t n, const Cochain& sigma);

/// sigma + d'lambda with sigma(e, x) = sigma(x, e) = 0.
struct NormalizedCocycle {
    Cochain sigma;
    Cochain lambda;
};
NormalizedCocycle normalize_cocycle(const FiniteGroupoid& base, const Cochain& sigma);

/// lambda with sigma1 - sigma2 = d'lambda over A, and the induced isomorphism
/// s1(x).a -> s2(x).(a + lambda(x)) from e1's total arrows to e2's.
struct EquivalenceWitness {
    Cochain lambda;
    std::vector<int> isomorphism;
};
std::optional<EquivalenceWitness> are_equivalent(const CentralExtension& e1, const CentralExtension& e2);

// Bundle gerbes ---------------------------------------------------------------------

/// phi : Y -> M on finite sets.
struct Surjection {
    std::vector<Id> base;   // M
    std::vector<Id> cover;  // Y
    std::vector<int> phi;
};

/// Y^[2] over Y: arrows (y1, y2) with phi y1 == phi y2, s = y2, t = y1,
/// m((y1, y2), (y3, y1)) = (y3, y2).
FiniteGroupoid fiber_product_groupoid(const Surjection& phi);

struct GerbeRecord {
    Surjection surjection;
    FiniteGroupoid groupoid;  // Y^[2]
    CentralExtension extension;
    Cochain section_encoding;  // the section s^ encoded against the canonical section
    bool delta_trivial = false;
    /// Order of the class of the curvature in H^2(Y^[2]; Z/n).
    std::int64_t class_order = 1;
};

/// Wraps an extension of Y^[2]; the section is its natural section.
/// Throws GerbeConditionError if delta(s^) != 1.
GerbeRecord bundle_gerbe(const Surjection& phi, const CentralExtension& extension);
/// Trivial bundle Y^[2] x A with a section given by its encoding; the
/// multiplication is derived so that s^ becomes the natural section.
/// Throws GerbeConditionError with a failing triple if delta(s^) != 1.
GerbeRecord bundle_gerbe(const Surjection& phi, std::int64_t n, const Cochain& section_encoding);

}  // namespace dblext
