#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "dblext/circle.hpp"

namespace dblext {

/// One factor of a tensor product of pulled-back circle bundles: an element
/// of the fiber of bundle `bundle` over base arrow `base`, raised to `sign`.
struct TorsorFactor {
    int bundle = 0;
    int base = 0;
    int element = 0;  // total-space arrow lying over `base`
    int sign = 1;     // +1 or -1
};

/// A formal element [f_1, ..., f_k] . z of a tensor product of circle
/// torsors, modulo (s u, t u^-1) ~ (s, t). The scalar z in Q/Z carries the
/// part of a U(1)-valued element that does not lie in the finite fiber.
/// Kept raw so that cancellations can be checked rather than assumed.
class TorsorTensor {
public:
    TorsorTensor() = default;

    TorsorTensor& add(int bundle, int base, int element, int sign = 1);
    /// Appends other^sign (sign -1 flips every factor).
    TorsorTensor& add(const TorsorTensor& other, int sign = 1);
    TorsorTensor inverse() const;
    TorsorTensor& scale(const CircleValue& z);
    const CircleValue& scalar() const { return scalar_; }

    const std::vector<TorsorFactor>& factors() const { return factors_; }

    /// Net exponent of each (bundle, base) pair; zero entries are dropped.
    std::map<std::pair<int, int>, int> exponents() const;
    /// All factors pair off, so the tensor lies in a canonically trivial bundle.
    bool cancels() const { return exponents().empty(); }

    /// scalar + sum of sign * offset(bundle, element): the value under the
    /// trivialization given by one reference section per bundle. When the
    /// tensor cancels this is independent of the references.
    CircleValue encode(const std::function<CircleValue(int bundle, int element)>& offset) const;

private:
    std::vector<TorsorFactor> factors_;
    CircleValue scalar_;
};

}  // namespace dblext
