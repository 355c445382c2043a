#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dblext/double_extensions.hpp"
#include "dblext/io.hpp"

/// Small named instances used as fixtures, in tests and in the documentation.
namespace dblext::zoo {

FiniteGroupoid p3();           // pair groupoid on {0,1,2}
FiniteGroupoid z2();           // Z/2 as a one-object groupoid
FiniteGroupoid k4();           // Z/2 x Z/2, elements "00", "01", "10", "11"
FiniteGroupoid cech();         // cover {{a,b},{b,c}} of {a,b,c}
FiniteGroupoid action_swap();  // Z/2 acting on {a,b} by the swap

DoubleGroupoid pd2();   // pair double groupoid of Z/2
DoubleGroupoid gk();    // K4 acting trivially on the one-point groupoid
DoubleGroupoid gh42();  // Z/4 with the subgroup {0,2}

struct Named {
    std::string name;
    FiniteGroupoid groupoid;
};
struct NamedDouble {
    std::string name;
    DoubleGroupoid d;
};
std::vector<Named> groupoids();
std::vector<NamedDouble> doubles();

/// sigma2(1,1) = 1/2 on Z/2, zero elsewhere.
Cochain sigma2(const FiniteGroupoid& z2);
/// sigma_K(a, b) = a2 b1 / 2 on a groupoid whose arrows are named like K4 elements.
Cochain sigma_k(const FiniteGroupoid& k4_like);

/// Z/4 over Z/2 with fiber Z/2: proj k = k mod 2, k . (1/2) = k + 2.
CentralExtension e2();
/// Base x A with the untwisted product.
CentralExtension trivial_extension(const FiniteGroupoid& base, std::int64_t n);

/// GK with EH = extension_from_cocycle(K4, 2, sigma_K), EV trivial, ebar = 0.
DoubleExtension gk_flagship();
/// PD2 with EV = E2, EH trivial, ebar to be solved.
DoubleExtensionFile pd2_e2();

}  // namespace dblext::zoo
