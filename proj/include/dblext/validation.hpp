#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dblext {

using Id = std::string;

/// One violated axiom, with the first witness found in canonical order.
struct Violation {
    std::string axiom;
    std::vector<Id> witness;
    std::size_t occurrences = 1;
    std::string note;
};

/// Outcome of an exhaustive axiom check. Violations are grouped by axiom in
/// order of first occurrence; valid() iff there are none.
class ValidationReport {
public:
    bool valid() const { return violations_.empty(); }
    const std::vector<Violation>& violations() const { return violations_; }

    void add(std::string_view axiom, std::vector<Id> witness, std::string_view note = {});
    bool has(std::string_view axiom) const;
    const Violation* find(std::string_view axiom) const;

    /// Appends the violations of `other`, prefixing axiom names (e.g. "vertical structure: ").
    void merge(const ValidationReport& other, std::string_view prefix = {});

private:
    std::vector<Violation> violations_;
};

}  // namespace dblext
