#include "dblext/validation.hpp"

#include <algorithm>

namespace dblext {

void ValidationReport::add(std::string_view axiom, std::vector<Id> witness, std::string_view note) {
    auto it = std::find_if(violations_.begin(), violations_.end(),
                           [&](const Violation& v) { return v.axiom == axiom; });
    if (it != violations_.end()) {
        ++it->occurrences;
        return;
    }
    violations_.push_back(Violation{std::string(axiom), std::move(witness), 1, std::string(note)});
}

bool ValidationReport::has(std::string_view axiom) const { return find(axiom) != nullptr; }

const Violation* ValidationReport::find(std::string_view axiom) const {
    auto it = std::find_if(violations_.begin(), violations_.end(),
                           [&](const Violation& v) { return v.axiom == axiom; });
    return it == violations_.end() ? nullptr : &*it;
}

void ValidationReport::merge(const ValidationReport& other, std::string_view prefix) {
    for (const auto& v : other.violations_) {
        std::string name = std::string(prefix) + v.axiom;
        auto it = std::find_if(violations_.begin(), violations_.end(),
                               [&](const Violation& w) { return w.axiom == name; });
        if (it != violations_.end()) {
            it->occurrences += v.occurrences;
        } else {
            violations_.push_back(Violation{name, v.witness, v.occurrences, v.note});
        }
    }
}

}  // namespace dblext
