#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dblext {

/// Malformed input tables: dangling ids, wrong table sizes, bad file contents.
/// Distinct from an axiom violation, which is reported through ValidationReport.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the domain of an operation (empty set, non-closed cocycle,
/// modulus not representing the fiber, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what, std::vector<std::string> witness = {})
        : std::runtime_error(what), witness_(std::move(witness)) {}

    const std::vector<std::string>& witness() const { return witness_; }

private:
    std::vector<std::string> witness_;
};

/// A requested nerve level exceeds the configured cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation called with an argument violating its stated precondition
/// (e.g. a cochain that is not closed). Carries the failing simplex.
class PreconditionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A bundle gerbe section with delta(s) != 1.
class GerbeConditionError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace dblext
