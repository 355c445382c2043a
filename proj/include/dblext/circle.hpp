#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace dblext {

/// An exact element num/den of Q/Z, the additive model of U(1).
/// Always reduced with 0 <= num < den.
class CircleValue {
public:
    constexpr CircleValue() = default;

    static CircleValue fraction(std::int64_t num, std::int64_t den);
    /// k/m for an element of the subgroup (1/m)Z/Z.
    static CircleValue units(std::int64_t k, std::int64_t m) { return fraction(k, m); }
    /// Parses "num/den" (or "0"). Throws StructuralError on malformed text.
    static CircleValue parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    /// Order of the element in Q/Z.
    std::int64_t order() const { return den_; }

    /// The integer k with value == k/m, or nullopt if the value is not in (1/m)Z/Z.
    std::optional<std::int64_t> in_units_of(std::int64_t m) const;

    std::string to_string() const;

    CircleValue operator-() const;
    CircleValue& operator+=(const CircleValue& other);
    CircleValue& operator-=(const CircleValue& other) { return *this += -other; }
    friend CircleValue operator+(CircleValue a, const CircleValue& b) { return a += b; }
    friend CircleValue operator-(CircleValue a, const CircleValue& b) { return a -= b; }
    friend CircleValue operator*(std::int64_t k, const CircleValue& v);

    friend bool operator==(const CircleValue&, const CircleValue&) = default;
    friend std::strong_ordering operator<=>(const CircleValue& a, const CircleValue& b);

private:
    constexpr CircleValue(std::int64_t num, std::int64_t den) : num_(num), den_(den) {}

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const CircleValue& v);

}  // namespace dblext
