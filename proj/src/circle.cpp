#include "dblext/circle.hpp"

#include <charconv>
#include <numeric>

#include "dblext/errors.hpp"

namespace dblext {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw StructuralError("malformed circle value '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace

CircleValue CircleValue::fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw DomainError("circle value with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    num = floor_mod(num, den);
    std::int64_t g = std::gcd(num, den);
    if (g == 0) {
        g = den;
    }
    return CircleValue(num / g, den / g);
}

CircleValue CircleValue::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return fraction(parse_int(text, text), 1);
    }
    std::int64_t n = parse_int(text.substr(0, slash), text);
    std::int64_t d = parse_int(text.substr(slash + 1), text);
    if (d <= 0) {
        throw StructuralError("circle value '" + std::string(text) + "' needs a positive denominator");
    }
    return fraction(n, d);
}

std::optional<std::int64_t> CircleValue::in_units_of(std::int64_t m) const {
    if (m <= 0 || m % den_ != 0) {
        return std::nullopt;
    }
    return num_ * (m / den_);
}

std::string CircleValue::to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

CircleValue CircleValue::operator-() const {
    return CircleValue(num_ == 0 ? 0 : den_ - num_, den_);
}

CircleValue& CircleValue::operator+=(const CircleValue& other) {
    std::int64_t l = std::lcm(den_, other.den_);
    *this = fraction(num_ * (l / den_) + other.num_ * (l / other.den_), l);
    return *this;
}

CircleValue operator*(std::int64_t k, const CircleValue& v) {
    std::int64_t scaled = floor_mod(k, v.den_);
    return CircleValue::fraction(scaled * v.num_, v.den_);
}

std::strong_ordering operator<=>(const CircleValue& a, const CircleValue& b) {
    // num/den in [0,1); compare by cross multiplication
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs != rhs) {
        return lhs < rhs ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.den_ <=> b.den_;
}

std::ostream& operator<<(std::ostream& os, const CircleValue& v) {
    return os << v.to_string();
}

}  // namespace dblext
