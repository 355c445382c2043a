#include "dblext/torsor.hpp"

#include <stdexcept>

namespace dblext {

TorsorTensor& TorsorTensor::add(int bundle, int base, int element, int sign) {
    if (sign != 1 && sign != -1) {
        throw std::logic_error("torsor factor sign must be +1 or -1");
    }
    factors_.push_back({bundle, base, element, sign});
    return *this;
}

TorsorTensor& TorsorTensor::add(const TorsorTensor& other, int sign) {
    for (const auto& f : other.factors_) {
        factors_.push_back({f.bundle, f.base, f.element, f.sign * sign});
    }
    scalar_ += sign > 0 ? other.scalar_ : -other.scalar_;
    return *this;
}

TorsorTensor TorsorTensor::inverse() const {
    TorsorTensor out;
    out.add(*this, -1);
    return out;
}

TorsorTensor& TorsorTensor::scale(const CircleValue& z) {
    scalar_ += z;
    return *this;
}

std::map<std::pair<int, int>, int> TorsorTensor::exponents() const {
    std::map<std::pair<int, int>, int> out;
    for (const auto& f : factors_) {
        out[{f.bundle, f.base}] += f.sign;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

CircleValue TorsorTensor::encode(const std::function<CircleValue(int, int)>& offset) const {
    CircleValue sum = scalar_;
    for (const auto& f : factors_) {
        const CircleValue v = offset(f.bundle, f.element);
        sum += f.sign > 0 ? v : -v;
    }
    return sum;
}

}  // namespace dblext
