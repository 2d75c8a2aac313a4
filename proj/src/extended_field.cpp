#include "ising/extended_field.hpp"

#include <cstdio>

#include "ising/errors.hpp"

namespace ising {

ExtendedField::ExtendedField(double value) : value_(value) {
    if (std::isnan(value)) throw ValidationError("field value is NaN");
}

std::string ExtendedField::to_string() const {
    if (infinite_sign() > 0) return "+inf";
    if (infinite_sign() < 0) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
}

ExtendedField operator+(ExtendedField a, ExtendedField b) {
    if (a.infinite_sign() * b.infinite_sign() < 0) throw DomainError("(+inf) + (-inf) is undefined");
    return ExtendedField(a.value() + b.value());
}

ExtendedField operator-(ExtendedField a) { return ExtendedField(-a.value()); }

ExtendedField scaled(ExtendedField f, double scale) {
    if (!(scale >= 0.0)) throw DomainError("field scale must be non-negative");
    if (scale == 0.0) return ExtendedField(0.0);
    return ExtendedField(scale * f.value());
}

}  // namespace ising
