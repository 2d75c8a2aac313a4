#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace ising {

// A field strength in [-inf, +inf]. Infinite values clamp the spin.
class ExtendedField {
public:
    constexpr ExtendedField() = default;
    // Throws ValidationError on NaN.
    ExtendedField(double value);  // NOLINT(google-explicit-constructor)

    static ExtendedField plus_infinity() { return ExtendedField(std::numeric_limits<double>::infinity()); }
    static ExtendedField minus_infinity() { return ExtendedField(-std::numeric_limits<double>::infinity()); }

    double value() const { return value_; }
    bool is_finite() const { return std::isfinite(value_); }
    bool is_infinite() const { return !is_finite(); }
    // +1 / -1 for infinite values, 0 for finite ones.
    int infinite_sign() const { return is_finite() ? 0 : (value_ > 0 ? 1 : -1); }
    double magnitude() const { return std::fabs(value_); }

    // "+inf", "-inf" or the shortest round-trip decimal.
    std::string to_string() const;

    friend bool operator==(ExtendedField, ExtendedField) = default;

private:
    double value_ = 0.0;
};

// Throws DomainError for (+inf) + (-inf).
ExtendedField operator+(ExtendedField a, ExtendedField b);
ExtendedField operator-(ExtendedField a);
inline ExtendedField operator-(ExtendedField a, ExtendedField b) { return a + (-b); }

// scale * f with the convention 0 * (+-inf) = 0; scale must be >= 0.
ExtendedField scaled(ExtendedField f, double scale);

}  // namespace ising
