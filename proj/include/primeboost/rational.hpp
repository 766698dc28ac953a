#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace primeboost {

/// Exact rational on machine integers, always kept in lowest terms with a
/// positive denominator. Intermediates are widened to 128 bits; a result
/// that does not fit back into 64 bits throws CapacityError.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    [[nodiscard]] std::int64_t num() const noexcept { return num_; }
    [[nodiscard]] std::int64_t den() const noexcept { return den_; }
    [[nodiscard]] double to_double() const noexcept;
    [[nodiscard]] std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

[[nodiscard]] Rational abs(const Rational& r);

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace primeboost
