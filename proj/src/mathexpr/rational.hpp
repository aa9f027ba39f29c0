#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace kpforge::mathexpr {

// Raised internally when 128-bit arithmetic would overflow; the evaluator
// catches it and degrades the value to a floating-point approximation.
struct RationalOverflow {};
struct RationalDivideByZero {};

// Exact rational on __int128, kept in lowest terms with positive denominator.
// Covers integers up to ~1.7e38, comfortably past the 1e30 exactness the
// grading path needs. All arithmetic is overflow-checked.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    static Rational make(__int128 num, __int128 den);  // throws on den == 0

    __int128 num() const { return num_; }
    __int128 den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;  // throws RationalDivideByZero
    Rational operator-() const;

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    long double to_long_double() const;
    std::string str() const;  // "p/q", or "p" when integral

    // Integer power with checked magnitude; exponent limited to |e| <= 512.
    Rational pow_int(long long e) const;

    // Exact k-th root if one exists (k >= 2).
    std::optional<Rational> exact_root(int k) const;

    // Digits-only integer, optionally signed. Returns nullopt on overflow or
    // non-numeric input.
    static std::optional<Rational> parse_integer(std::string_view digits);
    // "12.residual" style decimal; exact scaling by a power of ten.
    static std::optional<Rational> parse_decimal(std::string_view intpart, std::string_view fracpart);

private:
    __int128 num_;
    __int128 den_;
};

}  // namespace kpforge::mathexpr
