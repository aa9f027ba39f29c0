#include "mathexpr/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace kpforge::mathexpr {

namespace {

__int128 checked_add(__int128 a, __int128 b) {
    __int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw RationalOverflow{};
    return r;
}

__int128 checked_mul(__int128 a, __int128 b) {
    __int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw RationalOverflow{};
    return r;
}

__int128 abs128(__int128 x) {
    if (x >= 0) return x;
    __int128 r;
    if (__builtin_sub_overflow((__int128)0, x, &r)) throw RationalOverflow{};
    return r;
}

__int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Rational Rational::make(__int128 num, __int128 den) {
    if (den == 0) throw RationalDivideByZero{};
    if (den < 0) {
        num = checked_mul(num, -1);
        den = checked_mul(den, -1);
    }
    __int128 g = gcd128(num, den);
    Rational r;
    if (g > 1) {
        num /= g;
        den /= g;
    }
    r.num_ = num;
    r.den_ = den;
    return r;
}

Rational Rational::operator+(const Rational& o) const {
    return make(checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                checked_mul(den_, o.den_));
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    return make(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw RationalDivideByZero{};
    return make(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
}

Rational Rational::operator-() const { return make(checked_mul(num_, -1), den_); }

long double Rational::to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
}

std::string Rational::str() const {
    auto int_str = [](__int128 v) {
        if (v == 0) return std::string("0");
        bool neg = v < 0;
        std::string out;
        // builds digits from an unsigned magnitude to survive INT128_MIN
        unsigned __int128 mag = neg ? (unsigned __int128)0 - (unsigned __int128)v : (unsigned __int128)v;
        while (mag > 0) {
            out.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
            mag /= 10;
        }
        if (neg) out.push_back('-');
        return std::string(out.rbegin(), out.rend());
    };
    if (den_ == 1) return int_str(num_);
    return int_str(num_) + "/" + int_str(den_);
}

Rational Rational::pow_int(long long e) const {
    if (e > 512 || e < -512) throw RationalOverflow{};
    if (e == 0) {
        if (num_ == 0) throw RationalDivideByZero{};  // 0^0 left undefined
        return Rational(1);
    }
    bool invert = e < 0;
    unsigned long long n = invert ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Rational base = *this;
    Rational acc(1);
    while (n > 0) {
        if (n & 1ull) acc = acc * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    if (invert) return Rational(1) / acc;
    return acc;
}

namespace {

// Floor of the k-th root of a non-negative value, exact via correction steps.
std::optional<__int128> int_kth_root(__int128 v, int k) {
    if (v < 0) return std::nullopt;
    if (v <= 1) return v;
    long double guess = std::pow(static_cast<long double>(v), 1.0L / k);
    __int128 r = static_cast<__int128>(guess);
    auto powk = [&](__int128 x) -> std::optional<__int128> {
        __int128 acc = 1;
        for (int i = 0; i < k; ++i) {
            if (__builtin_mul_overflow(acc, x, &acc)) return std::nullopt;
        }
        return acc;
    };
    for (__int128 c = (r > 2 ? r - 2 : 0); c <= r + 2; ++c) {
        auto p = powk(c);
        if (p && *p == v) return c;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Rational> Rational::exact_root(int k) const {
    if (k < 2 || num_ < 0) return std::nullopt;
    auto rn = int_kth_root(num_, k);
    auto rd = int_kth_root(den_, k);
    if (rn && rd) {
        auto pw = [&](__int128 x) {
            __int128 acc = 1;
            for (int i = 0; i < k; ++i) acc *= x;
            return acc;
        };
        if (pw(*rn) == num_ && pw(*rd) == den_) return make(*rn, *rd);
    }
    return std::nullopt;
}

std::optional<Rational> Rational::parse_integer(std::string_view digits) {
    if (digits.empty()) return std::nullopt;
    size_t i = 0;
    bool neg = false;
    if (digits[0] == '+' || digits[0] == '-') {
        neg = digits[0] == '-';
        i = 1;
    }
    if (i >= digits.size()) return std::nullopt;
    __int128 v = 0;
    for (; i < digits.size(); ++i) {
        char c = digits[i];
        if (c < '0' || c > '9') return std::nullopt;
        if (__builtin_mul_overflow(v, (__int128)10, &v)) return std::nullopt;
        if (__builtin_add_overflow(v, (__int128)(c - '0'), &v)) return std::nullopt;
    }
    return Rational::make(neg ? -v : v, 1);
}

std::optional<Rational> Rational::parse_decimal(std::string_view intpart, std::string_view fracpart) {
    std::optional<Rational> ip = intpart.empty() ? std::optional<Rational>(Rational(0)) : parse_integer(intpart);
    if (!ip) return std::nullopt;
    if (fracpart.empty()) return ip;
    auto fp = parse_integer(fracpart);
    if (!fp || fp->sign() < 0) return std::nullopt;
    __int128 scale = 1;
    for (size_t i = 0; i < fracpart.size(); ++i) {
        if (__builtin_mul_overflow(scale, (__int128)10, &scale)) return std::nullopt;
    }
    try {
        Rational frac = Rational::make(fp->num(), scale);
        bool neg = !intpart.empty() && intpart[0] == '-';
        return neg ? *ip - frac : *ip + frac;
    } catch (const RationalOverflow&) {
        return std::nullopt;
    }
}

}  // namespace kpforge::mathexpr
