#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mathexpr/parser.hpp"
#include "mathexpr/rational.hpp"

namespace kpforge::mathexpr {

// Normal form for answer equivalence. Exact rationals stay exact; irrational
// or overflowing computations carry a long-double approximation; anything the
// grammar cannot handle degrades to a normalized text atom so voting still
// functions over exotic forms.
struct CanonicalValue {
    enum class Kind { exact, approx, text, tuple };
    Kind kind = Kind::text;
    Rational exact;
    long double approx = 0.0L;
    std::string text;
    std::vector<CanonicalValue> elements;

    bool is_numeric() const { return kind == Kind::exact || kind == Kind::approx; }
    long double numeric() const { return kind == Kind::exact ? exact.to_long_double() : approx; }

    static CanonicalValue from_exact(Rational r);
    static CanonicalValue from_approx(long double v);
    static CanonicalValue from_text(std::string_view raw);

    std::string describe() const;  // diagnostic rendering
};

struct Tolerances {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
};

// Parse + evaluate; never throws. Unparseable or non-evaluable input yields a
// text atom (normalized lowercase, collapsed whitespace).
CanonicalValue canonicalize(std::string_view raw);

bool equivalent_values(const CanonicalValue& a, const CanonicalValue& b, const Tolerances& tol);

// Equivalence on raw answer strings: exact rationals compare exactly; mixed
// exact/approx numerically within max(abs_tol, rel_tol*|b|); tuples
// element-wise; text atoms by normalized string equality.
bool equivalent(std::string_view a, std::string_view b, double rel_tol = 1e-6, double abs_tol = 1e-9);

}  // namespace kpforge::mathexpr
