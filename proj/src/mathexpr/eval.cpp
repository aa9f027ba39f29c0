#include "mathexpr/eval.hpp"

#include <cmath>
#include <stdexcept>

#include "util/text.hpp"

namespace kpforge::mathexpr {

namespace {

// Evaluation works on exact values until an operation leaves the rational
// domain, then sticks to long double.
struct NumValue {
    bool exact = true;
    Rational r;
    long double a = 0.0L;

    long double as_ld() const { return exact ? r.to_long_double() : a; }
    static NumValue from_rational(Rational v) { return NumValue{true, v, 0.0L}; }
    static NumValue from_ld(long double v) { return NumValue{false, Rational(), v}; }
};

struct EvalBailout {};  // division by zero, NaN, unsupported domain

NumValue eval(const Expr& e);

NumValue eval_binary(const Expr& e) {
    NumValue lhs = eval(*e.children[0]);
    NumValue rhs = eval(*e.children[1]);

    if (e.op == '^') {
        if (lhs.exact && rhs.exact && rhs.r.is_integer()) {
            try {
                return NumValue::from_rational(lhs.r.pow_int(static_cast<long long>(rhs.r.to_long_double())));
            } catch (const RationalOverflow&) {
            } catch (const RationalDivideByZero&) {
                throw EvalBailout{};
            }
        }
        long double v = std::pow(lhs.as_ld(), rhs.as_ld());
        if (!std::isfinite(v)) throw EvalBailout{};
        return NumValue::from_ld(v);
    }

    if (lhs.exact && rhs.exact) {
        try {
            switch (e.op) {
                case '+': return NumValue::from_rational(lhs.r + rhs.r);
                case '-': return NumValue::from_rational(lhs.r - rhs.r);
                case '*': return NumValue::from_rational(lhs.r * rhs.r);
                case '/': return NumValue::from_rational(lhs.r / rhs.r);
            }
        } catch (const RationalOverflow&) {
            // fall through to the approximate path
        } catch (const RationalDivideByZero&) {
            throw EvalBailout{};
        }
    }
    long double x = lhs.as_ld(), y = rhs.as_ld(), v = 0.0L;
    switch (e.op) {
        case '+': v = x + y; break;
        case '-': v = x - y; break;
        case '*': v = x * y; break;
        case '/':
            if (y == 0.0L) throw EvalBailout{};
            v = x / y;
            break;
    }
    if (!std::isfinite(v)) throw EvalBailout{};
    return NumValue::from_ld(v);
}

NumValue eval_call(const Expr& e) {
    NumValue arg = eval(*e.children[0]);
    long double x = arg.as_ld();
    if (e.degrees) x = x * std::acos(-1.0L) / 180.0L;
    long double v;
    if (e.name == "sin") v = std::sin(x);
    else if (e.name == "cos") v = std::cos(x);
    else if (e.name == "tan") v = std::tan(x);
    else if (e.name == "log") v = std::log10(x);
    else if (e.name == "ln") v = std::log(x);
    else if (e.name == "exp") v = std::exp(x);
    else throw EvalBailout{};
    if (!std::isfinite(v)) throw EvalBailout{};
    return NumValue::from_ld(v);
}

NumValue eval(const Expr& e) {
    switch (e.kind) {
        case ExprKind::number:
            return NumValue::from_rational(e.number);
        case ExprKind::constant:
            if (e.name == "pi") return NumValue::from_ld(std::acos(-1.0L));
            throw EvalBailout{};
        case ExprKind::negate: {
            NumValue v = eval(*e.children[0]);
            if (v.exact) {
                try {
                    return NumValue::from_rational(-v.r);
                } catch (const RationalOverflow&) {
                }
            }
            return NumValue::from_ld(-v.as_ld());
        }
        case ExprKind::binary:
            return eval_binary(e);
        case ExprKind::sqrt_of: {
            NumValue v = eval(*e.children[0]);
            if (v.exact) {
                if (auto root = v.r.exact_root(e.root_index)) return NumValue::from_rational(*root);
            }
            long double x = v.as_ld();
            long double r = e.root_index == 2 ? std::sqrt(x) : std::pow(x, 1.0L / e.root_index);
            if (!std::isfinite(r)) throw EvalBailout{};
            return NumValue::from_ld(r);
        }
        case ExprKind::call:
            return eval_call(e);
        case ExprKind::tuple:
            throw EvalBailout{};  // tuples handled a level up
    }
    throw EvalBailout{};
}

}  // namespace

CanonicalValue CanonicalValue::from_exact(Rational r) {
    CanonicalValue v;
    v.kind = Kind::exact;
    v.exact = r;
    return v;
}

CanonicalValue CanonicalValue::from_approx(long double a) {
    CanonicalValue v;
    v.kind = Kind::approx;
    v.approx = a;
    return v;
}

CanonicalValue CanonicalValue::from_text(std::string_view raw) {
    CanonicalValue v;
    v.kind = Kind::text;
    std::string stripped = strip_answer_decorations(raw);
    v.text = text::normalize_ws(stripped);
    return v;
}

std::string CanonicalValue::describe() const {
    switch (kind) {
        case Kind::exact: return "exact:" + exact.str();
        case Kind::approx: return "approx:" + std::to_string(static_cast<double>(approx));
        case Kind::text: return "text:" + text;
        case Kind::tuple: {
            std::string out = "tuple:(";
            for (size_t i = 0; i < elements.size(); ++i) {
                if (i) out += ", ";
                out += elements[i].describe();
            }
            return out + ")";
        }
    }
    return "?";
}

CanonicalValue canonicalize(std::string_view raw) {
    ParseResult parsed = parse_expression(raw);
    if (!parsed.expr) return CanonicalValue::from_text(raw);

    const Expr& root = *parsed.expr;
    auto eval_scalar = [&](const Expr& e) -> CanonicalValue {
        try {
            NumValue v = eval(e);
            return v.exact ? CanonicalValue::from_exact(v.r) : CanonicalValue::from_approx(v.a);
        } catch (const EvalBailout&) {
            return CanonicalValue::from_text(render_expression(e));
        } catch (const RationalOverflow&) {
            return CanonicalValue::from_text(render_expression(e));
        } catch (const RationalDivideByZero&) {
            return CanonicalValue::from_text(render_expression(e));
        }
    };

    if (root.kind == ExprKind::tuple) {
        CanonicalValue tup;
        tup.kind = CanonicalValue::Kind::tuple;
        for (const auto& child : root.children) tup.elements.push_back(eval_scalar(*child));
        return tup;
    }
    return eval_scalar(root);
}

bool equivalent_values(const CanonicalValue& a, const CanonicalValue& b, const Tolerances& tol) {
    using Kind = CanonicalValue::Kind;
    if (a.kind == Kind::tuple || b.kind == Kind::tuple) {
        if (a.kind != Kind::tuple || b.kind != Kind::tuple) return false;
        if (a.elements.size() != b.elements.size()) return false;
        for (size_t i = 0; i < a.elements.size(); ++i)
            if (!equivalent_values(a.elements[i], b.elements[i], tol)) return false;
        return true;
    }
    if (a.kind == Kind::text || b.kind == Kind::text) {
        if (a.kind != Kind::text || b.kind != Kind::text) return false;
        return a.text == b.text;
    }
    if (a.kind == Kind::exact && b.kind == Kind::exact) return a.exact == b.exact;

    long double x = a.numeric();
    long double y = b.numeric();
    long double bound = std::max(static_cast<long double>(tol.abs_tol),
                                 static_cast<long double>(tol.rel_tol) * std::fabs(y));
    return std::fabs(x - y) <= bound;
}

bool equivalent(std::string_view a, std::string_view b, double rel_tol, double abs_tol) {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
    Tolerances tol{rel_tol, abs_tol};
    return equivalent_values(canonicalize(a), canonicalize(b), tol);
}

}  // namespace kpforge::mathexpr
