#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mathexpr/rational.hpp"

namespace kpforge::mathexpr {

// AST over the LaTeX subset the answer corpora use:
//   integer/decimal literals, \frac and /, \sqrt with optional index,
//   named constants (pi), unary minus, + - * / ^, tuples (comma/semicolon),
//   percent suffix, function application for trig/log forms.
// Degree marks (^\circ) and digit-group commas are handled during lexing.
struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind {
    number,    // exact rational literal
    constant,  // named constant: "pi", "e"
    negate,
    binary,    // + - * / ^
    sqrt_of,   // radical with index (2 = square root)
    call,      // function application: sin, cos, tan, log, ln, exp, abs
    tuple,
};

struct Expr {
    ExprKind kind;
    Rational number;                 // number
    std::string name;                // constant/call
    char op = 0;                     // binary: '+', '-', '*', '/', '^'
    int root_index = 2;              // sqrt_of
    bool degrees = false;            // call argument carried a degree mark
    std::vector<ExprPtr> children;   // operands / elements
};

struct ParseResult {
    ExprPtr expr;                    // null when the input did not parse
    std::string diagnostic;          // non-empty when expr is null
};

// Parses the trimmed raw answer string. Never throws: unparseable input
// yields a null expr plus a diagnostic, and callers degrade to a text atom.
ParseResult parse_expression(std::string_view raw);

// Re-renders an AST to a string the parser accepts; used by round-trip
// property tests and diagnostics.
std::string render_expression(const Expr& e);

// Strips '$'/'\(' wrappers, trailing punctuation and surrounding whitespace.
std::string strip_answer_decorations(std::string_view raw);

}  // namespace kpforge::mathexpr
