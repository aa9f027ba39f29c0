#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mathexpr/eval.hpp"

namespace kpforge::mathexpr {

// One extracted sub-answer: the raw string, its canonical value, and whether
// the grammar handled it (false = text-atom fallback).
struct Answer {
    std::string raw;
    CanonicalValue value;
    bool parse_ok = false;
};

struct AnswerSet {
    std::vector<Answer> answers;

    bool empty() const { return answers.empty(); }
    size_t size() const { return answers.size(); }
};

// All \boxed{…} bodies via balanced-brace scanning. When a terminal
// "The answer is:" line exists, its semicolon-separated items take precedence
// as the per-sub-question list. Throws UnbalancedBraces on a dangling box.
std::vector<std::string> extract_boxed(std::string_view solution);

AnswerSet extract_answers(std::string_view solution);

// Equational fragments `LHS = RHS` where both sides evaluate numerically.
// Exact rational arithmetic where possible, tolerance 1e-9 otherwise.
struct ArithmeticCheck {
    std::string expression;  // "4+9=13"
    bool holds = false;
};
std::vector<ArithmeticCheck> verify_arithmetic(std::string_view solution);

// PASS@1 grading: extract answers from the prediction and require every gold
// sub-answer to be matched in order (the last |gold| predictions are used
// when the prediction boxes intermediate values too).
bool grade(std::string_view prediction, const AnswerSet& gold, const Tolerances& tol = {});

}  // namespace kpforge::mathexpr
