#include "mathexpr/answers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

#include "util/errors.hpp"
#include "util/text.hpp"

namespace kpforge::mathexpr {

namespace {

constexpr std::string_view kAnswerMarker = "The answer is:";

// Last non-empty line, if it carries the terminal answer marker.
std::vector<std::string> terminal_answer_items(std::string_view solution) {
    size_t end = solution.size();
    while (end > 0) {
        size_t start = solution.rfind('\n', end - 1);
        size_t line_begin = (start == std::string_view::npos) ? 0 : start + 1;
        std::string line = text::trim(solution.substr(line_begin, end - line_begin));
        if (!line.empty()) {
            size_t at = line.find(kAnswerMarker);
            if (at == std::string::npos) return {};
            std::string rest = line.substr(at + kAnswerMarker.size());
            std::vector<std::string> items;
            for (const auto& piece : text::split(rest, ';')) {
                std::string t = text::trim(piece);
                if (!t.empty()) items.push_back(t);
            }
            return items;
        }
        if (start == std::string_view::npos) break;
        end = start;
    }
    return {};
}

}  // namespace

std::vector<std::string> extract_boxed(std::string_view solution) {
    auto terminal = terminal_answer_items(solution);
    if (!terminal.empty()) return terminal;

    std::vector<std::string> bodies;
    constexpr std::string_view kBoxed = "\\boxed{";
    size_t pos = 0;
    while ((pos = solution.find(kBoxed, pos)) != std::string_view::npos) {
        size_t i = pos + kBoxed.size();
        int depth = 1;
        std::string body;
        while (i < solution.size() && depth > 0) {
            char c = solution[i];
            if (c == '\\' && i + 1 < solution.size() && (solution[i + 1] == '{' || solution[i + 1] == '}')) {
                body.push_back(c);
                body.push_back(solution[i + 1]);
                i += 2;
                continue;
            }
            if (c == '{') ++depth;
            if (c == '}') {
                --depth;
                if (depth == 0) break;
            }
            body.push_back(c);
            ++i;
        }
        if (depth != 0) throw UnbalancedBraces("\\boxed{ at byte " + std::to_string(pos) + " never closes");
        bodies.push_back(text::trim(body));
        pos = i + 1;
    }
    return bodies;
}

AnswerSet extract_answers(std::string_view solution) {
    AnswerSet set;
    std::vector<std::string> raws;
    try {
        raws = extract_boxed(solution);
    } catch (const UnbalancedBraces&) {
        return set;  // malformed completion: counts as no extractable answers
    }
    for (auto& raw : raws) {
        Answer a;
        a.raw = raw;
        a.value = canonicalize(raw);
        a.parse_ok = a.value.kind != CanonicalValue::Kind::text;
        set.answers.push_back(std::move(a));
    }
    return set;
}

namespace {

bool is_math_char(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    switch (c) {
        case '+': case '-': case '*': case '/': case '^': case '\\':
        case '{': case '}': case '(': case ')': case '.': case ',':
        case '%': case ' ': case '[': case ']':
            return true;
        default:
            return false;
    }
}

// Unwrap a \boxed{…} wrapper so "=\boxed{3.25}" verifies against 3.25.
std::string unwrap_boxed(const std::string& s) {
    size_t at = s.find("\\boxed{");
    if (at == std::string::npos) return s;
    size_t i = at + 7;
    int depth = 1;
    std::string body;
    while (i < s.size() && depth > 0) {
        char c = s[i++];
        if (c == '{') ++depth;
        if (c == '}') {
            if (--depth == 0) break;
        }
        body.push_back(c);
    }
    return depth == 0 ? body : s;
}

std::optional<CanonicalValue> numeric_value(const std::string& s) {
    CanonicalValue v = canonicalize(unwrap_boxed(s));
    if (v.is_numeric()) return v;
    return std::nullopt;
}

bool numbers_agree(const CanonicalValue& lv, const CanonicalValue& rv) {
    if (lv.kind == CanonicalValue::Kind::exact && rv.kind == CanonicalValue::Kind::exact)
        return lv.exact == rv.exact;
    return std::fabs(lv.numeric() - rv.numeric()) <= 1e-9L;
}

std::string join_words(const std::vector<std::string>& words, size_t begin, size_t end) {
    std::string out;
    for (size_t i = begin; i < end; ++i) {
        if (!out.empty()) out += ' ';
        out += words[i];
    }
    return out;
}

}  // namespace

// Prose often adjoins equations ("ran 4+9=13 blocks"), so each side is tried
// at several word boundaries: if any reading balances numerically the check
// holds; otherwise the widest numeric reading is reported as failing.
std::vector<ArithmeticCheck> verify_arithmetic(std::string_view solution) {
    std::vector<ArithmeticCheck> checks;
    constexpr size_t kMaxSideWords = 8;

    for (size_t pos = 0; pos < solution.size(); ++pos) {
        if (solution[pos] != '=') continue;
        if (pos > 0 && (solution[pos - 1] == '!' || solution[pos - 1] == '<' || solution[pos - 1] == '>' ||
                        solution[pos - 1] == '='))
            continue;
        if (pos + 1 < solution.size() && solution[pos + 1] == '=') continue;

        size_t lhs_begin = pos;
        while (lhs_begin > 0 && is_math_char(solution[lhs_begin - 1]) && solution[lhs_begin - 1] != '=')
            --lhs_begin;
        size_t rhs_end = pos + 1;
        while (rhs_end < solution.size() && is_math_char(solution[rhs_end]) && solution[rhs_end] != '=')
            ++rhs_end;

        auto lhs_words = text::split_words(solution.substr(lhs_begin, pos - lhs_begin));
        auto rhs_words = text::split_words(solution.substr(pos + 1, rhs_end - pos - 1));
        if (lhs_words.empty() || rhs_words.empty()) continue;
        size_t lhs_lo = lhs_words.size() > kMaxSideWords ? lhs_words.size() - kMaxSideWords : 0;
        size_t rhs_hi = std::min(rhs_words.size(), kMaxSideWords);

        struct Reading {
            std::string lhs, rhs;
            CanonicalValue lv, rv;
        };
        std::optional<Reading> widest;
        std::optional<Reading> holding;

        for (size_t ls = lhs_lo; ls < lhs_words.size() && !holding; ++ls) {
            std::string lhs = join_words(lhs_words, ls, lhs_words.size());
            auto lv = numeric_value(lhs);
            if (!lv) continue;
            for (size_t re = rhs_hi; re >= 1; --re) {
                std::string rhs = join_words(rhs_words, 0, re);
                auto rv = numeric_value(rhs);
                if (!rv) continue;
                if (!widest) widest = Reading{lhs, rhs, *lv, *rv};
                if (numbers_agree(*lv, *rv)) {
                    holding = Reading{lhs, rhs, *lv, *rv};
                    break;
                }
            }
        }

        const auto& pick = holding ? holding : widest;
        if (!pick) continue;
        checks.push_back(ArithmeticCheck{pick->lhs + "=" + pick->rhs, holding.has_value()});
    }
    return checks;
}

bool grade(std::string_view prediction, const AnswerSet& gold, const Tolerances& tol) {
    if (gold.empty()) throw std::invalid_argument("grade: gold answer set is empty");
    AnswerSet pred = extract_answers(prediction);
    if (pred.size() < gold.size()) return false;
    size_t offset = pred.size() - gold.size();
    for (size_t i = 0; i < gold.size(); ++i) {
        if (!equivalent_values(pred.answers[offset + i].value, gold.answers[i].value, tol)) return false;
    }
    return true;
}

}  // namespace kpforge::mathexpr
