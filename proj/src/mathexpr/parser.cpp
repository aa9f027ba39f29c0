#include "mathexpr/parser.hpp"

#include <cctype>
#include <map>

#include "util/text.hpp"

namespace kpforge::mathexpr {

namespace {

enum class Tok {
    number,
    op,         // + - * / ^
    lparen,     // ( or [
    rparen,     // ) or ]
    lbrace,
    rbrace,
    separator,  // , or ;
    frac,
    sqrt_tok,
    call,       // \sin etc.
    constant,   // pi
    percent,
    degree,     // ^\circ or °
    end,
};

struct Token {
    Tok kind;
    char ch = 0;           // op character
    std::string text;      // call/constant name
    std::string intpart;   // number
    std::string fracpart;
};

struct LexError {
    std::string message;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::end) break;
        }
        return out;
    }

private:
    std::string_view src_;
    size_t pos_ = 0;

    bool eof() const { return pos_ >= src_.size(); }
    char peek(size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void skip_space() {
        while (!eof()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '~') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    bool try_consume(std::string_view word) {
        if (src_.substr(pos_, word.size()) == word) {
            pos_ += word.size();
            return true;
        }
        return false;
    }

    // Skips a balanced {...} group, used for \text{...} style content.
    void skip_braced_group() {
        skip_space();
        if (peek() != '{') return;
        int depth = 0;
        while (!eof()) {
            char c = src_[pos_++];
            if (c == '{') ++depth;
            if (c == '}' && --depth == 0) return;
        }
        throw LexError{"unterminated brace group"};
    }

    Token lex_number() {
        Token t{Tok::number};
        auto read_digits = [&](std::string& into) {
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) into.push_back(src_[pos_++]);
        };
        read_digits(t.intpart);
        // Digit-group commas: absorbed only in a strict 3-digit-group pattern
        // ("1,000"); otherwise the comma stays a tuple separator.
        while (!t.intpart.empty() && peek() == ',' && std::isdigit(static_cast<unsigned char>(peek(1))) &&
               std::isdigit(static_cast<unsigned char>(peek(2))) && std::isdigit(static_cast<unsigned char>(peek(3))) &&
               !std::isdigit(static_cast<unsigned char>(peek(4)))) {
            pos_ += 1;  // comma
            t.intpart.append(src_.substr(pos_, 3));
            pos_ += 3;
        }
        if (peek() == '.' && (std::isdigit(static_cast<unsigned char>(peek(1))) || !t.intpart.empty())) {
            ++pos_;
            read_digits(t.fracpart);
        }
        if (t.intpart.empty() && t.fracpart.empty()) throw LexError{"expected digits"};
        return t;
    }

    Token lex_command() {
        ++pos_;  // backslash
        if (eof()) throw LexError{"dangling backslash"};
        // one-character commands
        char c = peek();
        if (!std::isalpha(static_cast<unsigned char>(c))) {
            ++pos_;
            if (c == '%') return Token{Tok::percent};
            if (c == '!' || c == ',' || c == ';' || c == ':' || c == ' ') return next();
            if (c == '{' || c == '}') throw LexError{"literal brace in expression"};
            throw LexError{std::string("unknown command \\") + c};
        }
        std::string name;
        while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) name.push_back(src_[pos_++]);

        if (name == "frac" || name == "dfrac" || name == "tfrac") return Token{Tok::frac};
        if (name == "sqrt") return Token{Tok::sqrt_tok};
        if (name == "pi") return Token{Tok::constant, 0, "pi"};
        if (name == "cdot" || name == "times") return Token{Tok::op, '*'};
        if (name == "div") return Token{Tok::op, '/'};
        if (name == "left" || name == "right" || name == "displaystyle" || name == "quad" || name == "qquad")
            return next();
        if (name == "text" || name == "mbox" || name == "mathrm" || name == "textbf" || name == "operatorname") {
            skip_braced_group();
            return next();
        }
        if (name == "sin" || name == "cos" || name == "tan" || name == "log" || name == "ln" ||
            name == "exp")
            return Token{Tok::call, 0, name};
        throw LexError{"unknown command \\" + name};
    }

    Token next() {
        skip_space();
        if (eof()) return Token{Tok::end};
        char c = peek();

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
            return lex_number();
        if (c == '\\') return lex_command();

        // UTF-8 degree sign U+00B0
        if (static_cast<unsigned char>(c) == 0xC2 && static_cast<unsigned char>(peek(1)) == 0xB0) {
            pos_ += 2;
            return Token{Tok::degree};
        }

        switch (c) {
            case '+': case '-': case '*': case '/':
                ++pos_;
                return Token{Tok::op, c};
            case '^': {
                // ^\circ and ^{\circ} are degree decorations, not powers
                size_t save = pos_;
                ++pos_;
                skip_space();
                if (try_consume("\\circ")) return Token{Tok::degree};
                if (try_consume("{\\circ}")) return Token{Tok::degree};
                pos_ = save + 1;
                return Token{Tok::op, '^'};
            }
            case '(': case '[':
                ++pos_;
                return Token{Tok::lparen};
            case ')': case ']':
                ++pos_;
                return Token{Tok::rparen};
            case '{':
                ++pos_;
                return Token{Tok::lbrace};
            case '}':
                ++pos_;
                return Token{Tok::rbrace};
            case ',': case ';':
                ++pos_;
                return Token{Tok::separator, c};
            case '%':
                ++pos_;
                return Token{Tok::percent};
            default:
                break;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string word;
            while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) word.push_back(src_[pos_++]);
            if (word == "pi" || word == "Pi") return Token{Tok::constant, 0, "pi"};
            throw LexError{"unexpected word '" + word + "'"};
        }
        throw LexError{std::string("unexpected character '") + c + "'"};
    }
};

struct ParseError {
    std::string message;
};

ExprPtr make_number(Rational r) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::number;
    e->number = r;
    return e;
}

ExprPtr make_binary(char op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::binary;
    e->op = op;
    e->children.push_back(std::move(lhs));
    e->children.push_back(std::move(rhs));
    return e;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ExprPtr run() {
        ExprPtr e = parse_tuple();
        expect(Tok::end, "trailing input");
        return e;
    }

private:
    std::vector<Token> toks_;
    size_t at_ = 0;

    const Token& cur() const { return toks_[at_]; }
    void advance() { if (at_ + 1 < toks_.size()) ++at_; }
    bool accept(Tok k) {
        if (cur().kind == k) {
            advance();
            return true;
        }
        return false;
    }
    void expect(Tok k, const char* what) {
        if (cur().kind != k) throw ParseError{std::string("expected ") + what};
        advance();
    }

    ExprPtr parse_tuple() {
        ExprPtr first = parse_expr();
        if (cur().kind != Tok::separator) return first;
        auto tup = std::make_unique<Expr>();
        tup->kind = ExprKind::tuple;
        tup->children.push_back(std::move(first));
        while (accept(Tok::separator)) tup->children.push_back(parse_expr());
        return tup;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (cur().kind == Tok::op && (cur().ch == '+' || cur().ch == '-')) {
            char op = cur().ch;
            advance();
            lhs = make_binary(op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    bool starts_factor() const {
        switch (cur().kind) {
            case Tok::number:
            case Tok::frac:
            case Tok::sqrt_tok:
            case Tok::call:
            case Tok::constant:
            case Tok::lparen:
            case Tok::lbrace:
                return true;
            default:
                return false;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        while (true) {
            if (cur().kind == Tok::op && (cur().ch == '*' || cur().ch == '/')) {
                char op = cur().ch;
                advance();
                lhs = make_binary(op, std::move(lhs), parse_unary());
            } else if (starts_factor()) {
                // implicit multiplication: "2\sqrt{3}", "13(1/4)"
                lhs = make_binary('*', std::move(lhs), parse_unary());
            } else {
                break;
            }
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        int minuses = 0;
        while (cur().kind == Tok::op && (cur().ch == '-' || cur().ch == '+')) {
            if (cur().ch == '-') ++minuses;
            advance();
        }
        ExprPtr e = parse_postfix();
        if (minuses % 2 == 1) {
            auto neg = std::make_unique<Expr>();
            neg->kind = ExprKind::negate;
            neg->children.push_back(std::move(e));
            e = std::move(neg);
        }
        return e;
    }

    // power, then degree/percent decorations
    ExprPtr parse_postfix() {
        auto [e, deg] = parse_power();
        (void)deg;  // degree decoration at value position strips to the value
        while (cur().kind == Tok::percent) {
            advance();
            e = make_binary('/', std::move(e), make_number(Rational(100)));
        }
        while (cur().kind == Tok::degree) advance();
        return e;
    }

    std::pair<ExprPtr, bool> parse_power() {
        ExprPtr base = parse_primary();
        bool deg = false;
        if (cur().kind == Tok::degree) {
            advance();
            deg = true;
        }
        if (cur().kind == Tok::op && cur().ch == '^') {
            advance();
            ExprPtr exponent = parse_unary_primary();
            base = make_binary('^', std::move(base), std::move(exponent));
            if (cur().kind == Tok::degree) {
                advance();
                deg = true;
            }
        }
        return {std::move(base), deg};
    }

    // exponent position: sign + primary (no implicit multiplication chains)
    ExprPtr parse_unary_primary() {
        int minuses = 0;
        while (cur().kind == Tok::op && (cur().ch == '-' || cur().ch == '+')) {
            if (cur().ch == '-') ++minuses;
            advance();
        }
        ExprPtr e = parse_primary();
        if (minuses % 2 == 1) {
            auto neg = std::make_unique<Expr>();
            neg->kind = ExprKind::negate;
            neg->children.push_back(std::move(e));
            e = std::move(neg);
        }
        return e;
    }

    ExprPtr parse_primary() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::number: {
                auto r = Rational::parse_decimal(t.intpart, t.fracpart);
                if (!r) throw ParseError{"numeric literal too large"};
                advance();
                return make_number(*r);
            }
            case Tok::constant: {
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::constant;
                e->name = t.text;
                advance();
                return e;
            }
            case Tok::frac: {
                advance();
                expect(Tok::lbrace, "{ after \\frac");
                ExprPtr num = parse_expr();
                expect(Tok::rbrace, "} in \\frac");
                expect(Tok::lbrace, "{ after \\frac numerator");
                ExprPtr den = parse_expr();
                expect(Tok::rbrace, "} in \\frac");
                return make_binary('/', std::move(num), std::move(den));
            }
            case Tok::sqrt_tok: {
                advance();
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::sqrt_of;
                e->root_index = 2;
                if (accept(Tok::lparen)) {  // \sqrt[3]{8}: '[' lexes as lparen
                    ExprPtr idx = parse_expr();
                    expect(Tok::rparen, "] after root index");
                    if (idx->kind != ExprKind::number || !idx->number.is_integer())
                        throw ParseError{"root index must be an integer"};
                    e->root_index = static_cast<int>(idx->number.to_long_double());
                    if (e->root_index < 2 || e->root_index > 64) throw ParseError{"unsupported root index"};
                }
                expect(Tok::lbrace, "{ after \\sqrt");
                e->children.push_back(parse_expr());
                expect(Tok::rbrace, "} in \\sqrt");
                return e;
            }
            case Tok::call: {
                std::string name = t.text;
                advance();
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::call;
                e->name = name;
                if (accept(Tok::lparen)) {
                    auto [arg, deg] = parse_power_in_group();
                    expect(Tok::rparen, ") after function argument");
                    e->degrees = deg;
                    e->children.push_back(std::move(arg));
                } else if (accept(Tok::lbrace)) {
                    auto [arg, deg] = parse_power_in_group();
                    expect(Tok::rbrace, "} after function argument");
                    e->degrees = deg;
                    e->children.push_back(std::move(arg));
                } else {
                    auto [arg, deg] = parse_power();
                    e->degrees = deg;
                    e->children.push_back(std::move(arg));
                }
                return e;
            }
            case Tok::lparen: {
                advance();
                ExprPtr inner = parse_tuple();
                expect(Tok::rparen, "closing parenthesis");
                return inner;
            }
            case Tok::lbrace: {
                advance();
                ExprPtr inner = parse_expr();
                expect(Tok::rbrace, "closing brace");
                return inner;
            }
            default:
                throw ParseError{"expected a value"};
        }
    }

    // function argument: full expression, reporting any degree mark
    std::pair<ExprPtr, bool> parse_power_in_group() {
        ExprPtr e = parse_expr();
        bool deg = false;
        while (cur().kind == Tok::degree) {
            advance();
            deg = true;
        }
        return {std::move(e), deg};
    }
};

}  // namespace

std::string strip_answer_decorations(std::string_view raw) {
    std::string s = text::trim(raw);
    auto strip_wrap = [&](std::string_view open, std::string_view close) {
        while (s.size() >= open.size() + close.size() && text::starts_with(s, open) &&
               s.ends_with(close)) {
            s = text::trim(std::string_view(s).substr(open.size(), s.size() - open.size() - close.size()));
        }
    };
    strip_wrap("$$", "$$");
    strip_wrap("$", "$");
    strip_wrap("\\(", "\\)");
    strip_wrap("\\[", "\\]");
    // trailing sentence punctuation; "3." becomes "3", "3.25" is untouched
    while (!s.empty() && (s.back() == '.' || s.back() == ';' || s.back() == ':' || s.back() == '!' ||
                          s.back() == ',')) {
        s.pop_back();
        s = text::trim(s);
    }
    return s;
}

ParseResult parse_expression(std::string_view raw) {
    ParseResult result;
    std::string cleaned = strip_answer_decorations(raw);
    if (cleaned.empty()) {
        result.diagnostic = "empty after trimming decorations";
        return result;
    }
    try {
        Parser parser(Lexer(cleaned).run());
        result.expr = parser.run();
    } catch (const LexError& e) {
        result.diagnostic = e.message;
    } catch (const ParseError& e) {
        result.diagnostic = e.message;
    }
    return result;
}

std::string render_expression(const Expr& e) {
    switch (e.kind) {
        case ExprKind::number:
            return e.number.den() == 1 ? e.number.str() : "\\frac{" + Rational::make(e.number.num(), 1).str() +
                                                              "}{" + Rational::make(e.number.den(), 1).str() + "}";
        case ExprKind::constant:
            return "\\" + e.name;
        case ExprKind::negate:
            return "-(" + render_expression(*e.children[0]) + ")";
        case ExprKind::binary: {
            std::string lhs = render_expression(*e.children[0]);
            std::string rhs = render_expression(*e.children[1]);
            if (e.op == '/') return "\\frac{" + lhs + "}{" + rhs + "}";
            if (e.op == '^') return "(" + lhs + ")^{" + rhs + "}";
            return "(" + lhs + " " + std::string(1, e.op) + " " + rhs + ")";
        }
        case ExprKind::sqrt_of:
            if (e.root_index == 2) return "\\sqrt{" + render_expression(*e.children[0]) + "}";
            return "\\sqrt[" + std::to_string(e.root_index) + "]{" + render_expression(*e.children[0]) + "}";
        case ExprKind::call:
            return "\\" + e.name + "(" + render_expression(*e.children[0]) + (e.degrees ? "^\\circ" : "") + ")";
        case ExprKind::tuple: {
            std::string out;
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += ", ";
                out += render_expression(*e.children[i]);
            }
            return out;
        }
    }
    return "";
}

}  // namespace kpforge::mathexpr
