#include "covar/parser.hpp"

#include <cctype>
#include <vector>

namespace covar {

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

const char* const kSymbols[] = {":=", "==", "!=", "<>", "<=", ">=", "&&", "||", "∞", ";", "{", "}", "[", "]", "(", ")",
                                "+",  "-",  "*",  "/",  "^",  "%",  "<",  ">",  "=",  "!"};

bool ident_start(unsigned char c) { return std::isalpha(c) != 0 || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) != 0 || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    std::size_t col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        auto c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c) != 0) {
            advance(1);
            continue;
        }
        if (c == '#' || src.substr(i, 2) == "//") {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        std::size_t l = line;
        std::size_t cl = col;
        if (src.substr(i, 2) == "τ") {
            out.push_back({Tok::Ident, "τ", l, cl});
            advance(2);
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(c) != 0 || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])) != 0)) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])) != 0) {
                ++j;
            }
            if (j < src.size() && src[j] == '.') {
                ++j;
                if (j >= src.size() || std::isdigit(static_cast<unsigned char>(src[j])) == 0) {
                    throw ParseError("malformed decimal literal", l, cl);
                }
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])) != 0) {
                    ++j;
                }
            }
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const char* sym : kSymbols) {
            std::string_view s(sym);
            if (src.substr(i, s.size()) == s) {
                out.push_back({Tok::Symbol, std::string(s), l, cl});
                advance(s.size());
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw ParseError("unexpected character '" + std::string(1, src[i]) + "'", l, cl);
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
  public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    Program program() {
        Program p = sequence();
        expect_end();
        return p;
    }

    Expectation expectation() {
        Expectation f = eexp();
        expect_end();
        return f;
    }

    Arith arith_only() {
        Arith e = aexp();
        expect_end();
        return e;
    }

    Bool bool_only() {
        Bool b = bexp();
        expect_end();
        return b;
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    bool in_program_ = false;

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool at_symbol(std::string_view s, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Symbol && peek(ahead).text == s;
    }
    bool at_keyword(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(what + ", found " + found, t.line, t.column);
    }

    void expect_symbol(std::string_view s) {
        if (!at_symbol(s)) {
            fail("expected '" + std::string(s) + "'");
        }
        take();
    }

    void expect_keyword(std::string_view s) {
        if (!at_keyword(s)) {
            fail("expected '" + std::string(s) + "'");
        }
        take();
    }

    void expect_end() {
        if (peek().kind != Tok::End) {
            fail("expected end of input");
        }
    }

    static bool is_keyword(const std::string& s) {
        static const char* const kw[] = {"skip", "empty", "diverge", "halt",  "if",  "else",     "while", "observe",
                                         "true", "false", "odd",     "even",  "inf", "infinity", "mod"};
        for (const char* k : kw) {
            if (s == k) {
                return true;
            }
        }
        return false;
    }

    // ---- programs

    Program sequence() {
        Program first = statement();
        if (at_symbol(";")) {
            take();
            if (at_symbol("}") || peek().kind == Tok::End) {
                return first;
            }
            return Program::seq(first, sequence());
        }
        return first;
    }

    Program braced() {
        expect_symbol("{");
        Program p = sequence();
        expect_symbol("}");
        return p;
    }

    Program statement() {
        in_program_ = true;
        const Token& t = peek();
        if (t.kind == Tok::Ident) {
            if (t.text == "skip") {
                take();
                return Program::skip();
            }
            if (t.text == "empty") {
                take();
                return Program::empty_stmt();
            }
            if (t.text == "diverge") {
                take();
                return Program::diverge();
            }
            if (t.text == "halt") {
                take();
                return Program::halt();
            }
            if (t.text == "if") {
                take();
                expect_symbol("(");
                Bool g = bexp();
                expect_symbol(")");
                Program then_branch = braced();
                Program else_branch = Program::empty_stmt();
                if (at_keyword("else")) {
                    take();
                    else_branch = braced();
                }
                return Program::ite(g, then_branch, else_branch);
            }
            if (t.text == "while") {
                take();
                expect_symbol("(");
                Bool g = bexp();
                expect_symbol(")");
                return Program::loop(g, braced());
            }
            if (t.text == "observe") {
                take();
                expect_symbol("(");
                Bool g = bexp();
                expect_symbol(")");
                return Program::observe(g);
            }
            if (is_keyword(t.text)) {
                fail("expected a statement");
            }
            Token name = take();
            if (is_reserved_name(name.text)) {
                throw ParseError("'" + name.text + "' is reserved for the run-time and cannot be a program variable",
                                 name.line, name.column);
            }
            expect_symbol(":=");
            return Program::assign(name.text, aexp());
        }
        if (at_symbol("{")) {
            Program left = braced();
            expect_symbol("[");
            const Token& pt = peek();
            Rational p = probability();
            if (p < 0 || p > 1) {
                throw ParseError("probability " + to_string(p) + " outside [0,1]", pt.line, pt.column);
            }
            expect_symbol("]");
            Program right = braced();
            return Program::pchoice(left, p, right);
        }
        fail("expected a statement");
    }

    Rational probability() {
        if (at_symbol("-")) {
            const Token& t = peek();
            take();
            Rational q = number_literal();
            throw ParseError("probability -" + to_string(q) + " outside [0,1]", t.line, t.column);
        }
        if (peek().kind != Tok::Number) {
            fail("expected a probability literal");
        }
        return number_literal();
    }

    // NUMBER ('/' NUMBER)?
    Rational number_literal() {
        if (peek().kind != Tok::Number) {
            fail("expected a number");
        }
        Token num = take();
        if (at_symbol("/") && peek(1).kind == Tok::Number) {
            take();
            Token den = take();
            if (num.text.find('.') != std::string::npos || den.text.find('.') != std::string::npos) {
                throw ParseError("fractions must use integer numerator and denominator", num.line, num.column);
            }
            try {
                return parse_rational(num.text + "/" + den.text);
            } catch (const DomainError& e) {
                throw ParseError(e.what(), den.line, den.column);
            }
        }
        return parse_rational(num.text);
    }

    // ---- arithmetic

    Arith aexp() {
        Arith lhs = aterm();
        while (at_symbol("+") || at_symbol("-")) {
            ArithKind k = take().text == "+" ? ArithKind::Add : ArithKind::Sub;
            lhs = Arith::binary(k, lhs, aterm());
        }
        return lhs;
    }

    Arith aterm() {
        Arith lhs = aunary();
        while (at_symbol("*") || at_symbol("%") || at_keyword("mod")) {
            ArithKind k = take().text == "*" ? ArithKind::Mul : ArithKind::Mod;
            lhs = Arith::binary(k, lhs, aunary());
        }
        if (at_symbol("/")) {
            fail("division is not part of the expression language");
        }
        return lhs;
    }

    Arith aunary() {
        if (at_symbol("-")) {
            take();
            return Arith::negate(aunary());
        }
        Arith base = aatom();
        if (at_symbol("^")) {
            take();
            return Arith::power(base, aunary());
        }
        return base;
    }

    Arith aatom() {
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            return Arith::literal(number_literal());
        }
        if (t.kind == Tok::Ident && !is_keyword(t.text)) {
            Token name = take();
            if (in_program_ && is_reserved_name(name.text)) {
                throw ParseError("'" + name.text + "' is reserved for the run-time and cannot be read by programs",
                                 name.line, name.column);
            }
            return Arith::variable(name.text == "τ" ? std::string(kTau) : name.text);
        }
        if (at_symbol("(")) {
            take();
            Arith e = aexp();
            expect_symbol(")");
            return e;
        }
        fail("expected an arithmetic expression");
    }

    // ---- Boolean

    Bool bexp() {
        Bool lhs = bconj();
        while (at_symbol("||")) {
            take();
            lhs = Bool::disj(lhs, bconj());
        }
        return lhs;
    }

    Bool bconj() {
        Bool lhs = bunary();
        while (at_symbol("&&")) {
            take();
            lhs = Bool::conj(lhs, bunary());
        }
        return lhs;
    }

    Bool bunary() {
        if (at_symbol("!")) {
            take();
            return Bool::negate(bunary());
        }
        return batom();
    }

    static bool is_cmp(const Token& t) {
        if (t.kind != Tok::Symbol) {
            return false;
        }
        const auto& s = t.text;
        return s == "=" || s == "==" || s == "!=" || s == "<>" || s == "<" || s == "<=" || s == ">" || s == ">=";
    }

    bool at_arith_continuation() const {
        if (is_cmp(peek())) {
            return true;
        }
        if (peek().kind == Tok::Symbol) {
            const auto& s = peek().text;
            return s == "+" || s == "-" || s == "*" || s == "%" || s == "^" || s == "/";
        }
        return at_keyword("mod");
    }

    Bool batom() {
        if (at_keyword("true")) {
            take();
            return Bool::constant(true);
        }
        if (at_keyword("false")) {
            take();
            return Bool::constant(false);
        }
        if (at_keyword("odd") || at_keyword("even")) {
            bool odd = take().text == "odd";
            expect_symbol("(");
            Arith e = aexp();
            expect_symbol(")");
            return odd ? Bool::odd(e) : Bool::even(e);
        }
        if (at_symbol("(")) {
            std::size_t saved = pos_;
            try {
                take();
                Bool b = bexp();
                expect_symbol(")");
                if (!at_arith_continuation()) {
                    return b;
                }
            } catch (const ParseError&) {
            }
            pos_ = saved;
        }
        Arith lhs = aexp();
        if (!is_cmp(peek())) {
            fail("expected a comparison operator");
        }
        std::string op = take().text;
        Arith rhs = aexp();
        CmpOp c = CmpOp::Eq;
        if (op == "!=" || op == "<>") {
            c = CmpOp::Ne;
        } else if (op == "<") {
            c = CmpOp::Lt;
        } else if (op == "<=") {
            c = CmpOp::Le;
        } else if (op == ">") {
            c = CmpOp::Gt;
        } else if (op == ">=") {
            c = CmpOp::Ge;
        }
        return Bool::compare(c, lhs, rhs);
    }

    // ---- expectations

    Expectation eexp() {
        Expectation lhs = eterm();
        while (at_symbol("+")) {
            take();
            lhs = lhs + eterm();
        }
        if (at_symbol("-")) {
            fail("subtraction is not allowed in expectations");
        }
        return lhs;
    }

    Expectation eterm() {
        Expectation lhs = epow();
        while (at_symbol("*")) {
            take();
            lhs = lhs * epow();
        }
        return lhs;
    }

    Expectation epow() {
        Expectation base = eatom();
        if (!at_symbol("^")) {
            return base;
        }
        take();
        if (peek().kind != Tok::Number || peek().text.find('.') != std::string::npos) {
            fail("expected a natural exponent");
        }
        unsigned long n = std::stoul(take().text);
        if (n == 0) {
            return Expectation::one();
        }
        Expectation out = base;
        for (unsigned long i = 1; i < n; ++i) {
            out = out * base;
        }
        return out;
    }

    Expectation eatom() {
        const Token& t = peek();
        if (at_symbol("-")) {
            fail("negative constants are not expectations");
        }
        if (t.kind == Tok::Number) {
            return Expectation::constant(ExtReal(number_literal()));
        }
        if (at_symbol("∞") || at_keyword("inf") || at_keyword("infinity")) {
            take();
            return Expectation::infinity();
        }
        if (t.kind == Tok::Ident && !is_keyword(t.text)) {
            std::string name = take().text;
            return Expectation::variable(name == "τ" ? std::string(kTau) : name);
        }
        if (at_symbol("[")) {
            take();
            Bool b = bexp();
            expect_symbol("]");
            return Expectation::iverson(b);
        }
        if (at_symbol("(")) {
            take();
            Expectation e = eexp();
            expect_symbol(")");
            return e;
        }
        fail("expected an expectation");
    }
};

// ---- printing

int arith_prec(const Arith& e) {
    switch (e.kind()) {
    case ArithKind::Add:
    case ArithKind::Sub: return 1;
    case ArithKind::Mul:
    case ArithKind::Mod: return 2;
    case ArithKind::Negate: return 3;
    case ArithKind::Pow: return 4;
    case ArithKind::Literal: return sgn(e.value()) < 0 ? 3 : 5;
    case ArithKind::Variable: return 5;
    }
    return 5;
}

std::string print_arith(const Arith& e, int min_prec) {
    std::string s;
    switch (e.kind()) {
    case ArithKind::Literal: s = to_string(e.value()); break;
    case ArithKind::Variable: s = e.name(); break;
    case ArithKind::Negate: s = "-" + print_arith(e.lhs(), 3); break;
    case ArithKind::Pow: s = print_arith(e.lhs(), 5) + "^" + print_arith(e.rhs(), 3); break;
    default: {
        int p = arith_prec(e);
        const char* op = e.kind() == ArithKind::Add ? "+" : e.kind() == ArithKind::Sub ? "-" : e.kind() == ArithKind::Mul ? "*" : " mod ";
        s = print_arith(e.lhs(), p) + op + print_arith(e.rhs(), p + 1);
    }
    }
    return arith_prec(e) < min_prec ? "(" + s + ")" : s;
}

int bool_prec(const Bool& b) {
    switch (b.kind()) {
    case BoolKind::Or: return 1;
    case BoolKind::And: return 2;
    case BoolKind::Not: return 3;
    default: return 4;
    }
}

const char* cmp_text(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return " = ";
    case CmpOp::Ne: return " != ";
    case CmpOp::Lt: return " < ";
    case CmpOp::Le: return " <= ";
    case CmpOp::Gt: return " > ";
    case CmpOp::Ge: return " >= ";
    }
    return " = ";
}

std::string print_bool(const Bool& b, int min_prec) {
    std::string s;
    switch (b.kind()) {
    case BoolKind::True: s = "true"; break;
    case BoolKind::False: s = "false"; break;
    case BoolKind::Compare: s = print_arith(b.lhs_arith(), 0) + cmp_text(b.cmp()) + print_arith(b.rhs_arith(), 0); break;
    case BoolKind::Odd: s = "odd(" + print_arith(b.lhs_arith(), 0) + ")"; break;
    case BoolKind::Even: s = "even(" + print_arith(b.lhs_arith(), 0) + ")"; break;
    case BoolKind::Not: s = "!" + print_bool(b.lhs(), 3); break;
    case BoolKind::And: s = print_bool(b.lhs(), 2) + " && " + print_bool(b.rhs(), 3); break;
    case BoolKind::Or: s = print_bool(b.lhs(), 1) + " || " + print_bool(b.rhs(), 2); break;
    }
    return bool_prec(b) < min_prec ? "(" + s + ")" : s;
}

int expectation_prec(const Expectation& f) {
    switch (f.kind()) {
    case ExpectationKind::Add: return 1;
    case ExpectationKind::Mul: return 2;
    default: return 3;
    }
}

std::string print_expectation(const Expectation& f, int min_prec) {
    std::string s;
    switch (f.kind()) {
    case ExpectationKind::Const: s = f.value().str(); break;
    case ExpectationKind::Term:
        s = f.arith().kind() == ArithKind::Variable ? f.arith().name() : "(" + print_arith(f.arith(), 0) + ")";
        break;
    case ExpectationKind::Iverson: s = "[" + print_bool(f.condition(), 0) + "]"; break;
    case ExpectationKind::Add: s = print_expectation(f.lhs(), 1) + " + " + print_expectation(f.rhs(), 2); break;
    case ExpectationKind::Mul: s = print_expectation(f.lhs(), 2) + "*" + print_expectation(f.rhs(), 3); break;
    }
    return expectation_prec(f) < min_prec ? "(" + s + ")" : s;
}

} // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }
Expectation parse_expectation(std::string_view text) { return Parser(text).expectation(); }
Arith parse_arith(std::string_view text) { return Parser(text).arith_only(); }
Bool parse_bool(std::string_view text) { return Parser(text).bool_only(); }

std::string pretty_print(const Program& p) {
    switch (p.kind()) {
    case ProgramKind::Skip: return "skip";
    case ProgramKind::Empty: return "empty";
    case ProgramKind::Diverge: return "diverge";
    case ProgramKind::Halt: return "halt";
    case ProgramKind::Done: return "↓";
    case ProgramKind::Assign: return p.var() + " := " + print_arith(p.expr(), 0);
    case ProgramKind::Seq: return pretty_print(p.first()) + "; " + pretty_print(p.second());
    case ProgramKind::If:
        return "if (" + print_bool(p.guard(), 0) + ") {" + pretty_print(p.first()) + "} else {" + pretty_print(p.second()) + "}";
    case ProgramKind::PChoice:
        return "{" + pretty_print(p.first()) + "} [" + to_string(p.prob()) + "] {" + pretty_print(p.second()) + "}";
    case ProgramKind::While: return "while (" + print_bool(p.guard(), 0) + ") {" + pretty_print(p.first()) + "}";
    case ProgramKind::BoundedWhile:
        return "while<" + std::to_string(p.bound()) + "> (" + print_bool(p.guard(), 0) + ") {" + pretty_print(p.first()) + "}";
    case ProgramKind::Observe: return "observe(" + print_bool(p.guard(), 0) + ")";
    }
    return "";
}

std::string to_string(const Arith& e) { return print_arith(e, 0); }
std::string to_string(const Bool& b) { return print_bool(b, 0); }
std::string to_string(const Expectation& f) { return print_expectation(f, 0); }

} // namespace covar
