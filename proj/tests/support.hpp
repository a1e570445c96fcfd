#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "covar/expectation.hpp"
#include "covar/parser.hpp"
#include "covar/syntax.hpp"

#ifndef COVAR_FIXTURES
#define COVAR_FIXTURES "fixtures"
#endif

namespace covar::testing {

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(COVAR_FIXTURES) + "/" + name);
    if (!in) {
        throw std::runtime_error("missing fixture " + name);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Program fixture_program(const std::string& name) { return parse_program(read_fixture(name)); }
inline Expectation fixture_expectation(const std::string& name) { return parse_expectation(read_fixture(name)); }

inline State make_state(std::initializer_list<std::pair<const char*, long>> values) {
    State s;
    for (const auto& [name, v] : values) {
        s.set(name, Rational(v));
    }
    return s;
}

inline Rational q(const char* text) { return parse_rational(text); }

inline ExtReal ext(const char* text) { return parse_ext_real(text); }

// Random syntax trees. Sequences are generated right-nested and literals
// non-negative, matching what the parser produces.
class AstGen {
  public:
    struct Options {
        int max_depth = 4;
        bool loops = true;
        bool observe = true;
        // Only +, -, * and mod over integer literals; keeps evaluation defined on integer states.
        bool integer_safe = false;
        // Allow diverge / halt statements.
        bool abort_stmts = true;
    };

    AstGen(std::uint64_t seed, Options opts) : rng_(seed), opts_(opts) {}

    Arith arith(int depth) {
        int choice = pick(0, depth <= 0 ? 1 : (opts_.integer_safe ? 5 : 7));
        switch (choice) {
        case 0: return Arith::literal(literal());
        case 1: return Arith::variable(var());
        case 2: return Arith::binary(ArithKind::Add, arith(depth - 1), arith(depth - 1));
        case 3: return Arith::binary(ArithKind::Sub, arith(depth - 1), arith(depth - 1));
        case 4: return Arith::binary(ArithKind::Mul, arith(depth - 1), arith(depth - 1));
        case 5:
            return Arith::binary(ArithKind::Mod, arith(depth - 1), Arith::literal(Rational(pick(1, 4))));
        case 6: return Arith::negate(arith(depth - 1));
        default: return Arith::power(arith(depth - 1), Arith::literal(Rational(pick(0, 3))));
        }
    }

    Bool boolean(int depth) {
        int choice = pick(0, depth <= 0 ? 2 : 7);
        switch (choice) {
        case 0: return Bool::constant(pick(0, 1) == 1);
        case 1:
        case 2: return Bool::compare(static_cast<CmpOp>(pick(0, 5)), arith(1), arith(1));
        case 3: return Bool::conj(boolean(depth - 1), boolean(depth - 1));
        case 4: return Bool::disj(boolean(depth - 1), boolean(depth - 1));
        case 5: return Bool::negate(boolean(depth - 1));
        case 6: return Bool::odd(arith(1));
        default: return Bool::even(arith(1));
        }
    }

    Program program(int depth) {
        if (pick(0, 3) == 0 && depth > 0) {
            return Program::seq(statement(depth), program(depth - 1));
        }
        return statement(depth);
    }

    Program statement(int depth) {
        int hi = depth <= 0 ? 4 : 9;
        for (;;) {
            switch (pick(0, hi)) {
            case 0: return Program::skip();
            case 1: return Program::empty_stmt();
            case 2:
                if (!opts_.abort_stmts) {
                    continue;
                }
                return pick(0, 1) == 0 ? Program::diverge() : Program::halt();
            case 3:
            case 4: return Program::assign(var(), arith(opts_.integer_safe ? 1 : 2));
            case 5: return Program::ite(boolean(1), program(depth - 1), program(depth - 1));
            case 6:
            case 7: return Program::pchoice(program(depth - 1), probability(), program(depth - 1));
            case 8:
                if (!opts_.loops) {
                    continue;
                }
                return Program::loop(boolean(1), program(depth - 1));
            default:
                if (!opts_.observe) {
                    continue;
                }
                return Program::observe(boolean(1));
            }
        }
    }

    Program program() { return program(opts_.max_depth); }

    Rational probability() {
        static const char* const probs[] = {"0", "1", "1/2", "1/3", "2/3", "1/4", "3/4", "1/5"};
        return parse_rational(probs[pick(0, 7)]);
    }

    Rational literal() {
        if (opts_.integer_safe || pick(0, 2) != 0) {
            return Rational(pick(0, 5));
        }
        Rational r(pick(0, 9), pick(1, 4));
        r.canonicalize();
        return r;
    }

    std::string var() {
        static const char* const names[] = {"x", "y", "c"};
        return names[pick(0, 2)];
    }

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::mt19937_64& rng() { return rng_; }

  private:
    std::mt19937_64 rng_;
    Options opts_;
};

struct CorpusEntry {
    const char* name;
    const char* program;
    const char* reward;
    const char* state;
    // Unrolling bound applied to every loop; 0 leaves the program unchanged.
    unsigned bound = 0;
};

// Loop-free and bounded-loop programs whose operational chain closes.
inline const std::vector<CorpusEntry>& correspondence_corpus() {
    static const std::vector<CorpusEntry> corpus = {
        {"skip", "skip", "tau", "{}"},
        {"empty", "empty", "tau + 1", "{}"},
        {"halt", "halt", "tau", "{}"},
        {"diverge", "diverge", "tau", "{}"},
        {"assign", "x := 5", "x + tau", "{\"x\":\"0\"}"},
        {"pchoice", "{x := 1} [1/2] {x := 2}", "x", "{\"x\":\"0\"}"},
        {"two-path", "{skip} [0.5] {skip; skip}", "tau", "{}"},
        {"observe-false", "observe(false)", "tau", "{}"},
        {"observe-half", "{x := 1} [0.5] {x := 2}; observe(x = 1)", "x", "{\"x\":\"0\"}"},
        {"reduction-1/2", "v := 0; {skip} [1/2] {diverge}; v := 1", "v", "{\"v\":\"0\"}"},
        {"reduction-1", "v := 0; {skip} [1] {diverge}; v := 1", "v*v + tau", "{\"v\":\"0\"}"},
        {"if", "if (x > 2) {y := x} else {y := 0; skip}", "y + tau", "{\"x\":\"3\",\"y\":\"0\"}"},
        {"nested-choice", "{{x := 1} [1/3] {x := 2}} [1/4] {x := 3; observe(odd(x))}", "x*x", "{\"x\":\"0\"}"},
        {"halt-branch", "{halt} [2/3] {x := 7}", "x + 1", "{\"x\":\"0\"}"},
        {"observe-parity", "{x := x + 1} [1/2] {x := x + 2}; observe(even(x)); x := x * 3", "x", "{\"x\":\"1\"}"},
        {"chain", "x := 1; x := x + 1; {x := x * 2} [1/5] {empty}; observe(x > 1)", "x + tau", "{\"x\":\"0\"}"},
        {"geo-odd<3", "while (c = 1) {{c := 0} [1/2] {x := x+1}; observe(c = 1 || odd(x))}", "x", "{\"c\":\"1\",\"x\":\"0\"}", 3},
        {"geo-odd<6", "while (c = 1) {{c := 0} [1/2] {x := x+1}; observe(c = 1 || odd(x))}", "tau", "{\"c\":\"1\",\"x\":\"0\"}", 6},
        {"geometric<8", "while (c = 1) {{c := 0} [1/2] {skip}}", "tau*tau", "{\"c\":\"1\"}", 8},
        {"countdown<5", "while (i > 0) {i := i - 1}", "tau", "{\"i\":\"3\"}", 5},
        {"countdown<2", "while (i > 0) {i := i - 1}", "tau + i", "{\"i\":\"3\"}", 2},
        {"diverge-choice", "{diverge} [1/3] {observe(false)}", "tau", "{}"},
        {"observe-diverge", "{diverge} [1/2] {skip}; observe(false)", "tau", "{}"},
        {"seq-halt", "x := 1; halt; x := 2", "x", "{\"x\":\"0\"}"},
    };
    return corpus;
}

inline Program corpus_program(const CorpusEntry& e) {
    Program p = parse_program(e.program);
    return e.bound > 0 ? bound_loops(p, e.bound) : p;
}

struct CorruptedInvariant {
    const char* name;
    // "wp" checks F_{x^2}(X) <= X, "wlp" checks Y <= G(Y).
    const char* condition;
    const char* text;
};

// Deliberately broken variants of the example invariants.
inline const std::vector<CorruptedInvariant>& corrupted_invariants() {
    static const std::vector<CorruptedInvariant> list = {
        {"X with 41 replaced by 40", "wp",
         "[c != 1]*x^2 + [c = 1]*([even(x)]*1/27*(9*x^2 + 30*x + 40) + [odd(x)]*2/27*(9*x^2 + 12*x + 20))"},
        {"X halved", "wp",
         "[c != 1]*x^2 + [c = 1]*([even(x)]*1/54*(9*x^2 + 30*x + 41) + [odd(x)]*1/27*(9*x^2 + 12*x + 20))"},
        {"X exit term x instead of x^2", "wp",
         "[c != 1]*x + [c = 1]*([even(x)]*1/27*(9*x^2 + 30*x + 41) + [odd(x)]*2/27*(9*x^2 + 12*x + 20))"},
        {"Y odd branch 3/4", "wlp", "[c != 1] + [c = 1]*([even(x)]*1/3 + [odd(x)]*3/4)"},
        {"Y constant one", "wlp", "1"},
    };
    return list;
}

} // namespace covar::testing
