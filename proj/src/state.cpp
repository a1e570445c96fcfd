#include "covar/state.hpp"

namespace covar {

namespace {

constexpr unsigned long kMaxExponent = 1UL << 16;

const mpz_class& integer_operand(const Rational& q, const char* op) {
    if (!is_integer(q)) {
        throw DomainError(std::string(op) + " requires an integer operand, got " + to_string(q));
    }
    return q.get_num();
}

Rational power(const Rational& base, const Rational& exponent) {
    const mpz_class& e = integer_operand(exponent, "exponent of ^");
    if (e < 0 || e > kMaxExponent) {
        throw DomainError("exponent " + e.get_str() + " outside [0, 65536]");
    }
    auto n = e.get_ui();
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), n);
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), n);
    return Rational(num, den);
}

} // namespace

State::State() { values_.emplace(std::string(kTau), 0); }

State::State(std::initializer_list<std::pair<const std::string, Rational>> init) : values_(init) {
    values_.try_emplace(std::string(kTau), 0);
}

const Rational& State::get(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) {
        if (name == "τ") {
            return tau();
        }
        throw DomainError("unbound variable '" + name + "'");
    }
    return it->second;
}

State State::with(const std::string& name, Rational value) const {
    State s = *this;
    s.values_[name] = std::move(value);
    return s;
}

State State::with_tick() const { return with(std::string(kTau), Rational(tau() + 1)); }

void State::set(const std::string& name, Rational value) { values_[name] = std::move(value); }

State State::completed(const std::set<std::string>& vars) const {
    State s = *this;
    for (const auto& v : vars) {
        if (v != "τ") {
            s.values_.try_emplace(v, 0);
        }
    }
    return s;
}

std::string State::str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : values_) {
        if (!first) {
            out += ", ";
        }
        first = false;
        out += k + "=" + to_string(v);
    }
    return out + "}";
}

Rational eval_arith(const Arith& e, const State& s) {
    switch (e.kind()) {
    case ArithKind::Literal: return e.value();
    case ArithKind::Variable: return s.get(e.name());
    case ArithKind::Negate: return -eval_arith(e.lhs(), s);
    case ArithKind::Add: return eval_arith(e.lhs(), s) + eval_arith(e.rhs(), s);
    case ArithKind::Sub: return eval_arith(e.lhs(), s) - eval_arith(e.rhs(), s);
    case ArithKind::Mul: return eval_arith(e.lhs(), s) * eval_arith(e.rhs(), s);
    case ArithKind::Mod: {
        Rational a = eval_arith(e.lhs(), s);
        Rational b = eval_arith(e.rhs(), s);
        const mpz_class& x = integer_operand(a, "mod");
        const mpz_class& m = integer_operand(b, "mod");
        if (m == 0) {
            throw DomainError("mod by zero");
        }
        mpz_class r;
        // floor modulo: the result takes the sign of the divisor
        mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        return Rational(r);
    }
    case ArithKind::Pow: return power(eval_arith(e.lhs(), s), eval_arith(e.rhs(), s));
    }
    throw DomainError("unknown arithmetic node");
}

bool eval_bool(const Bool& b, const State& s) {
    switch (b.kind()) {
    case BoolKind::True: return true;
    case BoolKind::False: return false;
    case BoolKind::Compare: {
        Rational l = eval_arith(b.lhs_arith(), s);
        Rational r = eval_arith(b.rhs_arith(), s);
        switch (b.cmp()) {
        case CmpOp::Eq: return l == r;
        case CmpOp::Ne: return l != r;
        case CmpOp::Lt: return l < r;
        case CmpOp::Le: return l <= r;
        case CmpOp::Gt: return l > r;
        case CmpOp::Ge: return l >= r;
        }
        break;
    }
    case BoolKind::And: return eval_bool(b.lhs(), s) && eval_bool(b.rhs(), s);
    case BoolKind::Or: return eval_bool(b.lhs(), s) || eval_bool(b.rhs(), s);
    case BoolKind::Not: return !eval_bool(b.lhs(), s);
    case BoolKind::Odd:
    case BoolKind::Even: {
        Rational v = eval_arith(b.lhs_arith(), s);
        const mpz_class& n = integer_operand(v, b.kind() == BoolKind::Odd ? "odd" : "even");
        bool odd = mpz_odd_p(n.get_mpz_t()) != 0;
        return b.kind() == BoolKind::Odd ? odd : !odd;
    }
    }
    throw DomainError("unknown Boolean node");
}

} // namespace covar
