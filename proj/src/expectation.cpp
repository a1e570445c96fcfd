#include "covar/expectation.hpp"

namespace covar {

struct Expectation::Node {
    ExpectationKind kind;
    ExtReal value;
    Arith arith;
    Bool condition;
    Expectation lhs;
    Expectation rhs;
};

namespace {

const Expectation& empty_expectation() {
    static const Expectation instance;
    return instance;
}

Arith substitute(const Arith& e, const std::string& x, const Arith& by) {
    if (e.empty()) {
        return e;
    }
    switch (e.kind()) {
    case ArithKind::Literal: return e;
    case ArithKind::Variable: return e.name() == x ? by : e;
    case ArithKind::Negate: return Arith::negate(substitute(e.lhs(), x, by));
    default: return Arith::binary(e.kind(), substitute(e.lhs(), x, by), substitute(e.rhs(), x, by));
    }
}

Bool substitute(const Bool& b, const std::string& x, const Arith& by) {
    switch (b.kind()) {
    case BoolKind::True:
    case BoolKind::False: return b;
    case BoolKind::Compare: return Bool::compare(b.cmp(), substitute(b.lhs_arith(), x, by), substitute(b.rhs_arith(), x, by));
    case BoolKind::Odd: return Bool::odd(substitute(b.lhs_arith(), x, by));
    case BoolKind::Even: return Bool::even(substitute(b.lhs_arith(), x, by));
    case BoolKind::Not: return Bool::negate(substitute(b.lhs(), x, by));
    case BoolKind::And: return Bool::conj(substitute(b.lhs(), x, by), substitute(b.rhs(), x, by));
    case BoolKind::Or: return Bool::disj(substitute(b.lhs(), x, by), substitute(b.rhs(), x, by));
    }
    return b;
}

// Signed intermediate value: finite rational or +infinity.
struct Signed {
    Rational q;
    bool inf = false;
};

Signed eval_signed(const Expectation& f, const State& s) {
    switch (f.kind()) {
    case ExpectationKind::Const:
        if (f.value().is_infinite()) {
            return {0, true};
        }
        return {f.value().finite(), false};
    case ExpectationKind::Term: return {eval_arith(f.arith(), s), false};
    case ExpectationKind::Iverson: return {eval_bool(f.condition(), s) ? 1 : 0, false};
    case ExpectationKind::Add: {
        Signed a = eval_signed(f.lhs(), s);
        Signed b = eval_signed(f.rhs(), s);
        if (a.inf || b.inf) {
            return {0, true};
        }
        return {a.q + b.q, false};
    }
    case ExpectationKind::Mul: {
        Signed a = eval_signed(f.lhs(), s);
        if (!a.inf && sgn(a.q) == 0) {
            return {0, false};
        }
        Signed b = eval_signed(f.rhs(), s);
        if (!b.inf && sgn(b.q) == 0) {
            return {0, false};
        }
        if (a.inf || b.inf) {
            if ((!a.inf && sgn(a.q) < 0) || (!b.inf && sgn(b.q) < 0)) {
                throw DomainError("infinity times a negative value in expectation");
            }
            return {0, true};
        }
        return {a.q * b.q, false};
    }
    }
    throw DomainError("unknown expectation node");
}

} // namespace

Expectation Expectation::constant(ExtReal value) {
    return Expectation(std::make_shared<const Node>(Node{ExpectationKind::Const, std::move(value), {}, {}, {}, {}}));
}

Expectation Expectation::variable(std::string name) { return term(Arith::variable(std::move(name))); }

Expectation Expectation::term(Arith e) {
    return Expectation(std::make_shared<const Node>(Node{ExpectationKind::Term, {}, std::move(e), {}, {}, {}}));
}

Expectation Expectation::iverson(Bool b) {
    return Expectation(std::make_shared<const Node>(Node{ExpectationKind::Iverson, {}, {}, std::move(b), {}, {}}));
}

Expectation Expectation::add(Expectation a, Expectation b) {
    return Expectation(std::make_shared<const Node>(Node{ExpectationKind::Add, {}, {}, {}, std::move(a), std::move(b)}));
}

Expectation Expectation::mul(Expectation a, Expectation b) {
    return Expectation(std::make_shared<const Node>(Node{ExpectationKind::Mul, {}, {}, {}, std::move(a), std::move(b)}));
}

ExpectationKind Expectation::kind() const { return node_->kind; }
const ExtReal& Expectation::value() const { return node_->value; }
const Arith& Expectation::arith() const { return node_->arith; }
const Bool& Expectation::condition() const { return node_->condition; }
const Expectation& Expectation::lhs() const { return node_ ? node_->lhs : empty_expectation(); }
const Expectation& Expectation::rhs() const { return node_ ? node_->rhs : empty_expectation(); }

bool operator==(const Expectation& a, const Expectation& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (!a.node_ || !b.node_ || a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case ExpectationKind::Const: return a.value() == b.value();
    case ExpectationKind::Term: return a.arith() == b.arith();
    case ExpectationKind::Iverson: return a.condition() == b.condition();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

Expectation operator+(Expectation a, Expectation b) { return Expectation::add(std::move(a), std::move(b)); }
Expectation operator*(Expectation a, Expectation b) { return Expectation::mul(std::move(a), std::move(b)); }

Expectation substitute(const Expectation& f, const std::string& x, const Arith& e) {
    switch (f.kind()) {
    case ExpectationKind::Const: return f;
    case ExpectationKind::Term: return Expectation::term(substitute(f.arith(), x, e));
    case ExpectationKind::Iverson: return Expectation::iverson(substitute(f.condition(), x, e));
    case ExpectationKind::Add: return substitute(f.lhs(), x, e) + substitute(f.rhs(), x, e);
    case ExpectationKind::Mul: return substitute(f.lhs(), x, e) * substitute(f.rhs(), x, e);
    }
    return f;
}

ExtReal evaluate(const Expectation& f, const State& s) {
    Signed v = eval_signed(f, s);
    if (v.inf) {
        return ExtReal::infinity();
    }
    if (sgn(v.q) < 0) {
        throw DomainError("expectation evaluates to negative value " + to_string(v.q) + " at " + s.str());
    }
    return ExtReal(v.q);
}

void collect_variables(const Expectation& f, std::set<std::string>& out) {
    if (f.empty()) {
        return;
    }
    switch (f.kind()) {
    case ExpectationKind::Const: break;
    case ExpectationKind::Term: collect_variables(f.arith(), out); break;
    case ExpectationKind::Iverson: collect_variables(f.condition(), out); break;
    default:
        collect_variables(f.lhs(), out);
        collect_variables(f.rhs(), out);
    }
}

bool uses_integer_ops(const Expectation& f) {
    if (f.empty()) {
        return false;
    }
    switch (f.kind()) {
    case ExpectationKind::Const: return false;
    case ExpectationKind::Term: return uses_integer_ops(f.arith());
    case ExpectationKind::Iverson: return uses_integer_ops(f.condition());
    default: return uses_integer_ops(f.lhs()) || uses_integer_ops(f.rhs());
    }
}

LeqReport pointwise_leq(const Expectation& f, const Expectation& g, const std::vector<State>& states) {
    if (states.empty()) {
        throw PreconditionError("pointwise comparison needs at least one state");
    }
    LeqReport report;
    for (const auto& s : states) {
        try {
            ExtReal lhs = evaluate(f, s);
            ExtReal rhs = evaluate(g, s);
            ++report.states_tested;
            if (lhs > rhs) {
                report.holds = false;
                report.counterexamples.push_back({s, lhs, rhs});
            }
        } catch (const DomainError& e) {
            report.errors.push_back({s, e.what()});
        }
    }
    return report;
}

} // namespace covar
