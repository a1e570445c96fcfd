#include "covar/syntax.hpp"

namespace covar {

bool is_reserved_name(std::string_view name) { return name == kTau || name == "τ"; }

struct Arith::Node {
    ArithKind kind;
    Rational value;
    std::string name;
    Arith lhs;
    Arith rhs;
};

namespace {

template <class T>
const T& empty_handle() {
    static const T instance;
    return instance;
}

} // namespace

Arith Arith::literal(Rational value) {
    return Arith(std::make_shared<const Node>(Node{ArithKind::Literal, std::move(value), {}, {}, {}}));
}

Arith Arith::variable(std::string name) {
    return Arith(std::make_shared<const Node>(Node{ArithKind::Variable, 0, std::move(name), {}, {}}));
}

Arith Arith::negate(Arith operand) {
    return Arith(std::make_shared<const Node>(Node{ArithKind::Negate, 0, {}, std::move(operand), {}}));
}

Arith Arith::binary(ArithKind kind, Arith lhs, Arith rhs) {
    return Arith(std::make_shared<const Node>(Node{kind, 0, {}, std::move(lhs), std::move(rhs)}));
}

Arith Arith::power(Arith base, Arith exponent) { return binary(ArithKind::Pow, std::move(base), std::move(exponent)); }

ArithKind Arith::kind() const { return node_->kind; }
const Rational& Arith::value() const { return node_->value; }
const std::string& Arith::name() const { return node_->name; }
const Arith& Arith::lhs() const { return node_ ? node_->lhs : empty_handle<Arith>(); }
const Arith& Arith::rhs() const { return node_ ? node_->rhs : empty_handle<Arith>(); }

bool operator==(const Arith& a, const Arith& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (!a.node_ || !b.node_ || a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case ArithKind::Literal: return a.value() == b.value();
    case ArithKind::Variable: return a.name() == b.name();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

Arith operator+(Arith a, Arith b) { return Arith::binary(ArithKind::Add, std::move(a), std::move(b)); }
Arith operator-(Arith a, Arith b) { return Arith::binary(ArithKind::Sub, std::move(a), std::move(b)); }
Arith operator*(Arith a, Arith b) { return Arith::binary(ArithKind::Mul, std::move(a), std::move(b)); }

struct Bool::Node {
    BoolKind kind;
    CmpOp cmp;
    Arith lhs_arith;
    Arith rhs_arith;
    Bool lhs;
    Bool rhs;
};

Bool Bool::constant(bool value) {
    return Bool(std::make_shared<const Node>(Node{value ? BoolKind::True : BoolKind::False, CmpOp::Eq, {}, {}, {}, {}}));
}

Bool Bool::compare(CmpOp op, Arith lhs, Arith rhs) {
    return Bool(std::make_shared<const Node>(Node{BoolKind::Compare, op, std::move(lhs), std::move(rhs), {}, {}}));
}

Bool Bool::conj(Bool a, Bool b) {
    return Bool(std::make_shared<const Node>(Node{BoolKind::And, CmpOp::Eq, {}, {}, std::move(a), std::move(b)}));
}

Bool Bool::disj(Bool a, Bool b) {
    return Bool(std::make_shared<const Node>(Node{BoolKind::Or, CmpOp::Eq, {}, {}, std::move(a), std::move(b)}));
}

Bool Bool::negate(Bool operand) {
    return Bool(std::make_shared<const Node>(Node{BoolKind::Not, CmpOp::Eq, {}, {}, std::move(operand), {}}));
}

Bool Bool::odd(Arith operand) {
    return Bool(std::make_shared<const Node>(Node{BoolKind::Odd, CmpOp::Eq, std::move(operand), {}, {}, {}}));
}

Bool Bool::even(Arith operand) {
    return Bool(std::make_shared<const Node>(Node{BoolKind::Even, CmpOp::Eq, std::move(operand), {}, {}, {}}));
}

BoolKind Bool::kind() const { return node_->kind; }
CmpOp Bool::cmp() const { return node_->cmp; }
const Arith& Bool::lhs_arith() const { return node_->lhs_arith; }
const Arith& Bool::rhs_arith() const { return node_->rhs_arith; }
const Bool& Bool::lhs() const { return node_ ? node_->lhs : empty_handle<Bool>(); }
const Bool& Bool::rhs() const { return node_ ? node_->rhs : empty_handle<Bool>(); }

bool operator==(const Bool& a, const Bool& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (!a.node_ || !b.node_ || a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case BoolKind::True:
    case BoolKind::False: return true;
    case BoolKind::Compare:
        return a.cmp() == b.cmp() && a.lhs_arith() == b.lhs_arith() && a.rhs_arith() == b.rhs_arith();
    case BoolKind::Odd:
    case BoolKind::Even: return a.lhs_arith() == b.lhs_arith();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

struct Program::Node {
    ProgramKind kind;
    std::string var;
    Arith expr;
    Bool guard;
    Rational prob;
    unsigned bound = 0;
    Program first;
    Program second;
};

namespace {

Program::Node make_node(ProgramKind kind) { return Program::Node{kind, {}, {}, {}, 0, 0, {}, {}}; }

} // namespace

Program Program::skip() { return Program(std::make_shared<const Node>(make_node(ProgramKind::Skip))); }
Program Program::empty_stmt() { return Program(std::make_shared<const Node>(make_node(ProgramKind::Empty))); }
Program Program::diverge() { return Program(std::make_shared<const Node>(make_node(ProgramKind::Diverge))); }
Program Program::halt() { return Program(std::make_shared<const Node>(make_node(ProgramKind::Halt))); }
Program Program::done() { return Program(std::make_shared<const Node>(make_node(ProgramKind::Done))); }

Program Program::assign(std::string var, Arith value) {
    if (is_reserved_name(var)) {
        throw DomainError("'" + var + "' is reserved and cannot be assigned");
    }
    auto n = make_node(ProgramKind::Assign);
    n.var = std::move(var);
    n.expr = std::move(value);
    return Program(std::make_shared<const Node>(std::move(n)));
}

Program Program::seq(Program first, Program second) {
    auto n = make_node(ProgramKind::Seq);
    n.first = std::move(first);
    n.second = std::move(second);
    return Program(std::make_shared<const Node>(std::move(n)));
}

Program Program::ite(Bool guard, Program then_branch, Program else_branch) {
    auto n = make_node(ProgramKind::If);
    n.guard = std::move(guard);
    n.first = std::move(then_branch);
    n.second = std::move(else_branch);
    return Program(std::make_shared<const Node>(std::move(n)));
}

Program Program::pchoice(Program left, Rational p, Program right) {
    if (p < 0 || p > 1) {
        throw DomainError("probability " + to_string(p) + " outside [0,1]");
    }
    auto n = make_node(ProgramKind::PChoice);
    n.first = std::move(left);
    n.prob = std::move(p);
    n.second = std::move(right);
    return Program(std::make_shared<const Node>(std::move(n)));
}

Program Program::loop(Bool guard, Program body) {
    auto n = make_node(ProgramKind::While);
    n.guard = std::move(guard);
    n.first = std::move(body);
    return Program(std::make_shared<const Node>(std::move(n)));
}

Program Program::bounded_loop(unsigned bound, Bool guard, Program body) {
    auto n = make_node(ProgramKind::BoundedWhile);
    n.bound = bound;
    n.guard = std::move(guard);
    n.first = std::move(body);
    return Program(std::make_shared<const Node>(std::move(n)));
}

Program Program::observe(Bool condition) {
    auto n = make_node(ProgramKind::Observe);
    n.guard = std::move(condition);
    return Program(std::make_shared<const Node>(std::move(n)));
}

ProgramKind Program::kind() const { return node_->kind; }
const std::string& Program::var() const { return node_->var; }
const Arith& Program::expr() const { return node_->expr; }
const Bool& Program::guard() const { return node_->guard; }
const Rational& Program::prob() const { return node_->prob; }
unsigned Program::bound() const { return node_->bound; }
const Program& Program::first() const { return node_->first; }
const Program& Program::second() const { return node_->second; }

bool operator==(const Program& a, const Program& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (!a.node_ || !b.node_ || a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case ProgramKind::Skip:
    case ProgramKind::Empty:
    case ProgramKind::Diverge:
    case ProgramKind::Halt:
    case ProgramKind::Done: return true;
    case ProgramKind::Assign: return a.var() == b.var() && a.expr() == b.expr();
    case ProgramKind::Seq: return a.first() == b.first() && a.second() == b.second();
    case ProgramKind::If:
        return a.guard() == b.guard() && a.first() == b.first() && a.second() == b.second();
    case ProgramKind::PChoice:
        return a.prob() == b.prob() && a.first() == b.first() && a.second() == b.second();
    case ProgramKind::While: return a.guard() == b.guard() && a.first() == b.first();
    case ProgramKind::BoundedWhile:
        return a.bound() == b.bound() && a.guard() == b.guard() && a.first() == b.first();
    case ProgramKind::Observe: return a.guard() == b.guard();
    }
    return false;
}

bool contains_loop(const Program& p) {
    switch (p.kind()) {
    case ProgramKind::While:
    case ProgramKind::BoundedWhile: return true;
    case ProgramKind::Seq:
    case ProgramKind::If:
    case ProgramKind::PChoice: return contains_loop(p.first()) || contains_loop(p.second());
    default: return false;
    }
}

Program bound_loops(const Program& p, unsigned k) {
    switch (p.kind()) {
    case ProgramKind::While: return Program::bounded_loop(k, p.guard(), bound_loops(p.first(), k));
    case ProgramKind::BoundedWhile: return Program::bounded_loop(p.bound(), p.guard(), bound_loops(p.first(), k));
    case ProgramKind::Seq: return Program::seq(bound_loops(p.first(), k), bound_loops(p.second(), k));
    case ProgramKind::If: return Program::ite(p.guard(), bound_loops(p.first(), k), bound_loops(p.second(), k));
    case ProgramKind::PChoice:
        return Program::pchoice(bound_loops(p.first(), k), p.prob(), bound_loops(p.second(), k));
    default: return p;
    }
}

void collect_variables(const Arith& e, std::set<std::string>& out) {
    if (e.empty()) {
        return;
    }
    if (e.kind() == ArithKind::Variable) {
        out.insert(e.name());
        return;
    }
    collect_variables(e.lhs(), out);
    collect_variables(e.rhs(), out);
}

void collect_variables(const Bool& b, std::set<std::string>& out) {
    if (b.empty()) {
        return;
    }
    switch (b.kind()) {
    case BoolKind::Compare:
    case BoolKind::Odd:
    case BoolKind::Even:
        collect_variables(b.lhs_arith(), out);
        collect_variables(b.rhs_arith(), out);
        break;
    default:
        collect_variables(b.lhs(), out);
        collect_variables(b.rhs(), out);
    }
}

void collect_variables(const Program& p, std::set<std::string>& out) {
    if (p.empty()) {
        return;
    }
    switch (p.kind()) {
    case ProgramKind::Assign:
        out.insert(p.var());
        collect_variables(p.expr(), out);
        break;
    case ProgramKind::If:
    case ProgramKind::While:
    case ProgramKind::BoundedWhile:
    case ProgramKind::Observe:
        collect_variables(p.guard(), out);
        [[fallthrough]];
    case ProgramKind::Seq:
    case ProgramKind::PChoice:
        collect_variables(p.first(), out);
        collect_variables(p.second(), out);
        break;
    default: break;
    }
}

std::set<std::string> variables_of(const Program& p) {
    std::set<std::string> out;
    collect_variables(p, out);
    return out;
}

bool uses_integer_ops(const Arith& e) {
    if (e.empty()) {
        return false;
    }
    if (e.kind() == ArithKind::Mod || e.kind() == ArithKind::Pow) {
        return true;
    }
    return uses_integer_ops(e.lhs()) || uses_integer_ops(e.rhs());
}

bool uses_integer_ops(const Bool& b) {
    if (b.empty()) {
        return false;
    }
    switch (b.kind()) {
    case BoolKind::Odd:
    case BoolKind::Even: return true;
    case BoolKind::Compare: return uses_integer_ops(b.lhs_arith()) || uses_integer_ops(b.rhs_arith());
    default: return uses_integer_ops(b.lhs()) || uses_integer_ops(b.rhs());
    }
}

bool uses_integer_ops(const Program& p) {
    if (p.empty()) {
        return false;
    }
    switch (p.kind()) {
    case ProgramKind::Assign: return uses_integer_ops(p.expr());
    case ProgramKind::If:
    case ProgramKind::While:
    case ProgramKind::BoundedWhile:
    case ProgramKind::Observe:
        if (uses_integer_ops(p.guard())) {
            return true;
        }
        [[fallthrough]];
    case ProgramKind::Seq:
    case ProgramKind::PChoice: return uses_integer_ops(p.first()) || uses_integer_ops(p.second());
    default: return false;
    }
}

} // namespace covar
