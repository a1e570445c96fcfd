#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "covar/numeric.hpp"
#include "covar/state.hpp"
#include "covar/syntax.hpp"

namespace covar {

/// Leaves are constants, arithmetic terms (a plain variable after parsing,
/// arbitrary after substitution) and Iverson brackets.
enum class ExpectationKind { Const, Term, Iverson, Add, Mul };

/// Random variable over states, valued in the non-negative extended reals.
class Expectation {
  public:
    Expectation() = default;

    static Expectation constant(ExtReal value);
    static Expectation zero() { return constant(ExtReal::zero()); }
    static Expectation one() { return constant(ExtReal::one()); }
    static Expectation infinity() { return constant(ExtReal::infinity()); }
    static Expectation variable(std::string name);
    static Expectation term(Arith e);
    static Expectation iverson(Bool b);
    static Expectation add(Expectation a, Expectation b);
    static Expectation mul(Expectation a, Expectation b);

    [[nodiscard]] bool empty() const { return node_ == nullptr; }
    [[nodiscard]] ExpectationKind kind() const;
    [[nodiscard]] const ExtReal& value() const;
    [[nodiscard]] const Arith& arith() const;
    [[nodiscard]] const Bool& condition() const;
    [[nodiscard]] const Expectation& lhs() const;
    [[nodiscard]] const Expectation& rhs() const;

    friend bool operator==(const Expectation& a, const Expectation& b);

    struct Node; // opaque, defined in expectation.cpp

  private:
    explicit Expectation(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Expectation operator+(Expectation a, Expectation b);
Expectation operator*(Expectation a, Expectation b);

/// f[x/e]: syntactic replacement, also inside Iverson brackets.
[[nodiscard]] Expectation substitute(const Expectation& f, const std::string& x, const Arith& e);

/// Exact value at s. Intermediate products may be negative (x*x at x=-1);
/// a negative final value, or infinity times a negative, raises DomainError.
[[nodiscard]] ExtReal evaluate(const Expectation& f, const State& s);

void collect_variables(const Expectation& f, std::set<std::string>& out);
bool uses_integer_ops(const Expectation& f);

struct LeqCounterexample {
    State state;
    ExtReal lhs;
    ExtReal rhs;
};

struct EvaluationFailure {
    State state;
    std::string message;
};

struct LeqReport {
    /// f <= g on every state where both sides evaluated.
    bool holds = true;
    std::size_t states_tested = 0;
    std::vector<LeqCounterexample> counterexamples;
    std::vector<EvaluationFailure> errors;
};

/// Checks f(s) <= g(s) on the supplied states only; never a proof over all states.
[[nodiscard]] LeqReport pointwise_leq(const Expectation& f, const Expectation& g, const std::vector<State>& states);

} // namespace covar
