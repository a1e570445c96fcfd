#pragma once

// Abstract syntax of cpGCL programs: arithmetic and Boolean expressions and
// statements. Nodes are immutable and shared; the handle classes below have
// value semantics and compare structurally.

#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "covar/numeric.hpp"

namespace covar {

/// Reserved run-time variable. Readable by expectations, never assignable.
inline constexpr std::string_view kTau = "tau";

bool is_reserved_name(std::string_view name);

enum class ArithKind { Literal, Variable, Negate, Add, Sub, Mul, Mod, Pow };

class Arith {
  public:
    Arith() = default;

    static Arith literal(Rational value);
    static Arith variable(std::string name);
    static Arith negate(Arith operand);
    static Arith binary(ArithKind kind, Arith lhs, Arith rhs);
    /// base ^ exponent; the exponent must evaluate to a natural number.
    static Arith power(Arith base, Arith exponent);

    [[nodiscard]] bool empty() const { return node_ == nullptr; }
    [[nodiscard]] ArithKind kind() const;
    [[nodiscard]] const Rational& value() const;
    [[nodiscard]] const std::string& name() const;
    /// Operand of Negate, left operand of binary nodes, base of Pow.
    [[nodiscard]] const Arith& lhs() const;
    /// Right operand of binary nodes, exponent of Pow.
    [[nodiscard]] const Arith& rhs() const;

    friend bool operator==(const Arith& a, const Arith& b);

    struct Node; // opaque, defined in syntax.cpp

  private:
    explicit Arith(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Arith operator+(Arith a, Arith b);
Arith operator-(Arith a, Arith b);
Arith operator*(Arith a, Arith b);

enum class BoolKind { True, False, Compare, And, Or, Not, Odd, Even };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

class Bool {
  public:
    Bool() = default;

    static Bool constant(bool value);
    static Bool compare(CmpOp op, Arith lhs, Arith rhs);
    static Bool conj(Bool a, Bool b);
    static Bool disj(Bool a, Bool b);
    static Bool negate(Bool operand);
    static Bool odd(Arith operand);
    static Bool even(Arith operand);

    [[nodiscard]] bool empty() const { return node_ == nullptr; }
    [[nodiscard]] BoolKind kind() const;
    [[nodiscard]] CmpOp cmp() const;
    /// Operands of Compare; Odd/Even keep their argument in lhs_arith().
    [[nodiscard]] const Arith& lhs_arith() const;
    [[nodiscard]] const Arith& rhs_arith() const;
    /// Operands of And/Or; Not keeps its operand in lhs().
    [[nodiscard]] const Bool& lhs() const;
    [[nodiscard]] const Bool& rhs() const;

    friend bool operator==(const Bool& a, const Bool& b);

    struct Node; // opaque, defined in syntax.cpp

  private:
    explicit Bool(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Statement kinds. BoundedWhile and Done are internal forms: BoundedWhile
/// comes from loop unrolling, Done is the terminated marker of the
/// operational semantics. Neither is produced by the parser.
enum class ProgramKind {
    Skip,
    Empty,
    Diverge,
    Halt,
    Assign,
    Seq,
    If,
    PChoice,
    While,
    Observe,
    BoundedWhile,
    Done,
};

class Program {
  public:
    Program() = default;

    static Program skip();
    static Program empty_stmt();
    static Program diverge();
    static Program halt();
    static Program done();
    static Program assign(std::string var, Arith value);
    static Program seq(Program first, Program second);
    static Program ite(Bool guard, Program then_branch, Program else_branch);
    /// Throws DomainError unless 0 <= p <= 1.
    static Program pchoice(Program left, Rational p, Program right);
    static Program loop(Bool guard, Program body);
    static Program bounded_loop(unsigned bound, Bool guard, Program body);
    static Program observe(Bool condition);

    [[nodiscard]] bool empty() const { return node_ == nullptr; }
    [[nodiscard]] ProgramKind kind() const;
    [[nodiscard]] const std::string& var() const;
    [[nodiscard]] const Arith& expr() const;
    [[nodiscard]] const Bool& guard() const;
    [[nodiscard]] const Rational& prob() const;
    [[nodiscard]] unsigned bound() const;
    /// Seq: first; If: then; PChoice: left; While/BoundedWhile: body.
    [[nodiscard]] const Program& first() const;
    /// Seq: second; If: else; PChoice: right.
    [[nodiscard]] const Program& second() const;

    /// Node identity, stable for the lifetime of the handle.
    [[nodiscard]] const void* id() const { return node_.get(); }

    friend bool operator==(const Program& a, const Program& b);

    struct Node; // opaque, defined in syntax.cpp

  private:
    explicit Program(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// True when the program contains a While or BoundedWhile anywhere.
bool contains_loop(const Program& p);

/// Replaces every While by its k-bounded unrolling form while^{<k}.
Program bound_loops(const Program& p, unsigned k);

void collect_variables(const Arith& e, std::set<std::string>& out);
void collect_variables(const Bool& b, std::set<std::string>& out);
void collect_variables(const Program& p, std::set<std::string>& out);
std::set<std::string> variables_of(const Program& p);

/// Whether mod, pow or parity predicates occur (operands must be integers).
bool uses_integer_ops(const Arith& e);
bool uses_integer_ops(const Bool& b);
bool uses_integer_ops(const Program& p);

} // namespace covar
