#pragma once

// Pointwise evaluation of the wp / wlp / rt expectation transformers.
//
// Loops are evaluated through their k-bounded unrollings while^{<k}, which
// bottom out in halt. Since halt maps to 0 under wp/rt and to 1 under wlp,
// the same fuel k yields lower bounds for wp/rt and upper bounds for wlp, and
// the results are monotone in k. Loop-free programs are evaluated exactly.

#include <functional>
#include <map>
#include <utility>

#include "covar/expectation.hpp"
#include "covar/state.hpp"
#include "covar/syntax.hpp"

namespace covar {

enum class TransformerKind { WP, WLP, RT };

const char* to_string(TransformerKind kind);

/// A post-expectation given as a function of the final state. Must be pure.
using PostExpectation = std::function<ExtReal(const State&)>;

/// Unrolling depth applied to every syntactic While loop.
struct Fuel {
    unsigned k = 0;
};

/// Value of kind[C](post) at s, with every While replaced by while^{<k}.
/// For WLP, post must take values in [0,1] (DomainError otherwise).
[[nodiscard]] ExtReal transform_eval(TransformerKind kind, const Program& c, const Expectation& post, const State& s,
                                     Fuel fuel);
[[nodiscard]] ExtReal transform_eval(TransformerKind kind, const Program& c, const PostExpectation& post,
                                     const State& s, Fuel fuel);

/// Checks that `loop` is a While whose body is loop-free.
/// Throws PreconditionError otherwise.
void require_simple_loop(const Program& loop);

/// Characteristic functional of a loop while(B){C} applied to X, at s:
///   WP:  F_h(X) = [!B]*h + [B]*wp[C](X)
///   WLP: G(X)   = [!B]   + [B]*wlp[C](X)          (h ignored)
///   RT:  F_h(X) = ([!B]*h + [B]*rt[C](X))[tau/tau+1]
[[nodiscard]] ExtReal char_eval(TransformerKind kind, const Program& loop, const Expectation& h, const Expectation& x,
                                const State& s);
[[nodiscard]] ExtReal char_eval(TransformerKind kind, const Program& loop, const PostExpectation& h,
                                const PostExpectation& x, const State& s);

/// Kleene iterates of the characteristic functional, memoised per (k, state):
/// F_h^k(0)(s) for WP/RT and G^k(1)(s) for WLP.
class CharIterates {
  public:
    CharIterates(TransformerKind kind, Program loop, Expectation h);

    [[nodiscard]] ExtReal at(unsigned k, const State& s);

    [[nodiscard]] TransformerKind kind() const { return kind_; }

  private:
    TransformerKind kind_;
    Program loop_;
    Expectation h_;
    std::map<std::pair<unsigned, State>, ExtReal> memo_;
};

} // namespace covar
