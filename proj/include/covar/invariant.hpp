#pragma once

// Finite-grid checks of the side conditions F(X) <= X, Y <= G(Y) and
// Y(sigma) > 0. A passing check only means "holds on the tested states".

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "covar/expectation.hpp"
#include "covar/state.hpp"
#include "covar/syntax.hpp"

namespace covar {

enum class Verdict { HoldsOnTested, Refuted };

const char* to_string(Verdict v);

struct InvariantCounterexample {
    State state;
    /// Left and right side of the violated inequality lhs <= rhs.
    ExtReal lhs;
    ExtReal rhs;
    std::string reason;
};

struct InvariantReport {
    std::string condition;
    std::size_t states_tested = 0;
    Verdict verdict = Verdict::HoldsOnTested;
    std::vector<InvariantCounterexample> counterexamples;
    /// States where evaluation raised a domain error; not counted as tested.
    std::vector<EvaluationFailure> errors;
};

/// F_h(X) <= X, with F the wp characteristic functional of `loop`.
[[nodiscard]] InvariantReport check_wp_superinvariant(const Program& loop, const Expectation& h,
                                                      const Expectation& x_hat, const std::vector<State>& states);

/// Y <= G(Y) and 0 <= Y <= 1 on every tested state.
[[nodiscard]] InvariantReport check_wlp_subinvariant(const Program& loop, const Expectation& y_hat,
                                                     const std::vector<State>& states);

/// F_{tau^2}(X) <= X, with F the rt characteristic functional.
[[nodiscard]] InvariantReport check_rt_superinvariant(const Program& loop, const Expectation& x_hat,
                                                      const std::vector<State>& states);

/// Y(sigma) > 0.
[[nodiscard]] InvariantReport check_positive(const Expectation& y_hat, const State& sigma);

struct GridOptions {
    /// Inclusive integer box swept for every variable.
    long lo = 0;
    long hi = 10;
    /// Per-variable box overrides.
    std::map<std::string, std::pair<long, long>> ranges;
    std::vector<State> extra;
    std::size_t random_count = 100;
    std::uint64_t seed = 0x5eedULL;
    /// Random states with integer values only; defaults to whether any
    /// parity, mod or power operator is involved.
    std::optional<bool> integer_random;
    /// Largest box product accepted before PreconditionError.
    std::size_t max_box_states = 200000;
};

/// Box product over `vars`, then opts.extra, then pseudo-random states drawn
/// from [lo, 2*hi] (fixed seed). Include "tau" in `vars` for rt checks.
[[nodiscard]] std::vector<State> default_grid(const std::set<std::string>& vars, const GridOptions& opts,
                                              bool integer_ops);

} // namespace covar
