#pragma once

// Reward-annotated operational Markov chain of a program, explored
// breadth-first from an initial configuration. Terminated configurations
// <↓, s> carry reward t(s); every other state has reward 0.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "covar/expectation.hpp"
#include "covar/state.hpp"
#include "covar/syntax.hpp"

namespace covar {

enum class MCStateKind { Running, Terminated, Violated, Sink };

const char* to_string(MCStateKind k);

struct MCState {
    MCStateKind kind;
    /// Program remainder; Program::done() for Terminated, empty for Violated/Sink.
    Program program;
    State state;
    ExtReal reward;
    bool expanded = false;
};

struct MCTransition {
    std::size_t from;
    std::size_t to;
    Rational probability;
};

class OperationalMC {
  public:
    /// States in BFS discovery order; index 0 is the initial configuration.
    [[nodiscard]] const std::vector<MCState>& states() const { return states_; }
    [[nodiscard]] const std::vector<MCTransition>& transitions() const { return transitions_; }
    /// Discovered but unexpanded states.
    [[nodiscard]] std::vector<std::size_t> frontier() const;
    [[nodiscard]] bool closed() const { return frontier().empty(); }
    [[nodiscard]] std::size_t budget_used() const { return budget_used_; }

    /// Same chain with rewards recomputed for another post-expectation.
    [[nodiscard]] OperationalMC with_rewards(const Expectation& t) const;

  private:
    friend OperationalMC build_mc(const Program&, const State&, const Expectation&, std::size_t);
    std::vector<MCState> states_;
    std::vector<MCTransition> transitions_;
    std::size_t budget_used_ = 0;
};

/// Expands at most `budget` states. Throws PreconditionError when budget is 0.
[[nodiscard]] OperationalMC build_mc(const Program& c, const State& sigma, const Expectation& t, std::size_t budget);

/// Exact value when `exact` is set; otherwise `lower` is a lower bound and
/// the upper bound is +infinity (truncated exploration).
struct RewardResult {
    bool truncated = false;
    ExtReal lower;
    std::optional<ExtReal> exact;
    /// Probability of eventually reaching sink / the violation state
    /// (lower bounds when truncated).
    ExtReal reach_sink;
    ExtReal reach_violation;
};

/// Expected reward collected before reaching sink; infinity unless sink is
/// reached with probability 1.
[[nodiscard]] RewardResult expected_reward(const OperationalMC& m);

/// Expected reward on runs that never fail an observation, divided by the
/// probability of not failing one (0/0 = 0).
[[nodiscard]] RewardResult cond_expected_reward(const OperationalMC& m);

enum class ExportFormat { Dot, Json };

[[nodiscard]] std::string export_mc(const OperationalMC& m, ExportFormat format);

} // namespace covar
