#pragma once

// Monte Carlo execution with rejection of runs that fail an observation.

#include <cstdint>
#include <optional>
#include <string>

#include "covar/expectation.hpp"
#include "covar/state.hpp"
#include "covar/syntax.hpp"

namespace covar {

enum class OutcomeKind { Terminated, Violated, Exhausted, Halted, Error };

const char* to_string(OutcomeKind k);

struct RunOutcome {
    OutcomeKind kind = OutcomeKind::Terminated;
    /// Final state for Terminated (tau holds the run-time), last state otherwise.
    State state;
    /// Time units consumed, i.e. the increase of tau.
    std::uint64_t steps = 0;
    /// Small-step transitions taken; bounded by the step limit.
    std::uint64_t transitions = 0;
    std::string message;
};

/// One run. Deterministic in `seed`; throws PreconditionError for step_limit 0.
[[nodiscard]] RunOutcome simulate(const Program& c, const State& sigma, std::uint64_t seed, std::uint64_t step_limit);

/// Seed of the i-th run of an estimate.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct Estimate {
    /// Unset when no run was accepted.
    std::optional<double> value;
    std::optional<double> std_error;
    std::uint64_t n = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t exhausted = 0;
    /// Runs ending in halt; counted as accepted with every outcome value 0.
    std::uint64_t halted = 0;
    std::uint64_t errors = 0;
    std::uint64_t seed = 0;
};

/// Plug-in covariance E(fg) - E(f)E(g) over accepted runs, with a delta-method
/// standard error. Exhausted and errored runs are excluded and counted.
[[nodiscard]] Estimate estimate_covariance(const Program& c, const State& sigma, const Expectation& f,
                                           const Expectation& g, std::uint64_t n, std::uint64_t seed,
                                           std::uint64_t step_limit);

/// Same with f = g = run-time. Requires tau = 0 in sigma.
[[nodiscard]] Estimate estimate_rt_variance(const Program& c, const State& sigma, std::uint64_t n,
                                            std::uint64_t seed, std::uint64_t step_limit);

} // namespace covar
