#pragma once

// Enumeration of bound sequences for conditional expected values,
// covariances and run-time variances of while loops. Every entry is an exact
// rational (or +/- infinity); the index k is the Kleene iteration depth.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covar/expectation.hpp"
#include "covar/state.hpp"
#include "covar/syntax.hpp"
#include "covar/transformer.hpp"

namespace covar {

enum class Direction { Upper, Lower };

const char* to_string(Direction d);

struct BoundEntry {
    unsigned k;
    SignedExt value;
};

struct BoundMeta {
    std::string program;
    std::string program_hash;
    State sigma;
    /// (role, rendered expectation), e.g. ("X", "[c != 1]*x*x + ...").
    std::vector<std::pair<std::string, std::string>> invariants;
};

struct BoundSequence {
    Direction direction = Direction::Upper;
    std::string target;
    std::vector<BoundEntry> entries;
    BoundMeta meta;

    /// Upper sequences non-increasing, lower sequences non-decreasing.
    [[nodiscard]] bool is_monotone() const;
};

/// 64-bit FNV-1a of the pretty-printed program, as 16 hex digits.
std::string program_hash(const Program& c);

struct CondExpectedValue {
    /// wp^k(f)(s) / wlp^k(1)(s) with 0/0 = 0; a lower bound ascending in k.
    ExtReal lower;
    ExtReal wp_k;
    ExtReal wlp_k;
};

[[nodiscard]] CondExpectedValue cond_expected_value(const Program& c, const Expectation& f, const State& s, Fuel k);

/// Upper bounds X(s)/Y(s) - F_f^k(0)(s) * F_g^k(0)(s) / G^k(1)(s)^2 for k = 0..kmax.
/// Requires a single while loop with a loop-free body and Y(s) > 0; the
/// superinvariant conditions on X and Y are the caller's responsibility
/// (see invariant.hpp).
[[nodiscard]] BoundSequence covariance_upper_bounds(const Program& loop, const State& s, const Expectation& f,
                                                    const Expectation& g, const Expectation& x_hat,
                                                    const Expectation& y_hat, unsigned kmax);

/// Lower bounds wp^k(f*g)(s)/wlp^k(1)(s) - Xf(s) * Xg(s) / Y(s)^2 for k = 0..kmax,
/// with Xf, Xg superinvariants of F_f, F_g and Y a subinvariant of G.
[[nodiscard]] BoundSequence covariance_lower_bounds(const Program& c, const State& s, const Expectation& f,
                                                    const Expectation& g, const Expectation& xf_hat,
                                                    const Expectation& xg_hat, const Expectation& y_hat,
                                                    unsigned kmax);

/// Upper bounds X(s)/Y(s) - (F_tau^k(0)(s) / G^k(1)(s))^2 on the run-time
/// variance, F being the rt characteristic functional. Requires tau = 0 in s.
[[nodiscard]] BoundSequence rt_variance_upper_bounds(const Program& loop, const State& s, const Expectation& x_hat,
                                                     const Expectation& y_hat, unsigned kmax);

struct VarianceInvariants {
    /// Superinvariant of F_{f*f}; enables upper bounds.
    std::optional<Expectation> second_moment;
    /// Superinvariant of F_f; enables lower bounds.
    std::optional<Expectation> first_moment;
    /// Subinvariant of G.
    Expectation y_hat;
};

struct VarianceReport {
    std::optional<BoundSequence> upper;
    std::optional<BoundSequence> lower;
    /// Set when iteration stopped early because upper - lower < epsilon.
    /// This stopping rule is a heuristic, not a convergence certificate.
    bool heuristic_stop = false;
};

/// Var(f) = Cov(f, f): combines whichever of the two sequences the supplied
/// invariants allow.
[[nodiscard]] VarianceReport variance_report(const Program& c, const State& s, const Expectation& f,
                                             const VarianceInvariants& inv, unsigned kmax,
                                             std::optional<Rational> epsilon = std::nullopt);

} // namespace covar
