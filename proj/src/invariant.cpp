#include "covar/invariant.hpp"

#include <functional>
#include <random>

#include "covar/parser.hpp"
#include "covar/transformer.hpp"

namespace covar {

const char* to_string(Verdict v) { return v == Verdict::HoldsOnTested ? "holds-on-tested" : "refuted"; }

namespace {

using SideFn = std::function<std::optional<InvariantCounterexample>(const State&)>;

InvariantReport sweep(std::string condition, const std::vector<State>& states, const SideFn& check) {
    if (states.empty()) {
        throw PreconditionError("no states to test");
    }
    InvariantReport report;
    report.condition = std::move(condition);
    for (const State& s : states) {
        try {
            if (auto cex = check(s)) {
                report.counterexamples.push_back(std::move(*cex));
            }
            ++report.states_tested;
        } catch (const DomainError& e) {
            report.errors.push_back({s, e.what()});
        }
    }
    report.verdict = report.counterexamples.empty() ? Verdict::HoldsOnTested : Verdict::Refuted;
    return report;
}

std::optional<InvariantCounterexample> leq(const State& s, ExtReal lhs, ExtReal rhs, const char* reason) {
    if (lhs <= rhs) {
        return std::nullopt;
    }
    return InvariantCounterexample{s, std::move(lhs), std::move(rhs), reason};
}

Expectation tau_squared() {
    Expectation t = Expectation::variable(std::string(kTau));
    return t * t;
}

} // namespace

InvariantReport check_wp_superinvariant(const Program& loop, const Expectation& h, const Expectation& x_hat,
                                        const std::vector<State>& states) {
    require_simple_loop(loop);
    return sweep("F_h(X) <= X with h = " + to_string(h), states, [&](const State& s) {
        return leq(s, char_eval(TransformerKind::WP, loop, h, x_hat, s), evaluate(x_hat, s), "F(X) > X");
    });
}

InvariantReport check_wlp_subinvariant(const Program& loop, const Expectation& y_hat,
                                       const std::vector<State>& states) {
    require_simple_loop(loop);
    return sweep("Y <= G(Y)", states, [&](const State& s) -> std::optional<InvariantCounterexample> {
        ExtReal y = evaluate(y_hat, s);
        if (y > ExtReal::one()) {
            return InvariantCounterexample{s, y, ExtReal::one(), "Y > 1"};
        }
        return leq(s, y, char_eval(TransformerKind::WLP, loop, Expectation::one(), y_hat, s), "Y > G(Y)");
    });
}

InvariantReport check_rt_superinvariant(const Program& loop, const Expectation& x_hat,
                                        const std::vector<State>& states) {
    require_simple_loop(loop);
    Expectation h = tau_squared();
    return sweep("F_{tau^2}(X) <= X", states, [&](const State& s) {
        return leq(s, char_eval(TransformerKind::RT, loop, h, x_hat, s), evaluate(x_hat, s), "F(X) > X");
    });
}

InvariantReport check_positive(const Expectation& y_hat, const State& sigma) {
    return sweep("Y(sigma) > 0", {sigma}, [&](const State& s) -> std::optional<InvariantCounterexample> {
        ExtReal y = evaluate(y_hat, s);
        if (y.is_zero()) {
            return InvariantCounterexample{s, y, ExtReal::zero(), "Y(sigma) = 0"};
        }
        return std::nullopt;
    });
}

std::vector<State> default_grid(const std::set<std::string>& vars, const GridOptions& opts, bool integer_ops) {
    std::vector<std::string> names(vars.begin(), vars.end());
    std::vector<std::pair<long, long>> box;
    std::size_t total = 1;
    for (const auto& name : names) {
        auto it = opts.ranges.find(name);
        auto range = it != opts.ranges.end() ? it->second : std::make_pair(opts.lo, opts.hi);
        if (range.first > range.second) {
            throw PreconditionError("empty range for " + name);
        }
        box.push_back(range);
        total *= static_cast<std::size_t>(range.second - range.first + 1);
        if (total > opts.max_box_states) {
            throw PreconditionError("grid box exceeds " + std::to_string(opts.max_box_states) +
                                    " states; narrow the ranges");
        }
    }

    std::vector<State> out;
    out.reserve(total + opts.extra.size() + opts.random_count);
    std::vector<long> cur;
    for (const auto& r : box) {
        cur.push_back(r.first);
    }
    for (std::size_t n = 0; n < total; ++n) {
        State s;
        for (std::size_t i = 0; i < names.size(); ++i) {
            s.set(names[i], Rational(cur[i]));
        }
        out.push_back(std::move(s));
        for (std::size_t i = names.size(); i-- > 0;) {
            if (++cur[i] <= box[i].second) {
                break;
            }
            cur[i] = box[i].first;
        }
    }

    for (const State& s : opts.extra) {
        out.push_back(s.completed(vars));
    }

    bool integers = opts.integer_random.value_or(integer_ops);
    std::mt19937_64 rng(opts.seed);
    for (std::size_t n = 0; n < opts.random_count; ++n) {
        State s;
        for (std::size_t i = 0; i < names.size(); ++i) {
            long lo = box[i].first;
            long hi = std::max(lo, 2 * box[i].second);
            long den = integers ? 1 : std::uniform_int_distribution<long>(1, 4)(rng);
            long num = std::uniform_int_distribution<long>(lo * den, hi * den)(rng);
            Rational q(num, den);
            q.canonicalize();
            s.set(names[i], q);
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace covar
