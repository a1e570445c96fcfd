#include "covar/sampler.hpp"

#include <cmath>
#include <functional>
#include <utility>
#include <random>
#include <vector>

namespace covar {

const char* to_string(OutcomeKind k) {
    switch (k) {
    case OutcomeKind::Terminated: return "terminated";
    case OutcomeKind::Violated: return "violated";
    case OutcomeKind::Exhausted: return "exhausted";
    case OutcomeKind::Halted: return "halted";
    case OutcomeKind::Error: return "error";
    }
    return "?";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finaliser over (seed, index)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

struct Item {
    const Program* prog;
    // Remaining iterations of a bounded loop; -1 until the loop is entered.
    long left = -1;
};

// Heads with probability p: a 64-bit uniform r satisfies r / 2^64 < p.
bool flip(std::mt19937_64& rng, const Rational& p) {
    mpz_class r;
    std::uint64_t bits = rng();
    mpz_import(r.get_mpz_t(), 1, 1, sizeof bits, 0, 0, &bits);
    mpz_class lhs = r * p.get_den();
    mpz_class rhs = p.get_num();
    rhs <<= 64;
    return lhs < rhs;
}

} // namespace

RunOutcome simulate(const Program& c, const State& sigma, std::uint64_t seed, std::uint64_t step_limit) {
    if (step_limit == 0) {
        throw PreconditionError("step limit must be at least 1");
    }
    std::mt19937_64 rng(seed);
    RunOutcome out;
    out.state = sigma;
    std::vector<Item> stack{{&c}};
    auto finish = [&](OutcomeKind kind) {
        out.kind = kind;
        return out;
    };
    auto tick = [&] {
        out.state = out.state.with_tick();
        ++out.steps;
    };

    try {
        while (!stack.empty()) {
            if (out.transitions >= step_limit) {
                return finish(OutcomeKind::Exhausted);
            }
            ++out.transitions;
            Item it = stack.back();
            stack.pop_back();
            const Program& p = *it.prog;
            switch (p.kind()) {
            case ProgramKind::Skip: tick(); break;
            case ProgramKind::Empty:
            case ProgramKind::Done: break;
            case ProgramKind::Assign:
                out.state = out.state.with(p.var(), eval_arith(p.expr(), out.state));
                tick();
                break;
            case ProgramKind::Diverge:
                out.transitions = step_limit;
                return finish(OutcomeKind::Exhausted);
            case ProgramKind::Halt: return finish(OutcomeKind::Halted);
            case ProgramKind::Observe:
                if (!eval_bool(p.guard(), out.state)) {
                    return finish(OutcomeKind::Violated);
                }
                tick();
                break;
            case ProgramKind::If: {
                bool b = eval_bool(p.guard(), out.state);
                tick();
                stack.push_back({b ? &p.first() : &p.second()});
                break;
            }
            case ProgramKind::PChoice: {
                tick();
                stack.push_back({flip(rng, p.prob()) ? &p.first() : &p.second()});
                break;
            }
            case ProgramKind::While:
            case ProgramKind::BoundedWhile: {
                bool bounded = p.kind() == ProgramKind::BoundedWhile;
                long left = !bounded ? -1 : it.left < 0 ? static_cast<long>(p.bound()) : it.left;
                if (bounded && left == 0) {
                    return finish(OutcomeKind::Halted);
                }
                bool b = eval_bool(p.guard(), out.state);
                tick();
                if (b) {
                    stack.push_back({&p, bounded ? left - 1 : -1});
                    stack.push_back({&p.first()});
                }
                break;
            }
            case ProgramKind::Seq:
                stack.push_back({&p.second()});
                stack.push_back({&p.first()});
                break;
            }
        }
    } catch (const Error& e) {
        out.message = e.what();
        return finish(OutcomeKind::Error);
    }
    return finish(OutcomeKind::Terminated);
}

namespace {

using Extract = std::function<std::pair<Rational, Rational>(const State&)>;

Estimate estimate(const Program& c, const State& sigma, std::uint64_t n, std::uint64_t seed,
                  std::uint64_t step_limit, const Extract& extract) {
    if (n < 2) {
        throw PreconditionError("need at least 2 runs");
    }
    Estimate est;
    est.n = n;
    est.seed = seed;
    std::vector<std::pair<Rational, Rational>> samples;
    samples.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        RunOutcome run = simulate(c, sigma, derive_seed(seed, i), step_limit);
        switch (run.kind) {
        case OutcomeKind::Violated: ++est.rejected; break;
        case OutcomeKind::Exhausted: ++est.exhausted; break;
        case OutcomeKind::Error: ++est.errors; break;
        case OutcomeKind::Halted:
            ++est.halted;
            samples.emplace_back(0, 0);
            break;
        case OutcomeKind::Terminated:
            try {
                samples.push_back(extract(run.state));
            } catch (const Error&) {
                ++est.errors;
            }
            break;
        }
    }
    est.accepted = samples.size();
    if (samples.empty()) {
        return est;
    }

    Rational sf(0), sg(0), sfg(0);
    for (const auto& [f, g] : samples) {
        sf += f;
        sg += g;
        sfg += f * g;
    }
    Rational m(static_cast<unsigned long>(samples.size()));
    Rational mf = sf / m;
    Rational mg = sg / m;
    Rational cov = sfg / m - mf * mg;
    est.value = cov.get_d();

    // Delta method: influence of sample i is (f_i - mf)(g_i - mg) - cov.
    if (samples.size() >= 2) {
        double acc = 0;
        for (const auto& [f, g] : samples) {
            Rational psi = (f - mf) * (g - mg) - cov;
            double d = psi.get_d();
            acc += d * d;
        }
        double k = static_cast<double>(samples.size());
        est.std_error = std::sqrt(acc / (k - 1) / k);
    }
    return est;
}

Rational finite_value(const Expectation& f, const State& s) {
    ExtReal v = evaluate(f, s);
    if (v.is_infinite()) {
        throw DomainError("infinite outcome value");
    }
    return v.finite();
}

} // namespace

Estimate estimate_covariance(const Program& c, const State& sigma, const Expectation& f, const Expectation& g,
                             std::uint64_t n, std::uint64_t seed, std::uint64_t step_limit) {
    return estimate(c, sigma, n, seed, step_limit, [&](const State& s) {
        return std::make_pair(finite_value(f, s), finite_value(g, s));
    });
}

Estimate estimate_rt_variance(const Program& c, const State& sigma, std::uint64_t n, std::uint64_t seed,
                              std::uint64_t step_limit) {
    if (sgn(sigma.tau()) != 0) {
        throw PreconditionError("run-time variance requires tau = 0 in the initial state");
    }
    return estimate(c, sigma, n, seed, step_limit, [](const State& s) { return std::make_pair(s.tau(), s.tau()); });
}

} // namespace covar
