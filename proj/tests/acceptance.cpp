// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "covar/bounds.hpp"
#include "covar/invariant.hpp"
#include "covar/json_io.hpp"
#include "covar/operational.hpp"
#include "covar/parser.hpp"
#include "covar/sampler.hpp"
#include "covar/transformer.hpp"
#include "support.hpp"

using namespace covar;
using covar::testing::fixture_expectation;
using covar::testing::fixture_program;
using covar::testing::make_state;
using covar::testing::q;

namespace {

// Pinned tolerances and budgets.
const Rational kLimitTolerance(1, 1000000);
constexpr double kGoldenSeconds = 1.0;
constexpr double kLimitSeconds = 5.0;
constexpr double kCorrespondenceSeconds = 10.0;
constexpr double kSamplerSeconds = 30.0;
constexpr unsigned kLimitK = 60;
constexpr std::size_t kCorpusMin = 20;
constexpr int kMonotoneCases = 1000;
constexpr int kRoundTripCases = 1000;
constexpr std::size_t kSandwichBudget = 2048;
constexpr unsigned kSandwichK = 30;
constexpr std::uint64_t kSamplerRuns = 100000;
constexpr std::uint64_t kSamplerSeed = 20240611;
constexpr std::uint64_t kStepLimit = 100000;
constexpr double kSamplerSigmas = 3.0;

struct Result {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Rational absq(const Rational& r) { return abs(r); }

struct Example {
    Program loop = fixture_program("geo_odd.cpgcl");
    Expectation x = Expectation::variable("x");
    Expectation x_hat = fixture_expectation("Xhat.exp");
    Expectation y_hat = fixture_expectation("Yhat.exp");
    Expectation mean_hat = fixture_expectation("Xhat_mean.exp");
    State sigma = make_state({{"c", 1}, {"x", 0}});
};

Result criterion1() {
    auto t0 = Clock::now();
    Example ex;
    BoundSequence b = covariance_upper_bounds(ex.loop, ex.sigma, ex.x, ex.x, ex.x_hat, ex.y_hat, 3);
    double t = seconds_since(t0);
    Result r;
    const char* want[] = {"41/9", "41/9", "37/9"};
    std::string got;
    for (unsigned k = 1; k <= 3; ++k) {
        got += (k > 1 ? ", " : "") + b.entries[k].value.str();
        r.pass = r.pass && b.entries[k].value == SignedExt(q(want[k - 1]));
    }
    r.pass = r.pass && t < kGoldenSeconds;
    r.detail = "upper k=1..3: " + got + " (" + std::to_string(t) + " s)";
    return r;
}

Result criterion2() {
    auto t0 = Clock::now();
    Example ex;
    BoundSequence b = covariance_upper_bounds(ex.loop, ex.sigma, ex.x, ex.x, ex.x_hat, ex.y_hat, kLimitK);
    CondExpectedValue e = cond_expected_value(ex.loop, ex.x, ex.sigma, Fuel{kLimitK});
    double t = seconds_since(t0);
    Rational du = absq(b.entries.back().value.finite() - q("16/9"));
    Rational de = absq(e.lower.finite() - q("5/3"));
    Result r;
    r.pass = du < kLimitTolerance && de < kLimitTolerance && t < kLimitSeconds;
    char buf[160];
    std::snprintf(buf, sizeof buf, "|upper[60]-16/9| = %.3g, |E[x]-5/3| = %.3g (%.3f s)", du.get_d(), de.get_d(), t);
    r.detail = buf;
    return r;
}

Result criterion3() {
    Result r;
    std::string detail;
    for (const char* p : {"0", "1/4", "1/2", "3/4", "1"}) {
        Program c = parse_program(std::string("v := 0; {skip} [") + p + "] {diverge}; v := 1");
        VarianceReport rep = variance_report(c, make_state({{"v", 0}}), Expectation::variable("v"),
                                             VarianceInvariants{std::nullopt, std::nullopt, Expectation::one()}, 0);
        Rational pr = q(p);
        SignedExt want(Rational(pr - pr * pr));
        bool ok = rep.upper->entries[0].value == want && rep.lower->entries[0].value == want;
        r.pass = r.pass && ok;
        detail += std::string(detail.empty() ? "" : ", ") + "p=" + p + ": " + rep.upper->entries[0].value.str();
    }
    r.detail = "Var(v) " + detail;
    return r;
}

Result criterion4() {
    auto t0 = Clock::now();
    Result r;
    std::size_t closed = 0;
    std::size_t agree = 0;
    for (const auto& e : covar::testing::correspondence_corpus()) {
        Program c = covar::testing::corpus_program(e);
        State s = parse_state(e.state);
        Expectation t = parse_expectation(e.reward);
        OperationalMC m = build_mc(c, s, t, 100000);
        if (!m.closed()) {
            continue;
        }
        ++closed;
        ExtReal rt = transform_eval(TransformerKind::RT, c, t, s, Fuel{0});
        ExtReal wlp = transform_eval(TransformerKind::WLP, c, Expectation::one(), s, Fuel{0});
        if (*cond_expected_reward(m).exact == divide(rt, wlp)) {
            ++agree;
        } else {
            r.detail += std::string(" mismatch:") + e.name;
        }
    }
    double t = seconds_since(t0);
    r.pass = closed >= kCorpusMin && agree == closed && t < kCorrespondenceSeconds;
    r.detail = std::to_string(agree) + "/" + std::to_string(closed) + " closed programs agree (" +
               std::to_string(t) + " s)" + r.detail;
    return r;
}

Result criterion5() {
    Result r;
    covar::testing::AstGen gen(99991, {.max_depth = 3, .integer_safe = true});
    const std::vector<Expectation> posts{Expectation::one(), parse_expectation("[x > 0]*x"),
                                         parse_expectation("x*x + [c = 1]")};
    const std::vector<Expectation> liberal{Expectation::one(), parse_expectation("[y > 0]"),
                                           parse_expectation("[c = 1]*1/2")};
    int violations = 0;
    for (int i = 0; i < kMonotoneCases; ++i) {
        Program c = gen.program();
        State s = make_state({{"x", gen.pick(-3, 5)}, {"y", gen.pick(-3, 5)}, {"c", gen.pick(0, 2)}});
        unsigned k = static_cast<unsigned>(gen.pick(0, 6));
        const Expectation& f = posts[static_cast<std::size_t>(gen.pick(0, 2))];
        const Expectation& l = liberal[static_cast<std::size_t>(gen.pick(0, 2))];
        auto eval = [&](TransformerKind kind, const Expectation& post, unsigned fuel) {
            return transform_eval(kind, c, post, s, Fuel{fuel});
        };
        bool ok = eval(TransformerKind::WP, f, k) <= eval(TransformerKind::WP, f, k + 1) &&
                  eval(TransformerKind::RT, f, k) <= eval(TransformerKind::RT, f, k + 1) &&
                  eval(TransformerKind::WLP, l, k + 1) <= eval(TransformerKind::WLP, l, k);
        violations += ok ? 0 : 1;
    }

    // Bound sequences from random initial states of the fixture loops.
    Example ex;
    Program geo = fixture_program("geometric_rt.cpgcl");
    Expectation geo_x = fixture_expectation("geometric_rt_Xhat.exp");
    int sequences = 0;
    for (int i = 0; i < 40; ++i) {
        State s = make_state({{"c", gen.pick(0, 1)}, {"x", gen.pick(0, 8)}});
        auto up = covariance_upper_bounds(ex.loop, s, ex.x, ex.x, ex.x_hat, ex.y_hat, 12);
        auto lo = covariance_lower_bounds(ex.loop, s, ex.x, ex.x, ex.mean_hat, ex.mean_hat, ex.y_hat, 12);
        auto rt = rt_variance_upper_bounds(geo, make_state({{"c", gen.pick(0, 1)}}), geo_x, Expectation::one(), 12);
        violations += (up.is_monotone() ? 0 : 1) + (lo.is_monotone() ? 0 : 1) + (rt.is_monotone() ? 0 : 1);
        sequences += 3;
    }
    r.pass = violations == 0;
    r.detail = std::to_string(kMonotoneCases) + " transformer cases and " + std::to_string(sequences) +
               " bound sequences, " + std::to_string(violations) + " violations";
    return r;
}

Rational op_variance(const Program& c, const State& s, const Expectation& f) {
    OperationalMC m = build_mc(c, s, f * f, kSandwichBudget);
    Rational m2 = cond_expected_reward(m).lower.finite();
    Rational m1 = cond_expected_reward(m.with_rewards(f)).lower.finite();
    return m2 - m1 * m1;
}

Result criterion6() {
    Result r;
    int checked = 0;
    auto bracket = [&](const char* name, const BoundSequence* lo, const BoundSequence& up, const Rational& op) {
        for (std::size_t k = 0; k < up.entries.size(); ++k) {
            bool ok = SignedExt(op) <= up.entries[k].value;
            if (lo != nullptr) {
                ok = ok && lo->entries[k].value <= up.entries[k].value && lo->entries[k].value <= SignedExt(op);
            }
            if (!ok) {
                r.pass = false;
                r.detail += std::string(" fail:") + name + "@k=" + std::to_string(k);
            }
            ++checked;
        }
    };

    Example ex;
    {
        Rational op = op_variance(ex.loop, ex.sigma, ex.x);
        auto up = covariance_upper_bounds(ex.loop, ex.sigma, ex.x, ex.x, ex.x_hat, ex.y_hat, kSandwichK);
        auto lo = covariance_lower_bounds(ex.loop, ex.sigma, ex.x, ex.x, ex.mean_hat, ex.mean_hat, ex.y_hat,
                                          kSandwichK);
        bracket("geo_odd", &lo, up, op);
    }
    {
        Program c = parse_program("while (c = 1) {{c := 0} [1/2] {x := x + 1}}");
        Expectation x2 = parse_expectation("[c != 1]*x^2 + [c = 1]*(x^2 + 2*x + 3)");
        Expectation x1 = parse_expectation("[c != 1]*x + [c = 1]*(x + 1)");
        State s = make_state({{"c", 1}, {"x", 2}});
        Rational op = op_variance(c, s, ex.x);
        auto up = covariance_upper_bounds(c, s, ex.x, ex.x, x2, Expectation::one(), kSandwichK);
        auto lo = covariance_lower_bounds(c, s, ex.x, ex.x, x1, x1, Expectation::one(), kSandwichK);
        bracket("geometric", &lo, up, op);
    }
    {
        Program c = fixture_program("geometric_rt.cpgcl");
        State s = make_state({{"c", 1}});
        Rational op = op_variance(c, s, Expectation::variable("tau"));
        auto up = rt_variance_upper_bounds(c, s, fixture_expectation("geometric_rt_Xhat.exp"), Expectation::one(),
                                           kSandwichK);
        bracket("geometric-rt", nullptr, up, op);
    }
    {
        Program c = fixture_program("countdown.cpgcl");
        State s = make_state({{"i", 4}});
        Rational op = op_variance(c, s, Expectation::variable("tau"));
        auto up = rt_variance_upper_bounds(c, s, fixture_expectation("countdown_Xhat.exp"), Expectation::one(),
                                           kSandwichK);
        bracket("countdown-rt", nullptr, up, op);
    }
    r.detail = std::to_string(checked) + " (fixture, k) pairs bracket the chain value" + r.detail;
    return r;
}

Result criterion7() {
    Result r;
    Example ex;
    auto grid = default_grid({"c", "x"}, GridOptions{}, uses_integer_ops(ex.loop));
    Expectation x2 = parse_expectation("x*x");
    bool good = check_wp_superinvariant(ex.loop, x2, ex.x_hat, grid).verdict == Verdict::HoldsOnTested &&
                check_wlp_subinvariant(ex.loop, ex.y_hat, grid).verdict == Verdict::HoldsOnTested &&
                check_positive(ex.y_hat, ex.sigma).verdict == Verdict::HoldsOnTested;
    int refuted = 0;
    for (const auto& bad : covar::testing::corrupted_invariants()) {
        Expectation e = parse_expectation(bad.text);
        InvariantReport rep = std::string(bad.condition) == "wp" ? check_wp_superinvariant(ex.loop, x2, e, grid)
                                                                 : check_wlp_subinvariant(ex.loop, e, grid);
        if (rep.verdict == Verdict::Refuted && !rep.counterexamples.empty()) {
            ++refuted;
            r.detail += std::string("; ") + bad.name + " at " + rep.counterexamples[0].state.str();
        }
    }
    r.pass = good && refuted == 5;
    r.detail = std::string(good ? "X, Y hold on " : "X, Y FAIL on ") + std::to_string(grid.size()) + " states, " +
               std::to_string(refuted) + "/5 corruptions refuted" + r.detail;
    return r;
}

Result criterion8() {
    auto t0 = Clock::now();
    Result r;
    Example ex;
    Estimate cov = estimate_covariance(ex.loop, ex.sigma, ex.x, ex.x, kSamplerRuns, kSamplerSeed, kStepLimit);
    Estimate rtv = estimate_rt_variance(fixture_program("two_path.cpgcl"), State(), kSamplerRuns, kSamplerSeed,
                                        kStepLimit);
    double t = seconds_since(t0);
    double zc = std::abs(*cov.value - 16.0 / 9.0) / *cov.std_error;
    double zr = std::abs(*rtv.value - 0.25) / *rtv.std_error;
    r.pass = zc <= kSamplerSigmas && zr <= kSamplerSigmas && t < kSamplerSeconds;
    char buf[200];
    std::snprintf(buf, sizeof buf, "cov %.5f (se %.5f, %.2f se from 16/9), rtvar %.5f (se %.5f, %.2f se) (%.2f s)",
                  *cov.value, *cov.std_error, zc, *rtv.value, *rtv.std_error, zr, t);
    r.detail = buf;
    return r;
}

Result criterion9() {
    Result r;
    covar::testing::AstGen gen(8675309, {});
    int failures = 0;
    for (int i = 0; i < kRoundTripCases; ++i) {
        Program p = gen.program();
        if (!(parse_program(pretty_print(p)) == p)) {
            ++failures;
        }
    }
    Example ex;
    OperationalMC a = build_mc(ex.loop, ex.sigma, ex.x, 300);
    OperationalMC b = build_mc(ex.loop, ex.sigma, ex.x, 300);
    bool exports = export_mc(a, ExportFormat::Dot) == export_mc(b, ExportFormat::Dot) &&
                   export_mc(a, ExportFormat::Json) == export_mc(b, ExportFormat::Json);
    Estimate e1 = estimate_covariance(ex.loop, ex.sigma, ex.x, ex.x, 5000, 7, kStepLimit);
    Estimate e2 = estimate_covariance(ex.loop, ex.sigma, ex.x, ex.x, 5000, 7, kStepLimit);
    bool sampler = to_json(e1).dump() == to_json(e2).dump();
    r.pass = failures == 0 && exports && sampler;
    r.detail = std::to_string(kRoundTripCases - failures) + "/" + std::to_string(kRoundTripCases) +
               " round trips, exports " + (exports ? "identical" : "DIFFER") + ", estimates " +
               (sampler ? "identical" : "DIFFER");
    return r;
}

} // namespace

int main() {
    std::vector<std::pair<const char*, std::function<Result()>>> criteria{
        {"golden covariance sequence", criterion1},
        {"limits 16/9 and 5/3", criterion2},
        {"variance parabola p - p^2", criterion3},
        {"chain vs rt/wlp correspondence", criterion4},
        {"monotone iterates and bounds", criterion5},
        {"sandwich around the chain value", criterion6},
        {"invariant checker sensitivity", criterion7},
        {"sampler statistics", criterion8},
        {"round trip and determinism", criterion9},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Result res;
        try {
            res = run();
        } catch (const std::exception& e) {
            res = Result{false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d %s  %s: %s\n", index, res.pass ? "PASS" : "FAIL", name, res.detail.c_str());
        std::fflush(stdout);
        failed += res.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", index - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
