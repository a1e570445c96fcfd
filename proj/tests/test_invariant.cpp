#include <catch_amalgamated.hpp>

#include "covar/invariant.hpp"
#include "covar/parser.hpp"
#include "covar/transformer.hpp"
#include "support.hpp"

using namespace covar;
using covar::testing::fixture_expectation;
using covar::testing::fixture_program;
using covar::testing::make_state;
using covar::testing::q;

namespace {

std::vector<State> example_grid(long xmax) {
    std::vector<State> grid;
    for (long c = 0; c <= 1; ++c) {
        for (long x = 0; x <= xmax; ++x) {
            grid.push_back(make_state({{"c", c}, {"x", x}}));
        }
    }
    return grid;
}

Expectation x_squared() { return parse_expectation("x*x"); }

} // namespace

TEST_CASE("example invariants hold on the grid") {
    Program loop = fixture_program("geo_odd.cpgcl");
    auto grid = example_grid(50);
    InvariantReport x = check_wp_superinvariant(loop, x_squared(), fixture_expectation("Xhat.exp"), grid);
    CHECK(x.verdict == Verdict::HoldsOnTested);
    CHECK(x.states_tested == grid.size());
    CHECK(x.errors.empty());

    InvariantReport y = check_wlp_subinvariant(loop, fixture_expectation("Yhat.exp"), grid);
    CHECK(y.verdict == Verdict::HoldsOnTested);

    InvariantReport m =
        check_wp_superinvariant(loop, Expectation::variable("x"), fixture_expectation("Xhat_mean.exp"), grid);
    CHECK(m.verdict == Verdict::HoldsOnTested);
}

TEST_CASE("example invariants hold on the default grid") {
    Program loop = fixture_program("geo_odd.cpgcl");
    auto grid = default_grid({"c", "x"}, GridOptions{}, uses_integer_ops(loop));
    CHECK(grid.size() == 121 + 100);
    CHECK(check_wp_superinvariant(loop, x_squared(), fixture_expectation("Xhat.exp"), grid).verdict ==
          Verdict::HoldsOnTested);
    CHECK(check_wlp_subinvariant(loop, fixture_expectation("Yhat.exp"), grid).verdict == Verdict::HoldsOnTested);
}

TEST_CASE("the example invariants as printed with [c != 0] are refuted") {
    Program loop = fixture_program("geo_odd.cpgcl");
    auto grid = example_grid(10);
    Expectation x_lit = parse_expectation(
        "[c != 0]*x^2 + [c = 1]*([even(x)]*1/27*(9*x^2 + 30*x + 41) + [odd(x)]*2/27*(9*x^2 + 12*x + 20))");
    Expectation y_lit = parse_expectation("[c != 0] + [c = 1]*([even(x)]*1/3 + [odd(x)]*2/3)");
    CHECK(check_wp_superinvariant(loop, x_squared(), x_lit, grid).verdict == Verdict::Refuted);
    InvariantReport y = check_wlp_subinvariant(loop, y_lit, grid);
    CHECK(y.verdict == Verdict::Refuted);
}

TEST_CASE("corrupting 41 into 40 is caught at the initial state") {
    Program loop = fixture_program("geo_odd.cpgcl");
    Expectation bad = parse_expectation(covar::testing::corrupted_invariants()[0].text);
    State s = make_state({{"c", 1}, {"x", 0}});
    InvariantReport r = check_wp_superinvariant(loop, x_squared(), bad, {s});
    REQUIRE(r.verdict == Verdict::Refuted);
    REQUIRE(r.counterexamples.size() == 1);
    CHECK(r.counterexamples[0].lhs == ExtReal(q("41/27")));
    CHECK(r.counterexamples[0].rhs == ExtReal(q("40/27")));
}

TEST_CASE("every corrupted invariant is refuted with a re-verifiable counterexample") {
    Program loop = fixture_program("geo_odd.cpgcl");
    auto grid = default_grid({"c", "x"}, GridOptions{}, true);
    for (const auto& bad : covar::testing::corrupted_invariants()) {
        INFO(bad.name);
        Expectation e = parse_expectation(bad.text);
        bool wp = std::string(bad.condition) == "wp";
        InvariantReport r =
            wp ? check_wp_superinvariant(loop, x_squared(), e, grid) : check_wlp_subinvariant(loop, e, grid);
        REQUIRE(r.verdict == Verdict::Refuted);
        for (const auto& cex : r.counterexamples) {
            ExtReal lhs = wp ? char_eval(TransformerKind::WP, loop, x_squared(), e, cex.state) : evaluate(e, cex.state);
            ExtReal rhs = wp ? evaluate(e, cex.state)
                             : char_eval(TransformerKind::WLP, loop, Expectation::one(), e, cex.state);
            CHECK(lhs == cex.lhs);
            CHECK(rhs == cex.rhs);
            CHECK(rhs < lhs);
        }
    }
}

TEST_CASE("trivial invariants") {
    Program loop = fixture_program("geo_odd.cpgcl");
    auto grid = example_grid(10);
    CHECK(check_wp_superinvariant(loop, x_squared(), Expectation::infinity(), grid).verdict ==
          Verdict::HoldsOnTested);
    CHECK(check_wlp_subinvariant(loop, Expectation::zero(), grid).verdict == Verdict::HoldsOnTested);
    CHECK(check_rt_superinvariant(loop, Expectation::infinity(), grid).verdict == Verdict::HoldsOnTested);

    InvariantReport y1 = check_wlp_subinvariant(loop, Expectation::one(), {make_state({{"c", 1}, {"x", 0}})});
    REQUIRE(y1.verdict == Verdict::Refuted);
    CHECK(y1.counterexamples[0].rhs == ExtReal(q("1/2")));
}

TEST_CASE("rt invariants") {
    Program geo = fixture_program("geometric_rt.cpgcl");
    auto grid = default_grid({"c", "tau"}, GridOptions{}, false);
    CHECK(check_rt_superinvariant(geo, fixture_expectation("geometric_rt_Xhat.exp"), grid).verdict ==
          Verdict::HoldsOnTested);
    CHECK(check_rt_superinvariant(geo, Expectation::zero(), grid).verdict == Verdict::Refuted);

    Program countdown = fixture_program("countdown.cpgcl");
    GridOptions ints;
    ints.lo = -3;
    ints.integer_random = true;
    auto igrid = default_grid({"i", "tau"}, ints, false);
    CHECK(check_rt_superinvariant(countdown, fixture_expectation("countdown_Xhat.exp"), igrid).verdict ==
          Verdict::HoldsOnTested);
    // The closed form assumes integer counters; a fractional i runs one more iteration.
    InvariantReport frac =
        check_rt_superinvariant(countdown, fixture_expectation("countdown_Xhat.exp"), {State().with("i", q("1/2"))});
    CHECK(frac.verdict == Verdict::Refuted);
}

TEST_CASE("raising an invariant keeps it passing") {
    Program loop = fixture_program("geo_odd.cpgcl");
    auto grid = example_grid(20);
    Expectation x_hat = fixture_expectation("Xhat.exp");
    Expectation bigger = x_hat + parse_expectation("[c = 1]*inf");
    CHECK(check_wp_superinvariant(loop, x_squared(), bigger, grid).verdict == Verdict::HoldsOnTested);
}

TEST_CASE("positivity and evaluation errors") {
    CHECK(check_positive(fixture_expectation("Yhat.exp"), make_state({{"c", 1}, {"x", 0}})).verdict ==
          Verdict::HoldsOnTested);
    CHECK(check_positive(parse_expectation("[c = 0]"), make_state({{"c", 1}})).verdict == Verdict::Refuted);

    Program loop = fixture_program("geo_odd.cpgcl");
    InvariantReport r = check_wlp_subinvariant(loop, fixture_expectation("Yhat.exp"),
                                               {make_state({{"c", 1}, {"x", 1}}), State().with("c", 1).with("x", q("1/2"))});
    CHECK(r.states_tested == 1);
    CHECK(r.errors.size() == 1);
    CHECK(r.verdict == Verdict::HoldsOnTested);
}

TEST_CASE("default grid layout") {
    GridOptions opts;
    opts.ranges["c"] = {0, 1};
    opts.random_count = 5;
    opts.extra = {make_state({{"c", 7}})};
    auto grid = default_grid({"c", "x"}, opts, false);
    CHECK(grid.size() == 2 * 11 + 1 + 5);
    CHECK(grid[0] == make_state({{"c", 0}, {"x", 0}}));
    CHECK(grid[22] == make_state({{"c", 7}, {"x", 0}}));
    CHECK(default_grid({"c", "x"}, opts, false) == grid);
    opts.max_box_states = 10;
    CHECK_THROWS_AS(default_grid({"c", "x"}, opts, false), PreconditionError);
}
