#include <catch_amalgamated.hpp>

#include "covar/parser.hpp"
#include "covar/syntax.hpp"
#include "support.hpp"

using namespace covar;
using covar::testing::q;

TEST_CASE("parse the conditioned geometric loop") {
    Program p = parse_program("while (c=1){ {c:=0} [0.5] {x:=x+1}; observe(c=1 || odd(x)) }");
    REQUIRE(p.kind() == ProgramKind::While);
    const Program& body = p.first();
    REQUIRE(body.kind() == ProgramKind::Seq);
    REQUIRE(body.first().kind() == ProgramKind::PChoice);
    CHECK(body.first().prob() == q("1/2"));
    CHECK(body.second().kind() == ProgramKind::Observe);
}

TEST_CASE("basic statements") {
    CHECK(parse_program("skip") == Program::skip());
    CHECK(parse_program("empty") == Program::empty_stmt());
    CHECK(parse_program("diverge") == Program::diverge());
    CHECK(parse_program("halt") == Program::halt());
    CHECK(parse_program("x := 1; x := 2") ==
          Program::seq(Program::assign("x", Arith::literal(1)), Program::assign("x", Arith::literal(2))));
}

TEST_CASE("sequencing is right-associative") {
    Program p = parse_program("skip; empty; halt");
    REQUIRE(p.kind() == ProgramKind::Seq);
    CHECK(p.first() == Program::skip());
    CHECK(p.second() == Program::seq(Program::empty_stmt(), Program::halt()));
}

TEST_CASE("probabilities parse to exact rationals") {
    CHECK(parse_program("{skip} [0.25] {empty}").prob() == q("1/4"));
    CHECK(parse_program("{skip} [3/4] {empty}").prob() == q("3/4"));
    CHECK(parse_program("{skip} [1] {empty}").prob() == 1);
}

TEST_CASE("else branch is optional") {
    Program p = parse_program("if (x > 0) {x := 0}");
    CHECK(p.second() == Program::empty_stmt());
}

TEST_CASE("parse errors carry line and column") {
    try {
        (void)parse_program("skip;\nx := ");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() >= 5);
    }
    CHECK_THROWS_AS(parse_program("{skip} [3/2] {skip}"), ParseError);
    CHECK_THROWS_AS(parse_program("{skip} [1.5] {skip}"), ParseError);
    CHECK_THROWS_AS(parse_program("tau := 1"), ParseError);
    CHECK_THROWS_AS(parse_program("x := tau"), ParseError);
    CHECK_THROWS_AS(parse_program("x := 1 $"), ParseError);
    CHECK_THROWS_AS(parse_program("while (x > 0) skip"), ParseError);
    CHECK_THROWS_AS(parse_program(""), ParseError);
}

TEST_CASE("pretty_print renders canonical text") {
    CHECK(pretty_print(Program::skip()) == "skip");
    Program pc = Program::pchoice(Program::assign("c", Arith::literal(0)), q("1/2"),
                                  Program::assign("x", Arith::variable("x") + Arith::literal(1)));
    CHECK(pretty_print(pc) == "{c := 0} [1/2] {x := x+1}");
}

TEST_CASE("round trip on the geometric loop listing") {
    std::string src = covar::testing::read_fixture("geo_odd.cpgcl");
    Program p = parse_program(src);
    CHECK(parse_program(pretty_print(p)) == p);
}

TEST_CASE("round trip on random syntax trees") {
    covar::testing::AstGen gen(20240611, {});
    for (int i = 0; i < 1000; ++i) {
        Program p = gen.program();
        std::string text = pretty_print(p);
        INFO(text);
        Program back = parse_program(text);
        CHECK(back == p);
    }
}

TEST_CASE("bound_loops replaces every loop") {
    Program p = parse_program("while (x > 0) {x := x - 1; while (y > 0) {y := y - 1}}");
    Program b = bound_loops(p, 3);
    REQUIRE(b.kind() == ProgramKind::BoundedWhile);
    CHECK(b.bound() == 3);
    CHECK(b.first().second().kind() == ProgramKind::BoundedWhile);
    CHECK_FALSE(contains_loop(parse_program("{skip} [1/2] {x := 1}")));
    CHECK(contains_loop(p));
}

TEST_CASE("variables_of collects reads and writes") {
    auto vars = variables_of(parse_program("x := y + 1; observe(odd(z))"));
    CHECK(vars == std::set<std::string>{"x", "y", "z"});
}
